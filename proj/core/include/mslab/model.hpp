#pragma once

/// @file model.hpp
/// @brief Continuous model data for the coupled system
///
///   du/dt = Laplace(Phi(u)) + f(v) u
///   dv/dt = mu div(D(u) grad v) + g(u, v)
///
/// together with the a-priori bound u_breve on time-discrete solutions and
/// the regularized nonlinearity that is linear beyond u_breve.

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>

namespace mslab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Phi(u) = u^m.
struct PowerLaw {
  double m = 2.0;
};

/// Phi'(u) = d1 u^alpha / (1 - u)^beta, singular at u = 1.
struct BiofilmSingular {
  double d1 = 1e-6;
  double alpha = 4.0;
  double beta = 4.0;
};

/// User-supplied nonlinearity. `phi` must satisfy phi(0) = 0 and be strictly
/// increasing on (0, b).
struct CustomPhi {
  std::function<double(double)> phi;
  std::function<double(double)> phi_prime;
  double b = kInfinity;
  double phi_m = 0.0;
  double phi_M = kInfinity;
  std::string label = "custom";
};

/// The diffusion nonlinearity Phi with its structural constants.
///
/// Arguments below zero are handled by constant extension:
/// Phi(u) = 0 and Phi'(u) = Phi'(0) for u < 0.
class Nonlinearity {
 public:
  using Kind = std::variant<PowerLaw, BiofilmSingular, CustomPhi>;

  explicit Nonlinearity(Kind kind);

  /// Integral of Phi' from 0 to u. Throws std::domain_error for u >= b.
  [[nodiscard]] double value(double u) const;
  /// Phi'(u). Throws std::domain_error for u >= b.
  [[nodiscard]] double derivative(double u) const;

  /// Upper density bound b (infinity for porous-medium type).
  [[nodiscard]] double upper_bound() const noexcept { return b_; }
  [[nodiscard]] bool singular() const noexcept { return b_ < kInfinity; }
  /// Infimum of Phi' on [0, b).
  [[nodiscard]] double phi_m() const noexcept { return phi_m_; }
  /// Supremum of Phi' on [0, b).
  [[nodiscard]] double phi_M() const noexcept { return phi_M_; }

  [[nodiscard]] const Kind& kind() const noexcept { return kind_; }
  [[nodiscard]] std::string describe() const;

 private:
  Kind kind_;
  double b_ = kInfinity;
  double phi_m_ = 0.0;
  double phi_M_ = kInfinity;
};

/// Free-function form of Nonlinearity::value.
double phi_eval(const Nonlinearity& phi, double u);

/// Inverse of Phi by bisection: returns u with |Phi(u) - w| <= 1e-12 max(1, w).
/// Throws std::invalid_argument for w < 0 and std::domain_error when w lies
/// beyond the range of a bounded Phi.
double invert_phi(const Nonlinearity& phi, double w);

/// Phi extended linearly past u_breve:
///   Phi_breve(u) = Phi(u)                                   for u <= u_breve
///   Phi_breve(u) = Phi'(u_breve) (u - u_breve) + Phi(u_breve) for u >= u_breve
/// For b = infinity the base nonlinearity is used unchanged.
class RegularizedPhi {
 public:
  /// Identity regularization (b = infinity).
  explicit RegularizedPhi(Nonlinearity base);
  RegularizedPhi(Nonlinearity base, double u_breve);

  [[nodiscard]] double value(double u) const;
  [[nodiscard]] double derivative(double u) const;

  [[nodiscard]] const Nonlinearity& base() const noexcept { return base_; }
  [[nodiscard]] std::optional<double> threshold() const noexcept { return u_breve_; }
  /// sup of Phi_breve' (finite whenever a threshold is set and Phi' is monotone).
  [[nodiscard]] double sup_derivative() const noexcept;

 private:
  Nonlinearity base_;
  std::optional<double> u_breve_;
  double phi_at_breve_ = 0.0;
  double phi_prime_at_breve_ = 0.0;
};

/// Builds the regularized nonlinearity. For b = infinity returns Phi unchanged.
/// Throws std::invalid_argument unless 0 < u_breve < b for a singular Phi.
RegularizedPhi regularize(const Nonlinearity& phi, double u_breve);

/// Model data (Phi, f, g, D, mu) with bound constants.
///
/// f and g are expected to be total: presets clamp negative substrate values
/// to zero before evaluation.
struct ModelSystem {
  Nonlinearity phi{PowerLaw{}};
  std::function<double(double)> f = [](double) { return 0.0; };
  double f_M = 0.0;
  std::function<double(double, double)> g = [](double, double) { return 0.0; };
  double g_M = 0.0;
  std::function<double(double)> D = [](double) { return 1.0; };
  double D_m = 1.0;
  double D_M = 1.0;
  int mu = 0;
  std::string name = "custom";

  /// min(1/f_M, 1/g_M) with 1/0 read as infinity.
  [[nodiscard]] double tau_disc() const noexcept;
  /// 1/f_M (infinity for f_M = 0). Steps must stay strictly below it.
  [[nodiscard]] double tau_growth_limit() const noexcept;
};

struct PmeParameters {
  double m = 4.0;
  double beta_reaction = 1.0;
  bool operator==(const PmeParameters&) const = default;
};

/// du/dt = Laplace(u^m) + beta u: f = beta, g = 0, no substrate coupling.
ModelSystem make_pme(const PmeParameters& p);

struct BiofilmParameters {
  double k1 = 0.4;
  double k2 = 0.01;
  double k3 = 1.0;
  double k4 = 0.42;
  double d1 = 1e-6;
  double d2 = 1.0;
  double alpha = 4.0;
  double beta = 4.0;
  int mu = 0;
  bool operator==(const BiofilmParameters&) const = default;
};

/// f(v) = k3 v/(v+k2) - k4, g(u,v) = -k1 u v/(v+k2), D = d2, with
/// f_M = max(k3 - k4, k4) and g_M = max(k1, k1/k2).
ModelSystem make_biofilm(const BiofilmParameters& p);

/// A-priori upper bound u_breve for the time-discrete solutions.
///
/// b = infinity: u0_sup exp(T f_M / (1 - tau f_M)).
/// b finite:     Phi^{-1}(phi_u0_sup + diam^2/(2 dim) f_M), by bisection.
///
/// Throws std::invalid_argument if tau >= 1/f_M, and std::domain_error if the
/// inversion target is outside the range of Phi.
double compute_u_breve(const ModelSystem& model, double u0_sup, double phi_u0_sup,
                       double domain_diam, int dim, double T, double tau);

}  // namespace mslab
