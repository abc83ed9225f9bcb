#include "mslab/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace mslab {

namespace {

// Antiderivative of s^4/(1-s)^4 on [0, u], u < 1.
//
// The closed form loses all significant digits near u = 0 (every term is O(1)
// while the result is O(u^5)), so small arguments use the power series
//   sum_k C(k+3, 3) u^(k+5) / (k+5).
double biofilm44_integral(double u) {
  if (u < 0.25) {
    double sum = 0.0;
    double upow = std::pow(u, 5);
    for (int k = 0; k < 400; ++k) {
      const double binom = (k + 1.0) * (k + 2.0) * (k + 3.0) / 6.0;
      const double term = binom * upow / (k + 5.0);
      sum += term;
      if (term <= 1e-18 * sum) break;
      upow *= u;
    }
    return sum;
  }
  const double one_minus = 1.0 - u;
  return (18.0 * u * u - 30.0 * u + 13.0) / (3.0 * one_minus * one_minus * one_minus) + u +
         4.0 * std::log1p(-u) - 13.0 / 3.0;
}

double biofilm_derivative(const BiofilmSingular& p, double u) {
  return p.d1 * std::pow(u, p.alpha) / std::pow(1.0 - u, p.beta);
}

double biofilm_value(const BiofilmSingular& p, double u) {
  if (p.alpha == 4.0 && p.beta == 4.0) return p.d1 * biofilm44_integral(u);
  auto integrand = [&p](double s) { return biofilm_derivative(p, s); };
  double error = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, u, 20,
                                                                        1e-12, &error);
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

Nonlinearity::Nonlinearity(Kind kind) : kind_(std::move(kind)) {
  std::visit(Overloaded{
                 [this](const PowerLaw& p) {
                   if (!(p.m >= 1.0)) throw std::invalid_argument("PowerLaw: exponent m must be >= 1");
                   b_ = kInfinity;
                   phi_m_ = p.m == 1.0 ? 1.0 : 0.0;
                   phi_M_ = p.m == 1.0 ? 1.0 : kInfinity;
                 },
                 [this](const BiofilmSingular& p) {
                   if (!(p.d1 > 0.0)) throw std::invalid_argument("BiofilmSingular: d1 must be > 0");
                   if (!(p.alpha >= 1.0) || !(p.beta >= 1.0))
                     throw std::invalid_argument("BiofilmSingular: alpha and beta must be >= 1");
                   b_ = 1.0;
                   phi_m_ = 0.0;
                   phi_M_ = kInfinity;
                 },
                 [this](const CustomPhi& p) {
                   if (!p.phi || !p.phi_prime)
                     throw std::invalid_argument("CustomPhi: phi and phi_prime must be set");
                   if (!(p.b > 0.0)) throw std::invalid_argument("CustomPhi: b must be > 0");
                   b_ = p.b;
                   phi_m_ = p.phi_m;
                   phi_M_ = p.phi_M;
                 },
             },
             kind_);
}

double Nonlinearity::value(double u) const {
  if (u <= 0.0) return 0.0;
  if (u >= b_) {
    std::ostringstream msg;
    msg << "Phi evaluated at u = " << u << " >= b = " << b_;
    throw std::domain_error(msg.str());
  }
  return std::visit(Overloaded{
                        [u](const PowerLaw& p) { return std::pow(u, p.m); },
                        [u](const BiofilmSingular& p) { return biofilm_value(p, u); },
                        [u](const CustomPhi& p) { return p.phi(u); },
                    },
                    kind_);
}

double Nonlinearity::derivative(double u) const {
  const double x = std::max(u, 0.0);
  if (x >= b_) {
    std::ostringstream msg;
    msg << "Phi' evaluated at u = " << u << " >= b = " << b_;
    throw std::domain_error(msg.str());
  }
  return std::visit(Overloaded{
                        [x](const PowerLaw& p) {
                          return p.m == 1.0 ? 1.0 : p.m * std::pow(x, p.m - 1.0);
                        },
                        [x](const BiofilmSingular& p) { return biofilm_derivative(p, x); },
                        [x](const CustomPhi& p) { return p.phi_prime(x); },
                    },
                    kind_);
}

std::string Nonlinearity::describe() const {
  std::ostringstream out;
  std::visit(Overloaded{
                 [&out](const PowerLaw& p) { out << "power_law(m=" << p.m << ")"; },
                 [&out](const BiofilmSingular& p) {
                   out << "biofilm(d1=" << p.d1 << ", alpha=" << p.alpha << ", beta=" << p.beta
                       << ")";
                 },
                 [&out](const CustomPhi& p) { out << p.label; },
             },
             kind_);
  return out.str();
}

double phi_eval(const Nonlinearity& phi, double u) { return phi.value(u); }

double invert_phi(const Nonlinearity& phi, double w) {
  if (!(w >= 0.0)) throw std::invalid_argument("invert_phi: target value must be >= 0");
  if (w == 0.0) return 0.0;

  double lo = 0.0;
  double hi = 0.0;
  if (phi.singular()) {
    hi = std::nextafter(phi.upper_bound(), 0.0);
    if (phi.value(hi) < w)
      throw std::domain_error("invert_phi: target exceeds the range of Phi below b");
  } else {
    hi = 1.0;
    int doublings = 0;
    while (phi.value(hi) < w) {
      lo = hi;
      hi *= 2.0;
      if (++doublings > 1100) throw std::domain_error("invert_phi: no bracket found");
    }
  }

  // Bisect until the bracket cannot shrink further in double precision.
  for (int it = 0; it < 4000; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (phi.value(mid) < w)
      lo = mid;
    else
      hi = mid;
  }
  return std::abs(phi.value(lo) - w) <= std::abs(phi.value(hi) - w) ? lo : hi;
}

RegularizedPhi::RegularizedPhi(Nonlinearity base) : base_(std::move(base)) {}

RegularizedPhi::RegularizedPhi(Nonlinearity base, double u_breve)
    : base_(std::move(base)), u_breve_(u_breve) {
  if (!(u_breve > 0.0) || !(u_breve < base_.upper_bound()))
    throw std::invalid_argument("regularize: threshold must satisfy 0 < u_breve < b");
  phi_at_breve_ = base_.value(u_breve);
  phi_prime_at_breve_ = base_.derivative(u_breve);
}

double RegularizedPhi::value(double u) const {
  if (u_breve_ && u > *u_breve_) return phi_prime_at_breve_ * (u - *u_breve_) + phi_at_breve_;
  return base_.value(u);
}

double RegularizedPhi::derivative(double u) const {
  if (u_breve_ && u >= *u_breve_) return phi_prime_at_breve_;
  return base_.derivative(u);
}

double RegularizedPhi::sup_derivative() const noexcept {
  return u_breve_ ? phi_prime_at_breve_ : base_.phi_M();
}

RegularizedPhi regularize(const Nonlinearity& phi, double u_breve) {
  if (!phi.singular()) return RegularizedPhi(phi);
  return RegularizedPhi(phi, u_breve);
}

double ModelSystem::tau_disc() const noexcept {
  const double tg = g_M > 0.0 ? 1.0 / g_M : kInfinity;
  return std::min(tau_growth_limit(), tg);
}

double ModelSystem::tau_growth_limit() const noexcept {
  return f_M > 0.0 ? 1.0 / f_M : kInfinity;
}

ModelSystem make_pme(const PmeParameters& p) {
  ModelSystem model;
  model.phi = Nonlinearity(PowerLaw{p.m});
  const double beta = p.beta_reaction;
  model.f = [beta](double) { return beta; };
  model.f_M = std::abs(beta);
  model.g = [](double, double) { return 0.0; };
  model.g_M = 0.0;
  model.D = [](double) { return 1.0; };
  model.mu = 0;
  model.name = "pme";
  return model;
}

ModelSystem make_biofilm(const BiofilmParameters& p) {
  if (!(p.k1 > 0.0 && p.k2 > 0.0 && p.k3 > 0.0 && p.k4 > 0.0 && p.d2 > 0.0))
    throw std::invalid_argument("biofilm: k1..k4 and d2 must be > 0");
  if (p.mu != 0 && p.mu != 1) throw std::invalid_argument("biofilm: mu must be 0 or 1");

  ModelSystem model;
  model.phi = Nonlinearity(BiofilmSingular{p.d1, p.alpha, p.beta});
  const double k1 = p.k1, k2 = p.k2, k3 = p.k3, k4 = p.k4, d2 = p.d2;
  model.f = [k2, k3, k4](double v) {
    const double vp = std::max(v, 0.0);
    return k3 * vp / (vp + k2) - k4;
  };
  model.f_M = std::max(std::abs(k3 - k4), k4);
  model.g = [k1, k2](double u, double v) {
    const double up = std::max(u, 0.0);
    const double vp = std::max(v, 0.0);
    return -k1 * up * vp / (vp + k2);
  };
  model.g_M = std::max(k1, k1 / k2);
  model.D = [d2](double) { return d2; };
  model.D_m = d2;
  model.D_M = d2;
  model.mu = p.mu;
  model.name = "biofilm";
  return model;
}

double compute_u_breve(const ModelSystem& model, double u0_sup, double phi_u0_sup,
                       double domain_diam, int dim, double T, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("compute_u_breve: tau must be > 0");
  if (model.f_M > 0.0 && tau * model.f_M >= 1.0)
    throw std::invalid_argument("compute_u_breve: tau must be < 1/f_M");
  if (dim < 1) throw std::invalid_argument("compute_u_breve: dim must be >= 1");

  if (!model.phi.singular())
    return u0_sup * std::exp(T * model.f_M / (1.0 - tau * model.f_M));

  const double target =
      phi_u0_sup + domain_diam * domain_diam / (2.0 * static_cast<double>(dim)) * model.f_M;
  return invert_phi(model.phi, target);
}

}  // namespace mslab
