#pragma once

/// @file exact.hpp
/// @brief Closed-form reference solutions and analytic initial conditions.

#include "mslab/mesh.hpp"

namespace mslab {

/// Barenblatt profile parameters. `beta` is the reaction rate of the
/// modified equation du/dt = Laplace(u^m) + beta u.
struct BarenblattParams {
  double m = 4.0;
  int d = 1;
  double C = 1.0;
  double beta = 1.0;
  Point center{0.0, 0.0};
};

/// (m-1) / (2 m (d(m-1) + 2)), the coefficient of |x|^2 t^{-2/(d(m-1)+2)} in the profile.
double barenblatt_kappa(double m, int d);

/// z(x, t) = t^{-d/(d(m-1)+2)} [C - kappa |x t^{-1/(d(m-1)+2)}|^2]_+^{1/(m-1)}
/// Throws std::invalid_argument for t <= 0.
double barenblatt(const Point& x, double t, const BarenblattParams& p);

/// Radius of supp z(., t): sqrt(C/kappa) t^{1/(d(m-1)+2)}.
double barenblatt_support_radius(double t, const BarenblattParams& p);

/// s(t) = exp(beta (m-1) t) / (beta (m-1)).
double pme_similarity_time(double t, const BarenblattParams& p);

/// u(x, t) = exp(beta t) z(x, s(t)). Throws std::invalid_argument for beta = 0.
double exact_modified_pme(const Point& x, double t, const BarenblattParams& p);

/// Profile constant C for which supp u(., t) has the given radius.
double barenblatt_constant_for_radius(double radius, double t, const BarenblattParams& p);

/// Two hemispherical colonies:
///   u0 = (height/radius) (sqrt([r^2 - |x-c1|^2]_+) + sqrt([r^2 - |x-c2|^2]_+))
struct Hemispheres {
  double height = 0.9;
  double radius = 0.2;
  Point c1{-0.3, 0.0};
  Point c2{0.3, 0.0};
  bool operator==(const Hemispheres&) const = default;
};

double hemispheres(const Point& x, const Hemispheres& p);

}  // namespace mslab
