#include "mslab/exact.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mslab {

namespace {

double squared_distance(const Point& a, const Point& b, int d) {
  const double dx = a[0] - b[0];
  const double dy = d >= 2 ? a[1] - b[1] : 0.0;
  return dx * dx + dy * dy;
}

double similarity_exponent(const BarenblattParams& p) { return p.d * (p.m - 1.0) + 2.0; }

}  // namespace

double barenblatt_kappa(double m, int d) { return (m - 1.0) / (2.0 * m * (d * (m - 1.0) + 2.0)); }

double barenblatt(const Point& x, double t, const BarenblattParams& p) {
  if (!(t > 0.0)) throw std::invalid_argument("barenblatt: t must be > 0");
  const double k = similarity_exponent(p);
  const double r2 = squared_distance(x, p.center, p.d) * std::pow(t, -2.0 / k);
  const double bracket = p.C - barenblatt_kappa(p.m, p.d) * r2;
  if (bracket <= 0.0) return 0.0;
  return std::pow(t, -p.d / k) * std::pow(bracket, 1.0 / (p.m - 1.0));
}

double barenblatt_support_radius(double t, const BarenblattParams& p) {
  return std::sqrt(p.C / barenblatt_kappa(p.m, p.d)) * std::pow(t, 1.0 / similarity_exponent(p));
}

double pme_similarity_time(double t, const BarenblattParams& p) {
  if (p.beta == 0.0) throw std::invalid_argument("exact_modified_pme: beta must be non-zero");
  const double rate = p.beta * (p.m - 1.0);
  return std::exp(rate * t) / rate;
}

double exact_modified_pme(const Point& x, double t, const BarenblattParams& p) {
  return std::exp(p.beta * t) * barenblatt(x, pme_similarity_time(t, p), p);
}

double barenblatt_constant_for_radius(double radius, double t, const BarenblattParams& p) {
  const double s = pme_similarity_time(t, p);
  return barenblatt_kappa(p.m, p.d) * radius * radius * std::pow(s, -2.0 / similarity_exponent(p));
}

double hemispheres(const Point& x, const Hemispheres& p) {
  const int d = 2;  // c.y is ignored in 1D because x[1] == c[1] == 0 there
  const double r2 = p.radius * p.radius;
  const double a = std::sqrt(std::max(0.0, r2 - squared_distance(x, p.c1, d)));
  const double b = std::sqrt(std::max(0.0, r2 - squared_distance(x, p.c2, d)));
  return p.height / p.radius * (a + b);
}

}  // namespace mslab
