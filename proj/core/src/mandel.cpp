#include "poromech/mandel.hpp"

#include <cmath>
#include <numbers>

#include "poromech/error.hpp"

namespace poromech {

double MandelParams::skempton() const {
  return alpha / (storage * bulk_modulus() + alpha * alpha);
}

double MandelParams::poisson() const { return lambda / (2.0 * (lambda + G)); }

double MandelParams::undrained_poisson() const {
  const double m = storage * bulk_modulus() + alpha * alpha;
  return (3.0 * m - 2.0 * G * storage) / (2.0 * (3.0 * m + G * storage));
}

double MandelParams::consolidation_coefficient() const {
  const double B = skempton();
  const double nu = poisson();
  const double nu_u = undrained_poisson();
  return 2.0 * kappa * B * B * G * (1.0 - nu) * (1.0 + nu_u) * (1.0 + nu_u) /
         (9.0 * (1.0 - nu_u) * (nu_u - nu));
}

double MandelParams::characteristic_time() const { return a * a / (kappa * (lambda + 2.0 * G)); }

std::vector<double> mandel_roots(double k, int n_terms) {
  if (!(k > 1.0)) throw Error(ErrorKind::internal, "Mandel root coefficient must exceed 1");
  constexpr double pi = std::numbers::pi;
  std::vector<double> roots;
  roots.reserve(n_terms);
  const auto f = [k](double r) { return std::tan(r) - k * r; };
  for (int n = 1; n <= n_terms; ++n) {
    double lo = (n - 1) * pi + (n == 1 ? 1e-12 : 0.0);
    double hi = (n - 1) * pi + 0.5 * pi - 1e-14 * n;
    if (!(f(lo) < 0.0) || !(f(hi) > 0.0)) throw Error(ErrorKind::internal, "Mandel root not bracketed");
    double r = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
      const double fr = f(r);
      if (fr < 0.0) lo = r;
      else hi = r;
      const double sec = 1.0 / std::cos(r);
      const double step = fr / (sec * sec - k);
      double next = r - step;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - r) <= 1e-15 * std::max(1.0, r)) {
        r = next;
        break;
      }
      r = next;
    }
    roots.push_back(r);
  }
  return roots;
}

MandelSolution::MandelSolution(const MandelParams& params) : params_(params) {
  if (!(params.a > 0.0) || !(params.b > 0.0) || !(params.G > 0.0) || !(params.kappa > 0.0) || params.n_terms < 1)
    throw Error(ErrorKind::invalid_argument, "invalid Mandel parameters");
  nu_ = params.poisson();
  nu_u_ = params.undrained_poisson();
  c_ = params.consolidation_coefficient();
  p0_ = params.F * params.skempton() * (1.0 + nu_u_) / (3.0 * params.a);
  roots_ = mandel_roots((1.0 - nu_) / (nu_u_ - nu_), params.n_terms);
}

double MandelSolution::pressure(double x, double t) const {
  const double a = params_.a;
  if (t <= 0.0) return p0_;
  double sum = 0.0;
  for (double r : roots_) {
    const double e = std::exp(-r * r * c_ * t / (a * a));
    if (e == 0.0) break;
    const double s = std::sin(r), c = std::cos(r);
    sum += s / (r - s * c) * (std::cos(r * x / a) - c) * e;
  }
  return 2.0 * p0_ * sum;
}

Vec2 MandelSolution::displacement(const Vec2& x, double t) const {
  const double a = params_.a, F = params_.F, G = params_.G;
  if (t <= 0.0) {
    return {F * nu_u_ * x.x() / (2.0 * G * a), -F * (1.0 - nu_u_) * x.y() / (2.0 * G * a)};
  }
  double s1 = 0.0, s2 = 0.0;
  for (double r : roots_) {
    const double e = std::exp(-r * r * c_ * t / (a * a));
    if (e == 0.0) break;
    const double s = std::sin(r), c = std::cos(r);
    const double d = r - s * c;
    s1 += s * c / d * e;
    s2 += c / d * std::sin(r * x.x() / a) * e;
  }
  const double ux = (F * nu_ / (2.0 * G * a) - F * nu_u_ / (G * a) * s1) * x.x() + F / G * s2;
  const double uy = (-F * (1.0 - nu_) / (2.0 * G * a) + F * (1.0 - nu_u_) / (G * a) * s1) * x.y();
  return {ux, uy};
}

}  // namespace poromech
