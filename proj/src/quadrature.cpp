#include "chasym/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "chasym/relevance.hpp"

namespace chasym {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

void adaptive(const std::function<double(double)>& f, double a, double b, double tol, int depth,
              QuadratureResult& acc) {
  double err = 0.0;
  double l1 = 0.0;
  const double v = GK::integrate(f, a, b, 0, 0.0, &err, &l1);
  // With max_depth 0 Boost reports the error of the rule on [-1, 1], before the
  // change of variables.
  err *= 0.5 * (b - a);
  // Below this the Kronrod estimate measures rounding, not truncation.
  const double roundoff = 100.0 * std::numeric_limits<double>::epsilon() * l1;
  if (err <= std::max(tol, roundoff) || depth <= 0 || !(b - a > 1e-14 * (std::abs(a) + std::abs(b)))) {
    acc.value += v;
    acc.error += err;
    if (err > std::max(tol, roundoff)) acc.converged = false;
    return;
  }
  const double m = 0.5 * (a + b);
  adaptive(f, a, m, 0.5 * tol, depth - 1, acc);
  adaptive(f, m, b, 0.5 * tol, depth - 1, acc);
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, int max_depth) {
  QuadratureResult r;
  adaptive(f, a, b, abs_tol, max_depth, r);
  return r;
}

QuadratureResult integrate_panels(const std::function<double(double)>& f, double a, double b,
                                  double panel, double abs_tol) {
  const int count = std::max(1, static_cast<int>(std::ceil((b - a) / panel)));
  const double h = (b - a) / count;
  QuadratureResult total;
  for (int i = 0; i < count; ++i) {
    const double lo = a + i * h;
    const double hi = i + 1 == count ? b : lo + h;
    auto r = integrate_adaptive(f, lo, hi, abs_tol / count);
    total.value += r.value;
    total.error += r.error;
    total.converged = total.converged && r.converged;
  }
  return total;
}

QuadratureResult radial_fourier_integral(double r, int n, int d, double a, double abs_tol) {
  if (!(a > 0.0)) throw ValidationError("kernel integral needs a > 0");
  if (n < 1) throw ValidationError("n must be positive");
  const double cutoff = std::pow(std::log(1e16) / a, 1.0 / (2 * n));
  const double panel = r > 0.0 ? std::min(cutoff / 16.0, std::numbers::pi / r) : cutoff / 16.0;
  auto decay = [a, n](double k) { return std::exp(-a * std::pow(k * k, n)); };
  constexpr double pi = std::numbers::pi;
  switch (d) {
    case 1:
      return [&] {
        auto res = integrate_panels([&](double k) { return std::cos(k * r) * decay(k); }, 0.0, cutoff, panel,
                                    0.5 * abs_tol);
        res.value *= 2.0;
        res.error *= 2.0;
        return res;
      }();
    case 2:
      return [&] {
        auto res = integrate_panels(
            [&](double k) { return k * boost::math::cyl_bessel_j(0, k * r) * decay(k); }, 0.0, cutoff, panel,
            abs_tol / (2.0 * pi));
        res.value *= 2.0 * pi;
        res.error *= 2.0 * pi;
        return res;
      }();
    case 3:
      return [&] {
        auto sinc = [](double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; };
        auto res = integrate_panels([&](double k) { return k * k * sinc(k * r) * decay(k); }, 0.0, cutoff,
                                    panel, abs_tol / (4.0 * pi));
        res.value *= 4.0 * pi;
        res.error *= 4.0 * pi;
        return res;
      }();
    default:
      throw ValidationError("kernel integral supports d = 1, 2, 3");
  }
}

}  // namespace chasym
