#pragma once

#include <functional>

namespace chasym {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // absolute error estimate
  bool converged = true;
};

/// Adaptive Gauss-Kronrod (15/31) bisection on [a, b] to an absolute target.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, int max_depth = 40);

/// Splits [a, b] into panels no longer than `panel` and integrates each adaptively;
/// the absolute target is shared evenly between panels.
QuadratureResult integrate_panels(const std::function<double(double)>& f, double a, double b,
                                  double panel, double abs_tol);

/// I(r) = int_{R^d} e^{i k.z} exp(-a |k|^{2n}) d^d k at |z| = r, reduced to a radial
/// integral for d = 2, 3. The k-range is cut at P with exp(-a P^{2n}) < 1e-16 and
/// paneled at half the oscillation wavelength pi / r.
QuadratureResult radial_fourier_integral(double r, int n, int d, double a, double abs_tol = 1e-10);

}  // namespace chasym
