#pragma once

// The rescaled linear generator
//   L = -(p.p)^n - (1/2n) p.grad_p          (Fourier side, frame beta = d/2n)
// its spectrum, its self-similar profiles, the semigroup e^{tau L} in closed
// Fourier form and the convolution kernel g(z, tau) of that semigroup.
//
// Fourier convention throughout: unitary,
//   v~(p) = (2 pi)^{-d/2} int e^{-i p.x} v(x) dx,
// so the zero mode of the profile f* is exactly 1.

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "chasym/grid.hpp"
#include "chasym/relevance.hpp"

namespace chasym {

using Complex = std::complex<double>;

/// beta - (d + j) / (2n). Reduces to -j/(2n) for beta = d/(2n) and to (1 - j)/4
/// for the (n, d, beta) = (2, 1, 1/2) frame.
Rational eigenvalue(int j, const ScalingFrame& frame);

/// phi_alpha(p) = p^alpha exp(-(p.p)^n)
double eigenfunction_fourier(const MultiIndex& alpha, int n, std::span<const double> p);
/// Closed-form gradient of phi_alpha.
std::vector<double> eigenfunction_gradient(const MultiIndex& alpha, int n, std::span<const double> p);

/// Samples of a function on the Fourier grid dual to `grid`. Coefficients are
/// stored in centered order: position j along an axis holds wave index m = j - N/2,
/// p_m = 2 pi m / L.
struct SpectralField {
  Grid grid;
  std::vector<Complex> coeffs;

  explicit SpectralField(const Grid& g) : grid(g), coeffs(g.size()) {}
  double wavenumber(int position) const;
  /// Discrete L2 norm over the p-grid: sqrt(sum |c|^2 dp^d).
  double norm() const;
};

SpectralField sample_fourier(const Grid& grid, const std::function<Complex(std::span<const double>)>& fn);
/// Trapezoid approximation of the unitary transform of a real field.
SpectralField to_spectral(const Field& v);
/// Inverse of to_spectral (real part).
Field to_field(const SpectralField& s);
/// Band-limited evaluation of the transform of `v` at the dilated points c * p_m:
/// v~(c p) = (2 pi)^{-d/2} h^d sum_j v_j exp(-i c p . x_j), applied axis by axis.
SpectralField evaluate_dilated(const Field& v, double c);

/// D^alpha in Fourier: multiply by (i p)^alpha.
SpectralField differentiate(const SpectralField& s, const MultiIndex& alpha);

/// e^{tau L} v0 via characteristics:
///   v~(p, tau) = exp(-(p.p)^n a(tau)) v0~(p e^{-tau/(2n)}),  a(tau) = 1 - e^{-tau},
/// times e^{(beta - d/2n) tau} for a frame with a different amplitude exponent.
/// Throws NumericalFailure when the input is not decayed at the box edge to
/// `interpolation_tol` (relative), since the off-grid evaluation is then inexact.
SpectralField semigroup_apply(const SpectralField& v0, double tau, const ScalingFrame& frame,
                              double interpolation_tol = 1e-10);

/// Relative L2 residual || D^alpha e^{tau L} v - e^{tau |alpha|/2n} e^{tau L} D^alpha v || / ||v||.
double commutation_check(const SpectralField& v, const MultiIndex& alpha, double tau, const ScalingFrame& frame);

struct Profile {
  ScalingFrame frame;
  Field samples;
  double error_estimate = 0.0;  // max abs deviation under p-grid refinement + truncation bound
};

/// f*(xi) = (2 pi)^{-d/2} int e^{i p.xi} exp(-(p.p)^n) dp tabulated on `grid` by DFT.
/// Throws NumericalFailure if the error estimate exceeds `tolerance`.
Profile profile(const ScalingFrame& frame, const Grid& grid, double tolerance = 1e-8);

/// -(2 pi)^{-d/2} d f*/d xi_axis: the j = 1 eigenmode normalized so that
/// int xi_axis F dxi = 1.
Field first_moment_profile(const ScalingFrame& frame, const Grid& grid, int axis);

/// f*(xi) for radially symmetric |xi| = r by adaptive quadrature.
double profile_value(int n, int d, double r, double abs_tol = 1e-12);

/// Radius beyond which |f*| stays below rel * f*(0) (scanned on [0, 100]).
double profile_decay_radius(int n, int d, double rel = 1e-6);

struct KernelSample {
  std::vector<double> z;
  double tau = 0.0;
  double value = 0.0;
  double error = 0.0;
  double a = 0.0;  // 1 - e^{-tau}
};

/// g(z, tau) = int d^d k e^{i k.z} exp(-(k.k)^n (1 - e^{-tau})).
KernelSample kernel_g(std::span<const double> z, double tau, int n, int d, double abs_tol = 1e-10);

struct DecayFit {
  double gamma_hat = 0.0;     // rate in log|g| ~ c - gamma |z|^s
  double exponent_hat = 0.0;  // stretching exponent s
  double r2 = 0.0;
  int samples = 0;
};

/// Least-squares fit of log|g(z, tau)| against |z|^s over z in [z_min, z_max]
/// (one point per oscillation lobe when g changes sign). Samples with |g| <= 1e-12
/// are discarded; fewer than 8 usable samples is a ValidationError.
DecayFit kernel_decay_fit(int n, int d, double tau, double z_min, double z_max, int scan_points = 1600);

}  // namespace chasym
