#include "chasym/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <limits>
#include <numbers>
#include <numeric>
#include <tuple>

#include "chasym/fft.hpp"
#include "chasym/kernels.hpp"
#include "chasym/quadrature.hpp"

namespace chasym {

namespace {

constexpr double kPi = std::numbers::pi;

double norm_power(std::span<const double> p, int n) {
  double s = 0.0;
  for (double v : p) s += v * v;
  return std::pow(s, n);
}

double monomial(const MultiIndex& alpha, std::span<const double> p) {
  double m = 1.0;
  for (int i = 0; i < alpha.dim(); ++i) m *= std::pow(p[static_cast<size_t>(i)], alpha[i]);
  return m;
}

// Centered position j (wave index m = j - N/2) <-> FFT storage index.
std::size_t fft_index(const Grid& g, std::size_t centered) {
  auto idx = unflatten(g, centered);
  std::size_t k = 0;
  for (int a = 0; a < g.dim; ++a) {
    k = k * static_cast<std::size_t>(g.n) +
        static_cast<std::size_t>((idx[static_cast<size_t>(a)] + g.n / 2) % g.n);
  }
  return k;
}

int wave_sum(const Grid& g, std::size_t centered) {
  auto idx = unflatten(g, centered);
  int s = 0;
  for (int a = 0; a < g.dim; ++a) s += idx[static_cast<size_t>(a)] - g.n / 2;
  return s;
}

// Complex real-space samples of the inverse transform.
std::vector<Complex> inverse_samples(const SpectralField& s) {
  const Grid& g = s.grid;
  ComplexFft fft(g);
  auto buf = fft.data();
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double sign = (wave_sum(g, j) & 1) ? -1.0 : 1.0;
    buf[fft_index(g, j)] = sign * s.coeffs[j];
  }
  fft.backward();
  const double scale = std::pow(2.0 * kPi, -0.5 * g.dim) * std::pow(2.0 * kPi / g.length, g.dim);
  std::vector<Complex> out(buf.begin(), buf.end());
  for (auto& v : out) v *= scale;
  return out;
}

// v~(c p_m) from complex real-space samples, one axis at a time.
SpectralField dilate_samples(const Grid& g, std::vector<Complex> data, double c) {
  const int n = g.n;
  std::vector<Complex> matrix(static_cast<size_t>(n) * static_cast<size_t>(n));
  for (int m = 0; m < n; ++m) {
    const double p = 2.0 * kPi / g.length * (m - n / 2);
    for (int j = 0; j < n; ++j) {
      matrix[static_cast<size_t>(m * n + j)] = std::polar(1.0, -c * p * g.coordinate(j));
    }
  }
  std::vector<Complex> out(data.size());
  for (int axis = 0; axis < g.dim; ++axis) {
    std::size_t stride = 1;
    for (int a = g.dim - 1; a > axis; --a) stride *= static_cast<std::size_t>(n);
    const std::size_t lines = data.size() / static_cast<std::size_t>(n);
#pragma omp parallel for schedule(static)
    for (long long li = 0; li < static_cast<long long>(lines); ++li) {
      const std::size_t l = static_cast<std::size_t>(li);
      const std::size_t base = (l / stride) * stride * static_cast<std::size_t>(n) + l % stride;
      for (int m = 0; m < n; ++m) {
        Complex acc = 0.0;
        const Complex* row = &matrix[static_cast<size_t>(m * n)];
        for (int j = 0; j < n; ++j) acc += row[j] * data[base + static_cast<std::size_t>(j) * stride];
        out[base + static_cast<std::size_t>(m) * stride] = acc;
      }
    }
    std::swap(data, out);
  }
  SpectralField s(g);
  const double scale = std::pow(2.0 * kPi, -0.5 * g.dim) * g.cell_volume();
  for (std::size_t i = 0; i < data.size(); ++i) s.coeffs[i] = scale * data[i];
  return s;
}

double edge_ratio(const Grid& g, const std::vector<Complex>& samples) {
  double peak = 0.0;
  double edge = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double v = std::abs(samples[i]);
    peak = std::max(peak, v);
    auto idx = unflatten(g, i);
    bool face = false;
    for (int a = 0; a < g.dim; ++a) face |= idx[static_cast<size_t>(a)] == 0;
    if (face) edge = std::max(edge, v);
  }
  return peak > 0.0 ? edge / peak : 0.0;
}

std::vector<double> p_vector(const Grid& g, std::size_t centered) {
  auto idx = unflatten(g, centered);
  std::vector<double> p(static_cast<size_t>(g.dim));
  for (int a = 0; a < g.dim; ++a) {
    p[static_cast<size_t>(a)] = 2.0 * kPi / g.length * (idx[static_cast<size_t>(a)] - g.n / 2);
  }
  return p;
}

Field tabulate_spectral_profile(const Grid& grid, const std::function<Complex(std::span<const double>)>& fn) {
  return to_field(sample_fourier(grid, fn));
}

}  // namespace

Rational eigenvalue(int j, const ScalingFrame& frame) {
  if (j < 0) throw ValidationError("eigenvalue index must be non-negative");
  return frame.beta - Rational(frame.d + j, 2 * frame.n);
}

double eigenfunction_fourier(const MultiIndex& alpha, int n, std::span<const double> p) {
  return monomial(alpha, p) * std::exp(-norm_power(p, n));
}

std::vector<double> eigenfunction_gradient(const MultiIndex& alpha, int n, std::span<const double> p) {
  const std::size_t d = p.size();
  double r2 = 0.0;
  for (double v : p) r2 += v * v;
  const double e = std::exp(-std::pow(r2, n));
  const double mono = monomial(alpha, p);
  const double radial = 2.0 * n * std::pow(r2, n - 1);
  std::vector<double> grad(d);
  for (std::size_t i = 0; i < d; ++i) {
    const int ai = alpha[static_cast<int>(i)];
    double dmono = 0.0;
    if (ai > 0) {
      dmono = ai;
      for (std::size_t k = 0; k < d; ++k) {
        dmono *= std::pow(p[k], alpha[static_cast<int>(k)] - (k == i ? 1 : 0));
      }
    }
    grad[i] = (dmono - mono * radial * p[i]) * e;
  }
  return grad;
}

double SpectralField::wavenumber(int position) const { return 2.0 * kPi / grid.length * (position - grid.n / 2); }

double SpectralField::norm() const {
  double s = 0.0;
  for (const auto& c : coeffs) s += std::norm(c);
  return std::sqrt(s * std::pow(2.0 * kPi / grid.length, grid.dim));
}

SpectralField sample_fourier(const Grid& grid, const std::function<Complex(std::span<const double>)>& fn) {
  grid.validate();
  SpectralField s(grid);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    auto p = p_vector(grid, j);
    s.coeffs[j] = fn(p);
  }
  return s;
}

SpectralField to_spectral(const Field& v) {
  const Grid& g = v.grid;
  ComplexFft fft(g);
  auto buf = fft.data();
  std::copy(v.values.begin(), v.values.end(), buf.begin());
  fft.forward();
  SpectralField s(g);
  const double scale = std::pow(2.0 * kPi, -0.5 * g.dim) * g.cell_volume();
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double sign = (wave_sum(g, j) & 1) ? -1.0 : 1.0;
    s.coeffs[j] = sign * scale * buf[fft_index(g, j)];
  }
  return s;
}

Field to_field(const SpectralField& s) {
  auto samples = inverse_samples(s);
  Field f(s.grid);
  for (std::size_t i = 0; i < samples.size(); ++i) f.values[i] = samples[i].real();
  return f;
}

SpectralField evaluate_dilated(const Field& v, double c) {
  std::vector<Complex> data(v.values.begin(), v.values.end());
  return dilate_samples(v.grid, std::move(data), c);
}

SpectralField differentiate(const SpectralField& s, const MultiIndex& alpha) {
  if (alpha.dim() != s.grid.dim) throw ValidationError("multi-index dimension mismatch");
  SpectralField out(s.grid);
  for (std::size_t j = 0; j < s.coeffs.size(); ++j) {
    auto p = p_vector(s.grid, j);
    Complex f = 1.0;
    for (int a = 0; a < alpha.dim(); ++a) f *= std::pow(Complex(0.0, p[static_cast<size_t>(a)]), alpha[a]);
    out.coeffs[j] = f * s.coeffs[j];
  }
  return out;
}

SpectralField semigroup_apply(const SpectralField& v0, double tau, const ScalingFrame& frame,
                              double interpolation_tol) {
  if (!(tau >= 0.0)) throw ValidationError("semigroup time must be non-negative");
  if (frame.d != v0.grid.dim) throw ValidationError("frame dimension does not match grid");
  const Grid& g = v0.grid;
  const int n = frame.n;
  auto samples = inverse_samples(v0);
  const double tail = edge_ratio(g, samples);
  if (tail > interpolation_tol) {
    throw NumericalFailure("semigroup: input not decayed at box edge (relative tail " + fmt_num(tail) +
                           "), band-limited evaluation is inexact");
  }
  const double c = std::exp(-tau / (2.0 * n));
  auto out = dilate_samples(g, std::move(samples), c);
  const double a = -std::expm1(-tau);
  const double amplitude = std::exp((to_double(frame.beta) - static_cast<double>(frame.d) / (2.0 * n)) * tau);
  for (std::size_t j = 0; j < g.size(); ++j) {
    auto p = p_vector(g, j);
    out.coeffs[j] *= amplitude * std::exp(-norm_power(p, n) * a);
  }
  return out;
}

double commutation_check(const SpectralField& v, const MultiIndex& alpha, double tau, const ScalingFrame& frame) {
  auto lhs = differentiate(semigroup_apply(v, tau, frame), alpha);
  auto rhs = semigroup_apply(differentiate(v, alpha), tau, frame);
  const double factor = std::exp(tau * alpha.total() / (2.0 * frame.n));
  SpectralField diff(v.grid);
  for (std::size_t j = 0; j < diff.coeffs.size(); ++j) diff.coeffs[j] = lhs.coeffs[j] - factor * rhs.coeffs[j];
  const double vn = v.norm();
  return vn > 0.0 ? diff.norm() / vn : diff.norm();
}

Profile profile(const ScalingFrame& frame, const Grid& grid, double tolerance) {
  grid.validate();
  if (frame.d != grid.dim) throw ValidationError("frame dimension does not match grid");
  const int n = frame.n;
  auto symbol = [n](std::span<const double> p) { return Complex(std::exp(-norm_power(p, n)), 0.0); };
  Profile prof{frame, tabulate_spectral_profile(grid, symbol), 0.0};

  double refinement = 0.0;
  if (grid.dim <= 2) {
    // Halve the p-spacing: same nodes, twice the box.
    Grid fine{grid.dim, 2 * grid.n, 2.0 * grid.length};
    auto ref = tabulate_spectral_profile(fine, symbol);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      auto idx = unflatten(grid, i);
      std::size_t k = 0;
      for (int a = 0; a < grid.dim; ++a) {
        k = k * static_cast<std::size_t>(fine.n) + static_cast<std::size_t>(idx[static_cast<size_t>(a)] + grid.n / 2);
      }
      refinement = std::max(refinement, std::abs(ref.values[k] - prof.samples.values[i]));
    }
  } else {
    // A doubled 3-d box is too large to hold; compare against quadrature along an axis.
    const std::size_t stride = static_cast<std::size_t>(grid.n) * static_cast<std::size_t>(grid.n);
    const std::size_t centre = static_cast<std::size_t>(grid.n / 2) * (stride + static_cast<std::size_t>(grid.n));
    for (int j = 0; j < grid.n; j += 4) {
      const double r = std::abs(grid.coordinate(j));
      const double exact = profile_value(n, grid.dim, r);
      refinement = std::max(refinement, std::abs(exact - prof.samples.values[centre + static_cast<std::size_t>(j) * stride]));
    }
  }
  // Mass of exp(-(p.p)^n) outside the resolved band.
  const double pmax = grid.max_wavenumber();
  const double surface = grid.dim == 1 ? 2.0 : (grid.dim == 2 ? 2.0 * kPi : 4.0 * kPi);
  const double cut = std::pow(std::log(1e16), 1.0 / (2 * n)) + pmax;
  auto tail = integrate_adaptive([&](double p) { return surface * std::pow(p, grid.dim - 1) * std::exp(-std::pow(p, 2 * n)); },
                                 pmax, std::max(cut, pmax + 1.0), 1e-18);
  prof.error_estimate = refinement + std::pow(2.0 * kPi, -0.5 * grid.dim) * tail.value;
  if (prof.error_estimate > tolerance) {
    throw NumericalFailure("profile: error estimate " + fmt_num(prof.error_estimate) +
                           " exceeds tolerance " + fmt_num(tolerance));
  }
  return prof;
}

Field first_moment_profile(const ScalingFrame& frame, const Grid& grid, int axis) {
  grid.validate();
  if (axis < 0 || axis >= grid.dim) throw ValidationError("axis out of range");
  const int n = frame.n;
  const double norm = std::pow(2.0 * kPi, -0.5 * grid.dim);
  return tabulate_spectral_profile(grid, [&](std::span<const double> p) {
    return Complex(0.0, -norm * p[static_cast<size_t>(axis)]) * std::exp(-norm_power(p, n));
  });
}

double profile_value(int n, int d, double r, double abs_tol) {
  auto res = radial_fourier_integral(std::abs(r), n, d, 1.0, abs_tol);
  return std::pow(2.0 * kPi, -0.5 * d) * res.value;
}

double profile_decay_radius(int n, int d, double rel) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, double>, double> cache;
  {
    std::lock_guard lock(mutex);
    auto it = cache.find({n, d, rel});
    if (it != cache.end()) return it->second;
  }
  const double peak = std::abs(profile_value(n, d, 0.0));
  double radius = 0.0;
  for (double r = 100.0; r > 0.0; r -= 0.1) {
    if (std::abs(profile_value(n, d, r, 1e-14)) > rel * peak) {
      radius = r + 0.1;
      break;
    }
  }
  std::lock_guard lock(mutex);
  cache[{n, d, rel}] = radius;
  return radius;
}

KernelSample kernel_g(std::span<const double> z, double tau, int n, int d, double abs_tol) {
  if (!(tau > 0.0)) throw ValidationError("kernel g requires tau > 0");
  if (static_cast<int>(z.size()) != d) throw ValidationError("kernel point dimension does not match d");
  double r2 = 0.0;
  for (double v : z) r2 += v * v;
  KernelSample s;
  s.z.assign(z.begin(), z.end());
  s.tau = tau;
  s.a = -std::expm1(-tau);
  auto res = radial_fourier_integral(std::sqrt(r2), n, d, s.a, abs_tol);
  if (!res.converged) {
    throw NumericalFailure("kernel quadrature did not converge, achieved error " + fmt_num(res.error));
  }
  s.value = res.value;
  s.error = res.error;
  return s;
}

DecayFit kernel_decay_fit(int n, int d, double tau, double z_min, double z_max, int scan_points) {
  if (!(z_max > z_min) || z_min < 0.0) throw ValidationError("decay fit needs 0 <= z_min < z_max");
  if (scan_points < 8) throw ValidationError("decay fit needs at least 8 scan points");
  std::vector<double> zs(static_cast<size_t>(scan_points));
  for (int i = 0; i < scan_points; ++i) zs[static_cast<size_t>(i)] = z_min + (z_max - z_min) * i / (scan_points - 1);
  std::vector<double> gs(zs.size());
  constexpr double floor = 1e-12;
  const double a = -std::expm1(-tau);
  kernels::tabulate(zs, [&](double z) { return radial_fourier_integral(z, n, d, a, 1e-15).value; }, gs);

  // One representative per sign lobe: the sample of largest |g|.
  std::vector<double> fz, fl;
  bool oscillates = false;
  for (std::size_t i = 1; i < gs.size(); ++i) {
    if (std::abs(gs[i]) > floor && std::abs(gs[i - 1]) > floor) oscillates |= (gs[i] > 0) != (gs[i - 1] > 0);
  }
  if (oscillates) {
    std::size_t i = 0;
    while (i < gs.size()) {
      std::size_t j = i;
      std::size_t best = i;
      while (j < gs.size() && (gs[j] > 0) == (gs[i] > 0)) {
        if (std::abs(gs[j]) > std::abs(gs[best])) best = j;
        ++j;
      }
      // Lobes cut by the scan window do not carry their true maximum.
      const bool interior = i > 0 && j < gs.size();
      if (interior && std::abs(gs[best]) > floor) {
        fz.push_back(zs[best]);
        fl.push_back(std::log(std::abs(gs[best])));
      }
      i = j;
    }
  } else {
    for (std::size_t i = 0; i < gs.size(); ++i) {
      if (std::abs(gs[i]) > floor) {
        fz.push_back(zs[i]);
        fl.push_back(std::log(std::abs(gs[i])));
      }
    }
  }
  if (fz.size() < 8) {
    throw ValidationError("decay fit: only " + std::to_string(fz.size()) + " usable samples (need 8)");
  }

  const double mean_l = std::accumulate(fl.begin(), fl.end(), 0.0) / static_cast<double>(fl.size());
  double sst = 0.0;
  for (double v : fl) sst += (v - mean_l) * (v - mean_l);

  // For fixed s the model log|g| = c - gamma z^s is linear in (c, gamma).
  auto fit_at = [&](double s, double& gamma) {
    const double m = static_cast<double>(fz.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < fz.size(); ++i) {
      const double x = std::pow(fz[i], s);
      sx += x;
      sy += fl[i];
      sxx += x * x;
      sxy += x * fl[i];
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double icpt = (sy - slope * sx) / m;
    double sse = 0.0;
    for (std::size_t i = 0; i < fz.size(); ++i) {
      const double r = fl[i] - (icpt + slope * std::pow(fz[i], s));
      sse += r * r;
    }
    gamma = -slope;
    return sse;
  };

  double best_s = 1.0;
  double best_sse = std::numeric_limits<double>::infinity();
  double gamma = 0.0;
  for (double s = 0.5; s <= 3.0 + 1e-12; s += 1e-3) {
    const double sse = fit_at(s, gamma);
    if (sse < best_sse) {
      best_sse = sse;
      best_s = s;
    }
  }
  // Golden-section polish inside the bracketing cell.
  double lo = best_s - 1e-3;
  double hi = best_s + 1e-3;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 60; ++it) {
    const double m1 = hi - phi * (hi - lo);
    const double m2 = lo + phi * (hi - lo);
    double g1, g2;
    if (fit_at(m1, g1) < fit_at(m2, g2)) hi = m2; else lo = m1;
  }
  DecayFit fit;
  fit.exponent_hat = 0.5 * (lo + hi);
  const double sse = fit_at(fit.exponent_hat, fit.gamma_hat);
  fit.r2 = sst > 0.0 ? 1.0 - sse / sst : 1.0;
  fit.samples = static_cast<int>(fz.size());
  return fit;
}

}  // namespace chasym
