#include "chasym/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "chasym/fft.hpp"
#include "chasym/kernels.hpp"

namespace chasym {

namespace {

struct Line {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  Line l;
  l.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  l.intercept = (sy - l.slope * sx) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (l.intercept + l.slope * x[i]);
    ss += r * r;
  }
  l.rms = std::sqrt(ss / n);
  return l;
}

}  // namespace

FitResult decay_exponent(const RunRecord& record, const std::string& norm, double t_min, double t_max) {
  if (norm != "sup" && norm != "l2") throw ValidationError("norm must be 'sup' or 'l2'");
  if (!(t_max > t_min)) throw ValidationError("fit window must have t_max > t_min");
  const auto t = record.series(record.columns.front());
  const auto v = record.series(norm);
  FitResult f;
  f.method = "loglog-" + norm;
  f.t_min = t_min;
  f.t_max = t_max;
  bool any = false;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_min || t[i] > t_max) continue;
    f.times.push_back(t[i]);
    f.values.push_back(v[i]);
    any |= v[i] != 0.0;
  }
  if (f.times.size() < 10) {
    throw ValidationError("fit window holds " + std::to_string(f.times.size()) + " samples (need 10)");
  }
  if (!any) throw ValidationError("degenerate data: norm vanishes over the window");
  for (std::size_t i = 0; i < f.times.size(); ++i) {
    if (!(f.values[i] > 0.0)) throw ValidationError("degenerate data: non-positive norm in window");
    lx.push_back(std::log(f.times[i]));
    ly.push_back(std::log(f.values[i]));
    if (i > 0 && f.values[i] > f.values[i - 1]) f.monotone = false;
  }
  auto line = least_squares(lx, ly);
  f.exponent = line.slope;
  f.amplitude = std::exp(line.intercept);
  f.residual = line.rms;
  f.samples = static_cast<int>(f.times.size());
  return f;
}

Field resample(const Field& w, const Grid& target, double stretch) {
  const Grid& g = w.grid;
  if (g.dim != target.dim) throw ValidationError("resample: dimension mismatch");
  const double lo = stretch * target.coordinate(0);
  const double hi = stretch * target.coordinate(target.n - 1);
  const double half = 0.5 * g.length;
  if (std::min(lo, hi) < -half * (1.0 + 1e-12) || std::max(lo, hi) > half * (1.0 + 1e-12)) {
    throw ValidationError("interpolation out of range: |x| up to " + fmt_num(std::max(std::abs(lo), std::abs(hi))) +
                          " exceeds L/2 = " + fmt_num(half));
  }
  ComplexFft fft(g);
  auto buf = fft.data();
  std::copy(w.values.begin(), w.values.end(), buf.begin());
  fft.forward();
  std::vector<Complex> data(buf.begin(), buf.end());

  const int n = g.n;
  const int m = target.n;
  std::vector<Complex> matrix(static_cast<size_t>(m) * static_cast<size_t>(n));
  for (int r = 0; r < m; ++r) {
    const double x = stretch * target.coordinate(r) - g.coordinate(0);
    for (int j = 0; j < n; ++j) {
      const int k = g.wave_index(j);
      const double arg = 2.0 * std::numbers::pi / g.length * k * x;
      matrix[static_cast<size_t>(r * n + j)] =
          (k == -n / 2 ? Complex(std::cos(arg), 0.0) : std::polar(1.0, arg)) / static_cast<double>(n);
    }
  }

  std::vector<int> shape(static_cast<size_t>(g.dim), n);
  for (int axis = 0; axis < g.dim; ++axis) {
    std::size_t inner = 1;
    for (int a = axis + 1; a < g.dim; ++a) inner *= static_cast<std::size_t>(shape[static_cast<size_t>(a)]);
    std::size_t outer = 1;
    for (int a = 0; a < axis; ++a) outer *= static_cast<std::size_t>(shape[static_cast<size_t>(a)]);
    std::vector<Complex> next(outer * static_cast<std::size_t>(m) * inner);
    const long long lines = static_cast<long long>(outer * inner);
#pragma omp parallel for schedule(static)
    for (long long li = 0; li < lines; ++li) {
      const std::size_t o = static_cast<std::size_t>(li) / inner;
      const std::size_t i = static_cast<std::size_t>(li) % inner;
      const Complex* src = &data[o * static_cast<std::size_t>(n) * inner + i];
      Complex* dst = &next[o * static_cast<std::size_t>(m) * inner + i];
      for (int r = 0; r < m; ++r) {
        Complex acc = 0.0;
        const Complex* row = &matrix[static_cast<size_t>(r * n)];
        for (int j = 0; j < n; ++j) acc += row[j] * src[static_cast<std::size_t>(j) * inner];
        dst[static_cast<std::size_t>(r) * inner] = acc;
      }
    }
    shape[static_cast<size_t>(axis)] = m;
    data.swap(next);
  }
  Field out(target);
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = data[i].real();
  return out;
}

Field scaled_profile(const Field& w, double t, const ScalingFrame& frame, const Grid& xi_grid) {
  if (!(t > 0.0)) throw ValidationError("scaled_profile needs t > 0");
  auto v = resample(w, xi_grid, std::pow(t, 1.0 / (2 * frame.n)));
  const double amp = std::pow(t, to_double(frame.beta));
  for (double& x : v.values) x *= amp;
  return v;
}

FitResult amplitude_fit(const Field& profile, const Field& reference) {
  if (!(profile.grid == reference.grid)) throw ValidationError("amplitude_fit: profile and reference grids differ");
  const double rr = kernels::dot(reference.values, reference.values);
  const double rmax = kernels::max_abs(reference.values);
  if (!(rmax > 1e-300) || !(rr > 0.0)) throw ValidationError("amplitude_fit: reference is zero");
  FitResult f;
  f.method = "l2-projection";
  f.amplitude = kernels::dot(profile.values, reference.values) / rr;
  double misfit = 0.0;
  for (std::size_t i = 0; i < profile.values.size(); ++i) {
    misfit = std::max(misfit, std::abs(profile.values[i] - f.amplitude * reference.values[i]));
  }
  const double pmax = kernels::max_abs(profile.values);
  f.residual = pmax > 0.0 ? misfit / pmax : misfit;
  f.samples = static_cast<int>(profile.values.size());
  return f;
}

FitResult remainder_rate(const RunRecord& record, const Field& reference, double amplitude, const ScalingFrame& frame,
                         double t_min, double t_max, double noise_floor) {
  FitResult f;
  f.method = "remainder-sup";
  f.t_min = t_min;
  f.t_max = t_max;
  f.amplitude = amplitude;
  const double ref_sup = kernels::max_abs(reference.values);
  std::vector<double> lx, ly;
  for (const auto& s : record.snapshots) {
    if (s.time < t_min || s.time > t_max) continue;
    auto v = scaled_profile(s.field, s.time, frame, reference.grid);
    double r = 0.0;
    for (std::size_t i = 0; i < v.values.size(); ++i) {
      r = std::max(r, std::abs(v.values[i] - amplitude * reference.values[i]));
    }
    const double scale = std::pow(s.time, -to_double(frame.beta));
    f.times.push_back(s.time);
    f.values.push_back(scale * r);
    if (r > noise_floor * std::abs(amplitude) * ref_sup) {
      lx.push_back(std::log(s.time));
      ly.push_back(std::log(scale * r));
    }
  }
  f.samples = static_cast<int>(lx.size());
  if (lx.size() < 3) {
    f.saturated = true;
    return f;
  }
  auto line = least_squares(lx, ly);
  f.exponent = line.slope;
  f.residual = line.rms;
  for (std::size_t i = 1; i < f.values.size(); ++i) f.monotone &= f.values[i] <= f.values[i - 1];
  return f;
}

Moment moment(const Field& w, int order) {
  if (order != 0 && order != 1) throw ValidationError("moment order must be 0 or 1");
  const Grid& g = w.grid;
  Moment m;
  if (order == 0) {
    m.value.push_back(g.cell_volume() * kernels::sum(w.values));
  } else {
    for (int a = 0; a < g.dim; ++a) m.value.push_back(g.cell_volume() * kernels::dot(axis_coordinates(g, a), w.values));
  }
  const double peak = kernels::max_abs(w.values);
  m.tail_contaminated = peak > 0.0 && edge_max(w) > 1e-8 * peak;
  return m;
}

}  // namespace chasym
