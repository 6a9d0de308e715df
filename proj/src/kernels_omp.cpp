#include <omp.h>

#include <algorithm>
#include <cmath>

#include "chasym/kernels.hpp"

namespace chasym::kernels {

void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

int max_threads() { return omp_get_max_threads(); }

namespace omp {

namespace {

using Index = long long;

Index ssize(std::size_t n) { return static_cast<Index>(n); }

// Sums fixed blocks in parallel, then combines them in block order.
template <class BlockFn>
double blocked_sum(std::size_t n, BlockFn&& block) {
  const std::size_t nblocks = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<double> partial(nblocks, 0.0);
#pragma omp parallel for schedule(static)
  for (Index b = 0; b < ssize(nblocks); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kReductionBlock;
    const std::size_t hi = std::min(n, lo + kReductionBlock);
    partial[static_cast<std::size_t>(b)] = block(lo, hi);
  }
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

}  // namespace

void polynomial(std::span<const double> w, std::span<const double> coeffs, std::span<double> out) {
  const std::size_t nc = coeffs.size();
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < ssize(w.size()); ++i) {
    const double x = w[static_cast<std::size_t>(i)];
    double acc = 0.0;
    for (std::size_t m = nc; m-- > 0;) acc = acc * x + coeffs[m];
    out[static_cast<std::size_t>(i)] = acc;
  }
}

void multiply(std::span<double> a, std::span<const double> b) {
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < ssize(a.size()); ++i) a[static_cast<std::size_t>(i)] *= b[static_cast<std::size_t>(i)];
}

void scale(std::span<Complex> a, std::span<const double> s) {
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < ssize(a.size()); ++i) a[static_cast<std::size_t>(i)] *= s[static_cast<std::size_t>(i)];
}

void if_stage(std::span<const Complex> base, std::span<const double> eb, std::span<const Complex> incr,
              std::span<const double> ei, double h, std::span<Complex> out) {
  const bool has_eb = !eb.empty();
  const bool has_ei = !ei.empty();
#pragma omp parallel for schedule(static)
  for (Index ii = 0; ii < ssize(out.size()); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const double b = has_eb ? eb[i] : 1.0;
    const double c = has_ei ? h * ei[i] : h;
    out[i] = b * base[i] + c * incr[i];
  }
}

void rk4_combine(std::span<const Complex> w, std::span<const Complex> n1, std::span<const Complex> n2,
                 std::span<const Complex> n3, std::span<const Complex> n4, std::span<const double> e,
                 std::span<const double> e2, double dt, std::span<Complex> out) {
  const double s = dt / 6.0;
#pragma omp parallel for schedule(static)
  for (Index ii = 0; ii < ssize(out.size()); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    out[i] = e2[i] * w[i] + s * (e2[i] * n1[i] + 2.0 * e[i] * (n2[i] + n3[i]) + n4[i]);
  }
}

double rk4_error_l1(std::span<const Complex> n4, std::span<const Complex> n5, double dt,
                    std::span<const double> weight) {
  const double acc = blocked_sum(n4.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += weight[i] * std::abs(n4[i] - n5[i]);
    return s;
  });
  return acc * std::abs(dt) / 6.0;
}

double max_abs(std::span<const double> a) {
  double m = 0.0;
#pragma omp parallel for reduction(max : m) schedule(static)
  for (Index i = 0; i < ssize(a.size()); ++i) m = std::max(m, std::abs(a[static_cast<std::size_t>(i)]));
  return m;
}

double sum(std::span<const double> a) {
  return blocked_sum(a.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += a[i];
    return s;
  });
}

double dot(std::span<const double> a, std::span<const double> b) {
  return blocked_sum(a.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
    return s;
  });
}

double weighted_norm2(std::span<const Complex> a, std::span<const double> w) {
  const bool has_w = !w.empty();
  return blocked_sum(a.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += (has_w ? w[i] : 1.0) * std::norm(a[i]);
    return s;
  });
}

}  // namespace omp
}  // namespace chasym::kernels
