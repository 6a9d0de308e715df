#include "chasym/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace chasym::kernels::serial {

void polynomial(std::span<const double> w, std::span<const double> coeffs, std::span<double> out) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    double acc = 0.0;
    for (std::size_t m = coeffs.size(); m-- > 0;) acc = acc * w[i] + coeffs[m];
    out[i] = acc;
  }
}

void multiply(std::span<double> a, std::span<const double> b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
}

void scale(std::span<Complex> a, std::span<const double> s) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= s[i];
}

void if_stage(std::span<const Complex> base, std::span<const double> eb, std::span<const Complex> incr,
              std::span<const double> ei, double h, std::span<Complex> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double b = eb.empty() ? 1.0 : eb[i];
    const double c = ei.empty() ? h : h * ei[i];
    out[i] = b * base[i] + c * incr[i];
  }
}

void rk4_combine(std::span<const Complex> w, std::span<const Complex> n1, std::span<const Complex> n2,
                 std::span<const Complex> n3, std::span<const Complex> n4, std::span<const double> e,
                 std::span<const double> e2, double dt, std::span<Complex> out) {
  const double s = dt / 6.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = e2[i] * w[i] + s * (e2[i] * n1[i] + 2.0 * e[i] * (n2[i] + n3[i]) + n4[i]);
  }
}

double rk4_error_l1(std::span<const Complex> n4, std::span<const Complex> n5, double dt,
                    std::span<const double> weight) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n4.size(); ++i) acc += weight[i] * std::abs(n4[i] - n5[i]);
  return acc * std::abs(dt) / 6.0;
}

double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

double sum(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v;
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double weighted_norm2(std::span<const Complex> a, std::span<const double> w) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (w.empty() ? 1.0 : w[i]) * std::norm(a[i]);
  return s;
}

}  // namespace chasym::kernels::serial
