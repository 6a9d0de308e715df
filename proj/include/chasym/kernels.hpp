#pragma once

// Data-parallel inner loops of the solvers. Every kernel exists twice: a plain
// serial reference (kernels::serial) kept for testing and benchmarking, and an
// OpenMP version (kernels::omp) used by the library. Pointwise kernels agree
// bit for bit. Reductions in the OpenMP version sum fixed-size blocks and then
// combine the block partials in order, so their result does not depend on the
// thread count.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace chasym::kernels {

using Complex = std::complex<double>;

inline constexpr std::size_t kReductionBlock = 4096;

namespace serial {

/// out_i = sum_m coeffs[m] * w_i^m
void polynomial(std::span<const double> w, std::span<const double> coeffs, std::span<double> out);
/// a_i *= b_i
void multiply(std::span<double> a, std::span<const double> b);
/// a_i *= s_i
void scale(std::span<Complex> a, std::span<const double> s);
/// out_i = eb_i * base_i + h * ei_i * incr_i   (an empty e-span means 1)
void if_stage(std::span<const Complex> base, std::span<const double> eb, std::span<const Complex> incr,
              std::span<const double> ei, double h, std::span<Complex> out);
/// Integrating-factor RK4 update:
/// out = E2 w + dt/6 (E2 N1 + 2 E (N2 + N3) + N4), with E = e^{L dt/2}, E2 = E^2.
void rk4_combine(std::span<const Complex> w, std::span<const Complex> n1, std::span<const Complex> n2,
                 std::span<const Complex> n3, std::span<const Complex> n4, std::span<const double> e,
                 std::span<const double> e2, double dt, std::span<Complex> out);
/// Embedded error of the RK4 step against the FSAL third-order companion
/// b* = (1/6, 1/3, 1/3, 0, 1/6): err = dt/6 (N4 - N5), N5 = N(w_{n+1}).
/// Returns sum_i weight_i |err_i|.
double rk4_error_l1(std::span<const Complex> n4, std::span<const Complex> n5, double dt,
                    std::span<const double> weight);

double max_abs(std::span<const double> a);
double sum(std::span<const double> a);
double dot(std::span<const double> a, std::span<const double> b);
/// sum_i w_i |a_i|^2 (an empty weight means 1)
double weighted_norm2(std::span<const Complex> a, std::span<const double> w);

}  // namespace serial

namespace omp {

void polynomial(std::span<const double> w, std::span<const double> coeffs, std::span<double> out);
void multiply(std::span<double> a, std::span<const double> b);
void scale(std::span<Complex> a, std::span<const double> s);
void if_stage(std::span<const Complex> base, std::span<const double> eb, std::span<const Complex> incr,
              std::span<const double> ei, double h, std::span<Complex> out);
void rk4_combine(std::span<const Complex> w, std::span<const Complex> n1, std::span<const Complex> n2,
                 std::span<const Complex> n3, std::span<const Complex> n4, std::span<const double> e,
                 std::span<const double> e2, double dt, std::span<Complex> out);
double rk4_error_l1(std::span<const Complex> n4, std::span<const Complex> n5, double dt,
                    std::span<const double> weight);
double max_abs(std::span<const double> a);
double sum(std::span<const double> a);
double dot(std::span<const double> a, std::span<const double> b);
double weighted_norm2(std::span<const Complex> a, std::span<const double> w);

/// out[i] = f(x[i]), iterations distributed dynamically (f may be expensive).
template <class F>
void tabulate(std::span<const double> x, F&& f, std::span<double> out) {
  const auto n = static_cast<long long>(x.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = f(x[static_cast<std::size_t>(i)]);
}

}  // namespace omp

namespace serial {
template <class F>
void tabulate(std::span<const double> x, F&& f, std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = f(x[i]);
}
}  // namespace serial

using omp::dot;
using omp::if_stage;
using omp::max_abs;
using omp::multiply;
using omp::polynomial;
using omp::rk4_combine;
using omp::rk4_error_l1;
using omp::scale;
using omp::sum;
using omp::tabulate;
using omp::weighted_norm2;

/// Sets the OpenMP team size; 0 keeps the runtime default.
void set_threads(int n);
int max_threads();

}  // namespace chasym::kernels
