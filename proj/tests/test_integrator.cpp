#include <doctest.h>

#include <cmath>
#include <random>

#include "chasym/errors.hpp"
#include "chasym/integrator.hpp"
#include "chasym/kernels.hpp"

using namespace chasym;

namespace {

// w' = lambda w - w^2
double bernoulli(double lambda, double w0, double t) {
  const double e = std::exp(lambda * t);
  return lambda * w0 * e / (lambda + w0 * (e - 1.0));
}

IfRk4::Rhs quadratic() {
  return [](double, std::span<const Complex> w, std::span<Complex> out) {
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = -w[i] * w[i];
  };
}

double run(const std::vector<double>& lambda, double w0, double t_end, StepControl c, std::vector<Complex>& w) {
  IfRk4 rk(lambda, std::vector<double>(lambda.size(), 1.0), quadratic(), c);
  w.assign(lambda.size(), Complex(w0, 0.0));
  double t = 0.0;
  rk.advance(t, w, t_end);
  return t;
}

}  // namespace

TEST_SUITE("integrator") {
  TEST_CASE("fixed-step convergence order") {
    const std::vector<double> lambda = {-1.0, -40.0};
    std::vector<double> err;
    for (double dt : {0.1, 0.05, 0.025}) {
      StepControl c;
      c.adaptive = false;
      c.dt = dt;
      std::vector<Complex> w;
      run(lambda, 0.8, 1.0, c, w);
      double e = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) e = std::max(e, std::abs(w[i].real() - bernoulli(lambda[i], 0.8, 1.0)));
      err.push_back(e);
    }
    CHECK(std::log2(err[0] / err[1]) > 3.7);
    CHECK(std::log2(err[1] / err[2]) > 3.7);
  }

  TEST_CASE("adaptive run meets its tolerance and lands on the target") {
    const std::vector<double> lambda = {-0.5, -200.0, -1e4};
    StepControl c;
    c.tol = 1e-10;
    std::vector<Complex> w;
    const double t = run(lambda, 0.9, 2.0, c, w);
    CHECK(t == 2.0);
    for (std::size_t i = 0; i < w.size(); ++i) {
      CHECK(std::abs(w[i].real() - bernoulli(lambda[i], 0.9, 2.0)) < 1e-8);
    }
  }

  TEST_CASE("linear part is exact") {
    const std::vector<double> lambda = {0.0, -3.0, -1e3};
    StepControl c;
    IfRk4 rk(lambda, {1.0, 1.0, 1.0}, [](double, std::span<const Complex>, std::span<Complex> out) {
      for (auto& o : out) o = 0.0;
    }, c);
    std::vector<Complex> w(3, Complex(1.0, -2.0));
    double t = 0.0;
    rk.advance(t, w, 2.5);
    for (std::size_t i = 0; i < 2; ++i) {
      const Complex exact = std::exp(lambda[i] * 2.5) * Complex(1.0, -2.0);
      CHECK(std::abs(w[i] - exact) < 1e-14 * std::abs(Complex(1.0, -2.0)));
    }
    CHECK(std::abs(w[2]) < 1e-300);
  }

  TEST_CASE("step-size underflow is a numerical failure") {
    StepControl c;
    c.dt_min = 1e-6;
    IfRk4 rk({0.0}, {1.0}, [](double, std::span<const Complex> w, std::span<Complex> out) { out[0] = w[0] * w[0] * w[0]; },
             c);
    std::vector<Complex> w = {Complex(10.0, 0.0)};
    double t = 0.0;
    CHECK_THROWS_AS(rk.advance(t, w, 1.0), NumericalFailure);
  }
}

TEST_SUITE("kernels") {
  TEST_CASE("OpenMP kernels agree with the serial reference") {
    const std::size_t n = 3 * kernels::kReductionBlock + 123;
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto real = [&] {
      std::vector<double> v(n);
      for (auto& x : v) x = u(rng);
      return v;
    };
    auto cplx = [&] {
      std::vector<Complex> v(n);
      for (auto& x : v) x = {u(rng), u(rng)};
      return v;
    };
    const auto a = real(), b = real(), e = real(), e2 = real();
    const auto w = cplx(), n1 = cplx(), n2 = cplx(), n3 = cplx(), n4 = cplx();
    const std::vector<double> coeffs = {0.1, -0.2, 1.7, 1.0};

    std::vector<double> ps(n), po(n);
    kernels::serial::polynomial(a, coeffs, ps);
    kernels::omp::polynomial(a, coeffs, po);
    CHECK(ps == po);

    auto ms = a, mo = a;
    kernels::serial::multiply(ms, b);
    kernels::omp::multiply(mo, b);
    CHECK(ms == mo);

    auto ss = w, so = w;
    kernels::serial::scale(ss, e);
    kernels::omp::scale(so, e);
    CHECK(ss == so);

    std::vector<Complex> is(n), io(n);
    kernels::serial::if_stage(w, e, n1, e2, 0.3, is);
    kernels::omp::if_stage(w, e, n1, e2, 0.3, io);
    CHECK(is == io);
    kernels::serial::if_stage(w, {}, n1, {}, 0.3, is);
    kernels::omp::if_stage(w, {}, n1, {}, 0.3, io);
    CHECK(is == io);

    std::vector<Complex> rs(n), ro(n);
    kernels::serial::rk4_combine(w, n1, n2, n3, n4, e, e2, 0.01, rs);
    kernels::omp::rk4_combine(w, n1, n2, n3, n4, e, e2, 0.01, ro);
    CHECK(rs == ro);

    CHECK(kernels::omp::max_abs(a) == kernels::serial::max_abs(a));
    CHECK(kernels::omp::sum(a) == doctest::Approx(kernels::serial::sum(a)).epsilon(1e-12));
    CHECK(kernels::omp::dot(a, b) == doctest::Approx(kernels::serial::dot(a, b)).epsilon(1e-12));
    CHECK(kernels::omp::weighted_norm2(w, e) == doctest::Approx(kernels::serial::weighted_norm2(w, e)).epsilon(1e-12));
    CHECK(kernels::omp::rk4_error_l1(n4, n1, 0.1, e) ==
          doctest::Approx(kernels::serial::rk4_error_l1(n4, n1, 0.1, e)).epsilon(1e-12));
  }

  TEST_CASE("reductions do not depend on the thread count") {
    const std::size_t n = 5 * kernels::kReductionBlock + 7;
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = std::sin(0.37 * i) * 1e3;
      b[i] = std::cos(1.1 * i);
    }
    const int before = kernels::max_threads();
    kernels::set_threads(1);
    const double s1 = kernels::omp::sum(a), d1 = kernels::omp::dot(a, b);
    kernels::set_threads(3);
    const double s3 = kernels::omp::sum(a), d3 = kernels::omp::dot(a, b);
    kernels::set_threads(before);
    CHECK(s1 == s3);
    CHECK(d1 == d3);
  }
}
