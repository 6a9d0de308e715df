#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "chasym/spectrum.hpp"

using namespace chasym;

namespace {

constexpr double pi = std::numbers::pi;

Field sample(const Grid& g, const std::function<double(double)>& f) {
  Field v(g);
  for (int i = 0; i < g.n; ++i) v.values[static_cast<size_t>(i)] = f(g.coordinate(i));
  return v;
}

double max_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

}  // namespace

TEST_SUITE("spectrum") {
  TEST_CASE("eigenvalues") {
    for (int j = 0; j < 8; ++j) {
      CHECK(eigenvalue(j, ScalingFrame::diffusive(2, 1)) == Rational(-j, 4));
      CHECK(eigenvalue(j, ScalingFrame{2, 1, Rational(1, 2)}) == Rational(1 - j, 4));
      CHECK(eigenvalue(j, ScalingFrame::diffusive(3, 2)) == Rational(-j, 6));
    }
  }

  TEST_CASE("eigenfunctions satisfy L phi = lambda phi") {
    // L = -(p.p)^n - (1/2n) p.grad_p, evaluated with the closed-form gradient
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> coord(-1.6, 1.6);
    std::uniform_int_distribution<int> ord(0, 3);
    double worst = 0.0;
    for (int n = 1; n <= 3; ++n) {
      for (int d = 1; d <= 3; ++d) {
        for (int trial = 0; trial < 40; ++trial) {
          std::vector<int> a(static_cast<size_t>(d));
          for (int& v : a) v = ord(rng);
          const MultiIndex alpha(a);
          std::vector<double> p(static_cast<size_t>(d));
          for (double& v : p) v = coord(rng);
          const double phi = eigenfunction_fourier(alpha, n, p);
          const auto grad = eigenfunction_gradient(alpha, n, p);
          double r2 = 0.0, drift = 0.0;
          for (int k = 0; k < d; ++k) {
            r2 += p[static_cast<size_t>(k)] * p[static_cast<size_t>(k)];
            drift += p[static_cast<size_t>(k)] * grad[static_cast<size_t>(k)];
          }
          const double lphi = -std::pow(r2, n) * phi - drift / (2.0 * n);
          const double lambda = to_double(eigenvalue(alpha.total(), ScalingFrame::diffusive(n, d)));
          const double scale = std::abs(phi) + std::abs(drift) + 1e-300;
          worst = std::max(worst, std::abs(lphi - lambda * phi) / scale);
        }
      }
    }
    CHECK(worst < 1e-12);
  }

  TEST_CASE("profile at the origin is the Gamma-function value") {
    const double exact = 2.0 * std::tgamma(1.25) / std::sqrt(2.0 * pi);
    CHECK(profile_value(2, 1, 0.0) == doctest::Approx(exact).epsilon(1e-12));
    const Grid g{1, 256, 80.0};
    const auto p = profile(ScalingFrame::diffusive(2, 1), g);
    CHECK(p.samples.values[128] == doctest::Approx(exact).epsilon(1e-10));
  }

  TEST_CASE("n = 1 profiles are Gaussians") {
    const Grid g1{1, 128, 40.0};
    const auto p1 = profile(ScalingFrame::diffusive(1, 1), g1);
    const auto e1 = sample(g1, [](double x) { return std::exp(-x * x / 4.0) / std::sqrt(2.0); });
    CHECK(max_diff(p1.samples, e1) < 1e-10);

    const Grid g2{2, 64, 32.0};
    const auto p2 = profile(ScalingFrame::diffusive(1, 2), g2);
    double worst = 0.0;
    for (std::size_t i = 0; i < g2.size(); ++i) {
      auto idx = unflatten(g2, i);
      const double x = g2.coordinate(idx[0]), y = g2.coordinate(idx[1]);
      worst = std::max(worst, std::abs(p2.samples.values[i] - 0.5 * std::exp(-(x * x + y * y) / 4.0)));
    }
    CHECK(worst < 1e-10);
  }

  TEST_CASE("profile mass and first-moment mode normalization") {
    const Grid g{1, 512, 100.0};
    const auto frame = ScalingFrame::diffusive(2, 1);
    const auto f = profile(frame, g).samples;
    const auto F = first_moment_profile(frame, g, 0);
    double m0 = 0.0, m1 = 0.0, mass = 0.0;
    for (int i = 0; i < g.n; ++i) {
      const double x = g.coordinate(i);
      mass += f.values[static_cast<size_t>(i)] * g.spacing();
      m0 += F.values[static_cast<size_t>(i)] * g.spacing();
      m1 += x * F.values[static_cast<size_t>(i)] * g.spacing();
    }
    CHECK(mass == doctest::Approx(std::sqrt(2.0 * pi)).epsilon(1e-12));
    CHECK(std::abs(m0) < 1e-12);
    CHECK(m1 == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("profile decay radius") {
    const double r = profile_decay_radius(2, 1);
    CHECK(r > 15.0);
    CHECK(r < 25.0);
    CHECK(std::abs(profile_value(2, 1, r + 1.0)) < 1e-6 * profile_value(2, 1, 0.0));
  }

  TEST_CASE("kernel g: Gaussian closed forms and normalization") {
    for (double tau : {0.3, 1.0, 4.0}) {
      const double a = -std::expm1(-tau);
      for (double z : {0.0, 0.7, 2.0, 5.0}) {
        const double zs[3] = {z, 0.0, 0.0};
        const double e = std::exp(-z * z / (4.0 * a));
        CHECK(std::abs(kernel_g(std::span<const double>(zs, 1), tau, 1, 1).value - std::sqrt(pi / a) * e) < 1e-8);
        CHECK(std::abs(kernel_g(std::span<const double>(zs, 2), tau, 1, 2).value - (pi / a) * e) < 1e-8);
        CHECK(std::abs(kernel_g(std::span<const double>(zs, 3), tau, 1, 3).value - std::pow(pi / a, 1.5) * e) <
              1e-8);
      }
    }
    // int g dz = 2 pi e^{0}
    double integral = 0.0;
    const double h = 0.05;
    for (int i = -800; i <= 800; ++i) {
      const double z = i * h;
      integral += kernel_g(std::span<const double>(&z, 1), 1.0, 2, 1).value * h;
    }
    CHECK(integral == doctest::Approx(2.0 * pi).epsilon(1e-10));
    CHECK_THROWS_AS(kernel_g(std::span<const double>(), 1.0, 2, 1), ValidationError);
  }

  TEST_CASE("kernel decay fit") {
    const auto fit = kernel_decay_fit(2, 1, 1.0, 2.0, 30.0, 1600);
    CHECK(fit.exponent_hat == doctest::Approx(4.0 / 3.0).epsilon(0.05));
    CHECK(fit.r2 > 0.99);
    CHECK_THROWS_AS(kernel_decay_fit(2, 1, 1.0, 60.0, 80.0, 100), ValidationError);
  }

  TEST_CASE("spectral round trip") {
    const Grid g{1, 128, 40.0};
    const auto v = sample(g, [](double x) { return std::exp(-x * x / 3.0) * (1.0 + std::sin(x)); });
    CHECK(max_diff(to_field(to_spectral(v)), v) < 1e-13);
    const auto a = to_spectral(v);
    const auto b = evaluate_dilated(v, 1.0);
    double dev = 0.0;
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) dev = std::max(dev, std::abs(a.coeffs[i] - b.coeffs[i]));
    CHECK(dev < 1e-12);
  }

  TEST_CASE("semigroup agrees with convolution against g") {
    // e^{tau L} v0 (xi) = (2 pi)^{-1} e^{s} int g(xi - eta, tau) v0(e^s eta) d eta, s = tau / 4
    const Grid g{1, 256, 64.0};
    const auto frame = ScalingFrame::diffusive(2, 1);
    const double tau = 1.0;
    const double s = tau / 4.0;
    const double h = g.spacing();
    std::vector<double> kern(2 * static_cast<size_t>(g.n) + 1);
    for (int k = -g.n; k <= g.n; ++k) {
      const double z = k * h;
      kern[static_cast<size_t>(k + g.n)] = kernel_g(std::span<const double>(&z, 1), tau, 2, 1, 1e-13).value;
    }
    const std::vector<std::function<double(double)>> inputs = {
        [](double x) { return std::exp(-x * x / 4.5); },
        [](double x) { return x * std::exp(-x * x / 2.0); },
        [](double x) { return std::cos(1.3 * x) * std::exp(-x * x / 6.0); },
        [](double x) { return std::exp(-(x - 2.0) * (x - 2.0) / 3.0) - 0.5 * std::exp(-(x + 1.0) * (x + 1.0)); },
    };
    for (const auto& f : inputs) {
      const auto v0 = sample(g, f);
      const auto out = to_field(semigroup_apply(to_spectral(v0), tau, frame));
      Field ref(g);
      for (int i = 0; i < g.n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < g.n; ++j) {
          acc += kern[static_cast<size_t>(i - j + g.n)] * f(std::exp(s) * g.coordinate(j));
        }
        ref.values[static_cast<size_t>(i)] = acc * h * std::exp(s) / (2.0 * pi);
      }
      CHECK(max_diff(out, ref) < 1e-10);
    }
  }

  TEST_CASE("semigroup eigen-decay, composition and commutation") {
    const Grid g{2, 128, 80.0};
    const auto frame = ScalingFrame::diffusive(2, 2);
    for (const auto& a : {std::vector<int>{0, 0}, {1, 0}, {2, 1}, {0, 3}}) {
      const MultiIndex alpha(a);
      auto phi = sample_fourier(g, [&](std::span<const double> p) { return Complex(eigenfunction_fourier(alpha, 2, p)); });
      for (double tau : {0.5, 2.0}) {
        auto out = semigroup_apply(phi, tau, frame);
        const double decay = std::exp(to_double(eigenvalue(alpha.total(), frame)) * tau);
        double dev = 0.0;
        for (std::size_t i = 0; i < out.coeffs.size(); ++i) dev = std::max(dev, std::abs(out.coeffs[i] - decay * phi.coeffs[i]));
        CHECK(dev < 1e-10);
      }
      auto two = semigroup_apply(semigroup_apply(phi, 0.7, frame), 1.1, frame);
      auto one = semigroup_apply(phi, 1.8, frame);
      double dev = 0.0;
      for (std::size_t i = 0; i < one.coeffs.size(); ++i) dev = std::max(dev, std::abs(one.coeffs[i] - two.coeffs[i]));
      CHECK(dev < 1e-10);
      CHECK(commutation_check(phi, MultiIndex({1, 1}), 1.0, frame) < 1e-8);
    }
  }

  TEST_CASE("semigroup refuses inputs that reach the box edge") {
    const Grid g{1, 64, 10.0};
    const auto v = sample(g, [](double x) { return std::exp(-x * x / 20.0); });
    CHECK_THROWS_AS(semigroup_apply(to_spectral(v), 1.0, ScalingFrame::diffusive(2, 1)), NumericalFailure);
  }
}
