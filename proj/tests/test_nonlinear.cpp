#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "chasym/nonlinear.hpp"
#include "chasym/simulator.hpp"

using namespace chasym;

namespace {

// Eighth-order central second difference of a scalar function.
template <class F>
double d2(F&& f, double x, double h) {
  static constexpr double c[5] = {-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0};
  double s = c[0] * f(x);
  for (int k = 1; k <= 4; ++k) s += c[k] * (f(x + k * h) + f(x - k * h));
  return s / (h * h);
}

const double kSqrt3 = std::sqrt(3.0);

}  // namespace

TEST_SUITE("nonlinear") {
  TEST_CASE("conservative expansion") {
    const auto spec = NonlinearModel::cahn_hilliard().as_spec(2, 1);
    REQUIRE(spec.nonlinearity.size() == 4);
    std::vector<double> c;
    for (const auto& t : spec.nonlinearity) c.push_back(t.coefficient);
    std::sort(c.begin(), c.end());
    CHECK(c[0] == doctest::Approx(3.0));
    CHECK(c[1] == doctest::Approx(2.0 * kSqrt3));
    CHECK(c[2] == doctest::Approx(2.0 * kSqrt3));
    CHECK(c[3] == doctest::Approx(6.0));
    CHECK(NonlinearModel::cahn_hilliard().as_spec(2, 3).nonlinearity.size() == 12);
  }

  TEST_CASE("scaled-frame exponents") {
    const auto m = NonlinearModel::cahn_hilliard();
    for (int d = 1; d <= 3; ++d) {
      // diffusive frame: exp(-p tau / 2n) with p = d - 2 and 2d - 2
      const auto e = m.scaled_exponents(ScalingFrame::diffusive(2, d));
      CHECK(e[0] == doctest::Approx(-(d - 2) / 4.0));
      CHECK(e[1] == doctest::Approx(-(2 * d - 2) / 4.0));
    }
    const auto e = m.scaled_exponents(ScalingFrame{2, 1, Rational(1, 2)});
    CHECK(e[0] == doctest::Approx(0.0));
    CHECK(e[1] == doctest::Approx(-0.5));
  }

  TEST_CASE("right-hand side matches finite differences, d = 1") {
    const Grid g{1, 256, 48.0};
    const double A = 0.5, s2 = 2.0 * 2.0 * 2.0;
    auto w = [&](double x) { return A * std::exp(-x * x / s2); };
    auto p = [&](double x) { return kSqrt3 * w(x) * w(x) + w(x) * w(x) * w(x); };
    Field f(g);
    for (int i = 0; i < g.n; ++i) f.values[static_cast<size_t>(i)] = w(g.coordinate(i));
    for (Dealias dl : {Dealias::None, Dealias::TwoThirds}) {
      const auto r = rhs_spectral(f, Equation{2, NonlinearModel::cahn_hilliard()}, dl);
      const double h = 0.05;
      double worst = 0.0, scale = 0.0;
      for (int i = 0; i < g.n; ++i) {
        const double x = g.coordinate(i);
        const double w4 = d2([&](double y) { return d2(w, y, h); }, x, h);
        const double exact = -w4 + d2(p, x, h);
        worst = std::max(worst, std::abs(r.values[static_cast<size_t>(i)] - exact));
        scale = std::max(scale, std::abs(exact));
      }
      CHECK(worst < 1e-6 * scale);
    }
  }

  TEST_CASE("right-hand side matches finite differences, d = 2") {
    const Grid g{2, 128, 32.0};
    const double A = 0.3;
    auto w = [&](double x, double y) { return A * std::exp(-(x * x + 0.5 * y * y) / 4.0) * (1.0 + 0.3 * x); };
    auto p = [&](double x, double y) {
      const double v = w(x, y);
      return kSqrt3 * v * v + v * v * v;
    };
    const double h = 0.05;
    auto lap = [&](const auto& f, double x, double y) {
      return d2([&](double s) { return f(s, y); }, x, h) + d2([&](double s) { return f(x, s); }, y, h);
    };
    Field f(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      auto idx = unflatten(g, i);
      f.values[i] = w(g.coordinate(idx[0]), g.coordinate(idx[1]));
    }
    const auto r = rhs_spectral(f, Equation{2, NonlinearModel::cahn_hilliard()}, Dealias::TwoThirds);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < g.size(); i += 7) {
      auto idx = unflatten(g, i);
      const double x = g.coordinate(idx[0]), y = g.coordinate(idx[1]);
      const double bi = lap([&](double a, double b) { return lap(w, a, b); }, x, y);
      const double exact = -bi + lap(p, x, y);
      worst = std::max(worst, std::abs(r.values[i] - exact));
      scale = std::max(scale, std::abs(exact));
    }
    CHECK(worst < 1e-6 * scale);
  }

  TEST_CASE("dealiased products match a 2x oversampled evaluation") {
    const int N = 64;
    const Grid g{1, N, 20.0};
    const Grid g2{1, 2 * N, 20.0};
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    struct Case {
      Dealias rule;
      int power;
      int keep;  // mode m survives iff keep * |m| < N
    };
    for (const Case c : {Case{Dealias::TwoThirds, 2, 3}, Case{Dealias::Half, 3, 4}}) {
      PseudoSpectral ps(g, c.rule);
      PseudoSpectral fine(g2, Dealias::None);
      std::vector<Complex> wh(ps.spectral_size());
      for (int m = 0; c.keep * m < N; ++m) wh[static_cast<size_t>(m)] = {u(rng), m == 0 ? 0.0 : u(rng)};
      // exact product on the fine grid
      std::vector<Complex> pad(fine.spectral_size());
      for (std::size_t m = 0; m < wh.size(); ++m) pad[m] = 2.0 * wh[m];
      std::vector<double> wf(g2.size());
      fine.inverse(pad, wf);
      for (double& v : wf) v = std::pow(v, c.power);
      std::vector<Complex> pf(fine.spectral_size());
      fine.forward(wf, pf);

      NonlinearModel model;
      model.conservative = {{1.0, c.power}};
      const std::vector<double> one = {1.0};
      std::vector<Complex> out(ps.spectral_size());
      ps.nonlinear(model, one, wh, out);
      double worst = 0.0, scale = 0.0;
      for (int m = 0; m <= N / 2; ++m) {
        const double k = 2.0 * std::numbers::pi * m / g.length;
        const Complex exact = c.keep * m < N ? -k * k * 0.5 * pf[static_cast<size_t>(m)] : Complex{};
        worst = std::max(worst, std::abs(out[static_cast<size_t>(m)] - exact));
        scale = std::max(scale, std::abs(exact));
      }
      CHECK(worst < 1e-10 * scale);
      CHECK(out[0] == Complex{});  // mass is conserved exactly
    }
  }

  TEST_CASE("mask follows the truncation rules") {
    const Grid g{1, 64, 10.0};
    PseudoSpectral two(g, Dealias::TwoThirds), half(g, Dealias::Half), none(g, Dealias::None);
    for (int m = 0; m <= g.n / 2; ++m) {
      CHECK(two.mask()[static_cast<size_t>(m)] == (3 * m < g.n ? 1.0 : 0.0));
      CHECK(half.mask()[static_cast<size_t>(m)] == (4 * m < g.n ? 1.0 : 0.0));
      CHECK(none.mask()[static_cast<size_t>(m)] == 1.0);
    }
  }

  TEST_CASE("non-finite state is a numerical failure") {
    const Grid g{1, 64, 20.0};
    PseudoSpectral ps(g, Dealias::TwoThirds);
    std::vector<Complex> wh(ps.spectral_size()), out(ps.spectral_size());
    wh[1] = {std::numeric_limits<double>::quiet_NaN(), 0.0};
    const std::vector<double> ones = {1.0, 1.0};
    CHECK_THROWS_AS(ps.nonlinear(NonlinearModel::cahn_hilliard(), ones, wh, out), NumericalFailure);
    wh[1] = {1e9, 0.0};
    CHECK_THROWS_AS(ps.nonlinear(NonlinearModel::cahn_hilliard(), ones, wh, out, 1e3), NumericalFailure);
  }

  TEST_CASE("dealias names") {
    CHECK(parse_dealias("2/3") == Dealias::TwoThirds);
    CHECK(parse_dealias("1/2") == Dealias::Half);
    CHECK(parse_dealias("none") == Dealias::None);
    CHECK(to_string(Dealias::Half) == "1/2");
    CHECK_THROWS_AS(parse_dealias("3/4"), ValidationError);
  }
}
