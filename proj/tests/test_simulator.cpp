#include <doctest.h>

#include <cmath>
#include <numbers>

#include "chasym/kernels.hpp"
#include "chasym/scaledflow.hpp"
#include "chasym/simulator.hpp"
#include "chasym/spectrum.hpp"

using namespace chasym;

namespace {

Equation ch() { return {2, NonlinearModel::cahn_hilliard()}; }
Equation linear() { return {2, NonlinearModel{}}; }

IntegratorConfig short_run(double t_end) {
  IntegratorConfig c;
  c.t_end = t_end;
  c.step.tol = 1e-10;
  c.record_times = log_times(1.0, t_end, 11);
  c.snapshot_times = {t_end};
  return c;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_SUITE("simulator") {
  TEST_CASE("initial data and its moments") {
    const Grid g{1, 256, 64.0};
    const auto w = init_perturbation({"gaussian", 0.5, 2.0, {}, 0, {}}, g);
    CHECK(w.mass == doctest::Approx(0.5 * 2.0 * std::sqrt(2 * std::numbers::pi)).epsilon(1e-12));
    CHECK(std::abs(w.first_moments.at(0)) < 1e-13);
    const auto dip = init_perturbation({"dipole", 0.5, 2.0, {}, 0, {}}, g);
    CHECK(std::abs(dip.mass) < 1e-13);
    // int x (A x / s) e^{-x^2/2s^2} = A s^2 sqrt(2 pi)
    CHECK(dip.first_moments.at(0) == doctest::Approx(0.5 * 4.0 * std::sqrt(2 * std::numbers::pi)).epsilon(1e-12));
    CHECK_THROWS_AS(init_perturbation({"gaussian", 0.5, 8.0, {}, 0, {}}, g), ValidationError);
    CHECK_THROWS_AS(init_perturbation({"bump", 0.5, 2.0, {}, 0, {}}, g), ValidationError);
    CHECK_THROWS_AS(init_perturbation({"dipole", 0.5, 2.0, {}, 1, {}}, g), ValidationError);
  }

  TEST_CASE("the linear flow is exact in Fourier space") {
    const Grid g{1, 512, 320.0};
    const auto w0 = init_perturbation({"gaussian", 1.0, 2.0, {}, 0, {}}, g).field;
    const auto rec = integrate(w0, linear(), short_run(10.0));
    PseudoSpectral ps(g, Dealias::None);
    std::vector<Complex> wh(ps.spectral_size());
    ps.forward(w0.values, wh);
    const auto symbol = ps.linear_symbol(2);
    for (std::size_t o = 0; o < wh.size(); ++o) wh[o] *= std::exp(symbol[o] * 9.0);
    Field exact(g);
    ps.inverse(wh, exact.values);
    CHECK(sup_diff(rec.snapshots.back().field.values, exact.values) < 1e-12);
  }

  TEST_CASE("mass is conserved by the nonlinear flow") {
    const Grid g{1, 512, 320.0};
    const auto w0 = init_perturbation({"gaussian", 0.2, 2.0, {}, 0, {}}, g);
    auto cfg = short_run(50.0);
    cfg.box_margin = 2.0;
    const auto rec = integrate(w0.field, ch(), cfg);
    for (double m : rec.series("mass")) CHECK(std::abs(m - w0.mass) < 1e-10 * std::abs(w0.mass));
    CHECK(rec.columns.back() == "tail");
    CHECK(rec.rows.size() == 11);
  }

  TEST_CASE("guards on the run setup") {
    const Grid g{1, 512, 80.0};
    const auto w0 = init_perturbation({"gaussian", 0.2, 2.0, {}, 0, {}}, g).field;
    CHECK(required_box(2, 1, 1e4, 1.0) > 80.0);
    CHECK_THROWS_AS(integrate(w0, ch(), short_run(1e4)), ValidationError);
    const Grid small{1, 32, 40.0};
    CHECK_THROWS_AS(integrate(Field(small), ch(), short_run(2.0)), ValidationError);
    auto bad = short_run(2.0);
    bad.snapshot_times = {3.0};
    CHECK_THROWS_AS(integrate(w0, ch(), bad), ValidationError);
  }

  TEST_CASE("blow-up of a focusing monomial is reported with the last state") {
    const Grid g{1, 128, 64.0};
    NonlinearModel m;
    m.monomials.push_back({1.0, {{MultiIndex(std::vector<int>{0}), 2}}});
    const auto w0 = init_perturbation({"gaussian", 50.0, 2.0, {}, 0, {}}, g).field;
    auto cfg = short_run(10.0);
    cfg.enforce_box = false;
    bool failed = false;
    try {
      integrate(w0, Equation{2, m}, cfg);
    } catch (const SolverFailure& e) {
      failed = true;
      CHECK(e.last_state.time >= 1.0);
      CHECK(e.last_state.field.values.size() == g.size());
    }
    CHECK(failed);
  }

  TEST_CASE("runs do not depend on the thread count") {
    const Grid g{2, 128, 64.0};
    const auto w0 = init_perturbation({"dipole", 0.1, 3.0, {}, 1, {}}, g).field;
    auto cfg = short_run(3.0);
    cfg.enforce_box = false;
    kernels::set_threads(1);
    const auto a = integrate(w0, ch(), cfg);
    kernels::set_threads(3);
    const auto b = integrate(w0, ch(), cfg);
    kernels::set_threads(0);
    CHECK(a.rows == b.rows);
    CHECK(a.snapshots.back().field.values == b.snapshots.back().field.values);
  }
}

TEST_SUITE("scaledflow") {
  const ScalingFrame frame = ScalingFrame::diffusive(2, 1);
  const Grid xi{1, 256, 96.0};

  TEST_CASE("the profile is a fixed point of the linear scaled flow") {
    const auto f = profile(frame, xi).samples;
    const auto r = scaled_rhs({frame, 0.0, f}, linear());
    CHECK(kernels::max_abs(r.values) < 1e-8 * kernels::max_abs(f.values));

    const auto p = project({frame, 0.0, f});
    CHECK(p.y0 == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(p.y1.at(0)) < 1e-12);
    CHECK(p.yperp < 1e-9);
  }

  TEST_CASE("B f* stays put under integration") {
    auto v = profile(frame, xi).samples;
    for (double& x : v.values) x *= 0.3;
    ScaledConfig cfg;
    cfg.tau_end = 2.0;
    cfg.step.tol = 1e-10;
    cfg.record_times = {0.0, 1.0, 2.0};
    const auto rec = integrate_scaled({frame, 0.0, v}, linear(), cfg);
    for (double y0 : rec.series("y0")) CHECK(y0 == doctest::Approx(0.3).epsilon(1e-9));
    for (double yp : rec.series("yperp")) CHECK(yp < 1e-8);
  }

  TEST_CASE("the first-moment mode decays at rate 1/2n") {
    const auto F = first_moment_profile(frame, xi, 0);
    ScaledConfig cfg;
    cfg.tau_end = 2.0;
    cfg.step.tol = 1e-10;
    cfg.record_times = {0.0, 2.0};
    const auto rec = integrate_scaled({frame, 0.0, F}, linear(), cfg);
    const auto y1 = rec.series("y1_0");
    CHECK(y1.front() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(y1.back() == doctest::Approx(std::exp(-0.5)).epsilon(1e-8));
  }

  TEST_CASE("reduced ODE closed forms") {
    const std::vector<double> taus = {0.0, 1.0, 4.0};
    const auto a = reduced_ode_solution(0.7, {0.2}, 0.9, frame, taus);
    CHECK(a.y0[2] == 0.7);
    CHECK(a.y1[2][0] == doctest::Approx(0.2 * std::exp(-1.0)).epsilon(1e-15));
    CHECK(a.eta[1] == doctest::Approx(0.9 * std::exp(-0.25)).epsilon(1e-15));
    const ScalingFrame half{2, 1, Rational(1, 2)};
    const auto b = reduced_ode_solution(0.7, {0.2}, 0.9, half, taus);
    CHECK(b.y0[2] == doctest::Approx(0.7 * std::exp(1.0)).epsilon(1e-15));
    CHECK(b.y1[2][0] == 0.2);
    CHECK(b.eta[2] == doctest::Approx(0.9 * std::exp(-0.5)).epsilon(1e-15));
    CHECK_THROWS_AS(reduced_ode_solution(0.7, {0.2}, 0.9, ScalingFrame{2, 1, Rational(1, 3)}, taus),
                    ValidationError);
  }

  TEST_CASE("frame mismatches are rejected") {
    const auto f = profile(frame, xi).samples;
    CHECK_THROWS_AS(scaled_rhs({ScalingFrame::diffusive(2, 2), 0.0, f}, linear()), ValidationError);
    CHECK_THROWS_AS(scaled_rhs({frame, 0.0, f}, Equation{1, NonlinearModel{}}), ValidationError);
  }
}
