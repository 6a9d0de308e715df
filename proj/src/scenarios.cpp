#include "chasym/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>

#include "chasym/analysis.hpp"
#include "chasym/commands.hpp"
#include "chasym/config.hpp"
#include "chasym/io.hpp"
#include "chasym/kernels.hpp"
#include "chasym/scaledflow.hpp"
#include "chasym/simulator.hpp"
#include "chasym/spectrum.hpp"

#ifndef CHASYM_CONFIG_DIR
#define CHASYM_CONFIG_DIR "configs"
#endif

namespace chasym {

namespace {

std::string fmt(double v, const char* spec = "%.4g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void add(ScenarioReport& r, const std::string& name, bool pass, const std::string& detail) {
  r.checks.push_back({name, pass, detail});
}

// ---- 1 -------------------------------------------------------------------

void golden_table(ScenarioReport& r, const json& cfg) {
  ObjectReader in(cfg, "scenario");
  parse_header(in);
  const int n = in.get<int>("n");
  const double max_seconds = in.get<double>("max_seconds");
  in.finish();

  const auto t0 = Clock::now();
  int matched = 0;
  int total = 0;
  std::string misses;
  for (int d = 1; d <= 3; ++d) {
    const auto spec = NonlinearModel::cahn_hilliard().as_spec(n, d);
    for (const auto& term : spec.nonlinearity) {
      const auto c = classify_term(term, n, d);
      Relevance want;
      if (term.total_power() == 2) {
        want = d == 1 ? Relevance::Relevant : (d == 2 ? Relevance::Critical : Relevance::Irrelevant);
      } else {
        want = d == 1 ? Relevance::Critical : Relevance::Irrelevant;
      }
      ++total;
      if (c.label == want) {
        ++matched;
      } else {
        misses += " d=" + std::to_string(d) + ":K=" + std::to_string(term.total_power());
      }
    }
    const auto agg = classify_pde(spec).aggregate;
    const Relevance want_agg = d == 1 ? Relevance::Relevant : (d == 2 ? Relevance::Critical : Relevance::Irrelevant);
    ++total;
    if (agg == want_agg) ++matched; else misses += " aggregate d=" + std::to_string(d);
  }
  const double dt = seconds_since(t0);
  add(r, "labels", matched == total, std::to_string(matched) + "/" + std::to_string(total) + " match" + misses);
  add(r, "runtime", dt < max_seconds, fmt(dt, "%.3g") + " s < " + fmt(max_seconds) + " s");
}

// ---- 2 -------------------------------------------------------------------

SpectralField phi(const Grid& g, int order, int n) {
  return sample_fourier(g, [&](std::span<const double> p) {
    return Complex(eigenfunction_fourier(MultiIndex({order}), n, p), 0.0);
  });
}

double rel_diff(const SpectralField& a, const SpectralField& b, double scale) {
  SpectralField d(a.grid);
  for (std::size_t i = 0; i < d.coeffs.size(); ++i) d.coeffs[i] = a.coeffs[i] - b.coeffs[i];
  return d.norm() / scale;
}

void semigroup_eig(ScenarioReport& r, const json& cfg) {
  ObjectReader in(cfg, "scenario");
  const auto header = parse_header(in);
  ObjectReader gr(in.raw("grid"), "grid");
  const Grid g{1, gr.get<int>("N"), gr.get<double>("L")};
  gr.finish();
  const int max_order = in.get<int>("max_order");
  const auto taus = in.get<std::vector<double>>("taus");
  const auto comp = in.get<std::vector<double>>("composition_taus");
  const int max_derivative = in.get<int>("max_derivative");
  const auto comm_taus = in.get<std::vector<double>>("commutation_taus");
  const double max_seconds = in.get<double>("max_seconds");
  in.finish();
  g.validate();

  const auto t0 = Clock::now();
  const auto frame = ScalingFrame::diffusive(2, 1);
  std::vector<SpectralField> fields;
  double eig_dev = 0.0;
  for (int a = 0; a <= max_order; ++a) {
    auto f = phi(g, a, 2);
    const double norm = f.norm();
    for (double tau : taus) {
      auto out = semigroup_apply(f, tau, frame);
      SpectralField expect(g);
      const double decay = std::exp(to_double(eigenvalue(a, frame)) * tau);
      for (std::size_t i = 0; i < f.coeffs.size(); ++i) expect.coeffs[i] = decay * f.coeffs[i];
      eig_dev = std::max(eig_dev, rel_diff(out, expect, norm));
    }
    fields.push_back(std::move(f));
  }
  // A random real-valued combination: Hermitian coefficients i^k a_k p^k e^{-p^4}.
  std::mt19937_64 rng(header.seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::vector<double> a(6);
  for (double& v : a) v = coef(rng);
  fields.push_back(sample_fourier(g, [&](std::span<const double> p) {
    Complex s = 0.0;
    for (int k = 0; k < 6; ++k) s += a[static_cast<size_t>(k)] * std::pow(Complex(0.0, 1.0), k) * std::pow(p[0], k);
    return s * std::exp(-std::pow(p[0], 4));
  }));

  double comp_dev = 0.0;
  for (const auto& f : fields) {
    for (std::size_t i = 0; i + 1 < comp.size(); i += 2) {
      auto two = semigroup_apply(semigroup_apply(f, comp[i], frame), comp[i + 1], frame);
      auto one = semigroup_apply(f, comp[i] + comp[i + 1], frame);
      comp_dev = std::max(comp_dev, rel_diff(two, one, f.norm()));
    }
  }
  double comm = 0.0;
  for (const auto& f : fields) {
    for (int l = 0; l <= max_derivative; ++l) {
      for (double tau : comm_taus) comm = std::max(comm, commutation_check(f, MultiIndex({l}), tau, frame));
    }
  }
  const double dt = seconds_since(t0);
  add(r, "eigen_decay", eig_dev < 1e-6, "max rel L2 dev " + fmt(eig_dev) + " < 1e-6");
  add(r, "composition", comp_dev < 1e-8, "max rel dev " + fmt(comp_dev) + " < 1e-8");
  add(r, "commutation", comm < 1e-6, "max residual " + fmt(comm) + " < 1e-6 (l <= " + std::to_string(max_derivative) + ")");
  add(r, "runtime", dt < max_seconds, fmt(dt, "%.3g") + " s < " + fmt(max_seconds) + " s");
}

// ---- 3 -------------------------------------------------------------------

void kernel_decay(ScenarioReport& r, const json& cfg) {
  ObjectReader in(cfg, "scenario");
  parse_header(in);
  const double tau = in.get<double>("tau");
  const int points = in.get<int>("points");
  const auto& cases = in.raw("cases");
  ObjectReader gauss(in.raw("gaussian_check"), "gaussian_check");
  const auto g_taus = gauss.get<std::vector<double>>("taus");
  const auto g_z = gauss.get<std::vector<double>>("z");
  gauss.finish();
  const double max_seconds = in.get<double>("max_seconds");
  in.finish();
  if (!cases.is_array()) throw ValidationError("scenario.cases: expected an array");

  const auto t0 = Clock::now();
  for (std::size_t i = 0; i < cases.size(); ++i) {
    ObjectReader c(cases[i], "cases[" + std::to_string(i) + "]");
    const int n = c.get<int>("n");
    const double z_min = c.get<double>("z_min");
    const double z_max = c.get<double>("z_max");
    c.finish();
    const auto fit = kernel_decay_fit(n, 1, tau, z_min, z_max, points);
    const double target = 2.0 * n / (2.0 * n - 1.0);
    const double rel = std::abs(fit.exponent_hat / target - 1.0);
    add(r, "n=" + std::to_string(n), rel <= 0.05 && fit.r2 > 0.99,
        "s=" + fmt(fit.exponent_hat) + " vs " + fmt(target) + " (" + fmt(100 * rel, "%.2f") + "% <= 5%), R2=" +
            fmt(fit.r2, "%.6f") + " > 0.99, " + std::to_string(fit.samples) + " samples");
  }
  double gdev = 0.0;
  for (double t : g_taus) {
    const double a = -std::expm1(-t);
    for (double z : g_z) {
      const double pt[1] = {z};
      const double exact = std::sqrt(std::numbers::pi / a) * std::exp(-z * z / (4.0 * a));
      gdev = std::max(gdev, std::abs(kernel_g(pt, t, 1, 1).value - exact));
    }
  }
  const double dt = seconds_since(t0);
  add(r, "gaussian", gdev < 1e-8, "max abs dev " + fmt(gdev) + " < 1e-8");
  add(r, "runtime", dt < max_seconds, fmt(dt, "%.3g") + " s < " + fmt(max_seconds) + " s");
}

// ---- 4, 5, 6 ---------------------------------------------------------------

json run_and_analyze(const json& cfg, const fs::path& out, const std::vector<std::string>& allowed_extra = {}) {
  ObjectReader in(cfg, "scenario");
  parse_header(in);
  const json sim = in.raw("simulate");
  const json ana = in.raw("analysis");
  for (const auto& k : allowed_extra) {
    if (in.has(k)) in.raw(k);
  }
  in.finish();
  simulate_command(sim, {out / "run", false});
  return analyze_command(out / "run", ana, {out / "analysis", true});
}

void check_slope(ScenarioReport& r, const json& rep, double lo, double hi) {
  const double s = rep.at("decay").at("slope").get<double>();
  add(r, "sup_slope", s >= lo && s <= hi, "slope " + fmt(s) + " in [" + fmt(lo) + ", " + fmt(hi) + "]");
}

void check_amplitude(ScenarioReport& r, const json& rep) {
  const auto& a = rep.at("amplitude");
  const double e = a.at("relative_error").get<double>();
  add(r, "amplitude", e < 0.1,
      "B_fit " + fmt(a.at("fitted").get<double>()) + " vs " + fmt(rep.at("predicted_amplitude").get<double>()) + " (" +
          fmt(100 * e, "%.2f") + "% < 10%)");
}

void check_remainder(ScenarioReport& r, const json& rep, double bound) {
  const auto& m = rep.at("remainder");
  if (m.at("saturated").get<bool>()) {
    add(r, "remainder", true, "saturated at the noise floor");
    return;
  }
  const double s = m.at("slope").get<double>();
  add(r, "remainder", s <= bound, "slope " + fmt(s) + " <= " + fmt(bound));
}

void dipole_d1(ScenarioReport& r, const json& cfg, const fs::path& out) {
  const auto rep = run_and_analyze(cfg, out);
  check_slope(r, rep, -0.55, -0.45);
  check_amplitude(r, rep);
  const double dist = rep.at("amplitude").at("profile_distance_relative").get<double>();
  add(r, "profile", dist < 0.1,
      "sup|v - B f| / |B| = " + fmt(dist) + " < 0.1 at t = " + fmt(rep.at("amplitude").at("time").get<double>()));
  check_remainder(r, rep, -0.65);
}

void critical_d2(ScenarioReport& r, const json& cfg, const fs::path& out) {
  const auto rep = run_and_analyze(cfg, out);
  check_slope(r, rep, -0.55, -0.45);
  check_amplitude(r, rep);
  check_remainder(r, rep, -0.65);
}

void irrelevant_d3(ScenarioReport& r, const json& cfg, const fs::path& out) {
  const auto rep = run_and_analyze(cfg, out);
  check_slope(r, rep, -0.75 * 1.15, -0.75 * 0.85);
  const auto rec = read_record(out / "run");
  const Grid xi = grid_from_json(rep.at("xi_grid"));
  const auto frame = ScalingFrame::diffusive(2, 3);
  const Field ref = profile(frame, xi, std::numeric_limits<double>::infinity()).samples;
  const auto window = rep.at("decay").at("window");
  std::vector<double> res;
  std::string series;
  for (const auto& s : rec.snapshots) {
    if (s.time < window[0].get<double>() || s.time > window[1].get<double>()) continue;
    const auto fit = amplitude_fit(scaled_profile(s.field, s.time, frame, xi), ref);
    res.push_back(fit.residual);
    series += (series.empty() ? "" : ",") + fmt(fit.residual, "%.3g");
  }
  bool decreasing = res.size() >= 2;
  for (std::size_t i = 1; i < res.size(); ++i) decreasing &= res[i] < res[i - 1];
  add(r, "profile_residual", decreasing, "decreasing over window: [" + series + "]");
}

// ---- 7 -------------------------------------------------------------------

void manifold(ScenarioReport& r, const json& cfg, const fs::path& out) {
  ObjectReader in(cfg, "scenario");
  parse_header(in);
  const json d2 = in.raw("d2");
  const json d1 = in.raw("d1");
  const auto window = in.get<std::vector<double>>("yperp_window");
  in.finish();
  if (window.size() != 2) throw ValidationError("scenario.yperp_window: expected [tau_min, tau_max]");

  scaled_command(d2, {out / "d2", false});
  scaled_command(d1, {out / "d1", false});
  const auto rec2 = read_record(out / "d2");
  const auto rec1 = read_record(out / "d1");

  const auto y0 = rec2.series("y0");
  double drift = 0.0;
  for (double v : y0) drift = std::max(drift, std::abs(v - y0.front()));
  drift /= std::abs(y0.front());
  add(r, "d2_y0_drift", drift < 1e-3, "max |y0 - y0(0)| / |y0(0)| = " + fmt(drift) + " < 1e-3");

  const auto y1 = rec1.series("y1_0");
  double d1drift = 0.0;
  for (double v : y1) d1drift = std::max(d1drift, std::abs(v - y1.front()));
  d1drift /= std::abs(y1.front());
  add(r, "d1_y1_drift", d1drift < 1e-2, "max |y1 - y1(0)| / |y1(0)| = " + fmt(d1drift) + " < 1e-2");

  double y0max = 0.0;
  for (double v : rec1.series("y0")) y0max = std::max(y0max, std::abs(v));
  const double y0rel = y0max / std::abs(y1.front());
  add(r, "d1_y0_zero", y0rel < 1e-8, "max |y0| / |y1(0)| = " + fmt(y0rel) + " < 1e-8");

  const auto tau = rec1.series("tau");
  const auto yp = rec1.series("yperp");
  double mx = 0, my = 0;
  int cnt = 0;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    if (tau[i] < window[0] || tau[i] > window[1]) continue;
    mx += tau[i];
    my += std::log(yp[i]);
    ++cnt;
  }
  mx /= cnt;
  my /= cnt;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    if (tau[i] < window[0] || tau[i] > window[1]) continue;
    sxy += (tau[i] - mx) * (std::log(yp[i]) - my);
    sxx += (tau[i] - mx) * (tau[i] - mx);
  }
  const double slope = cnt >= 3 ? sxy / sxx : 0.0;
  add(r, "d1_yperp_slope", cnt >= 3 && slope <= -0.20,
      "log yperp slope " + fmt(slope) + " <= -0.20 over tau in [" + fmt(window[0]) + ", " + fmt(window[1]) + "]");
}

// ---- 8 -------------------------------------------------------------------

void cross_frame(ScenarioReport& r, const json& cfg, const fs::path& out) {
  ObjectReader in(cfg, "scenario");
  parse_header(in);
  json sim = in.raw("simulate");
  json scaled = in.raw("scaled");
  const auto taus = in.get<std::vector<double>>("taus");
  in.finish();
  std::vector<double> ts;
  for (double t : taus) ts.push_back(std::exp(t));
  sim.at("integrator")["snapshots"] = ts;
  sim.at("integrator")["t_end"] = ts.back();
  scaled.at("integrator")["snapshots"] = taus;
  scaled.at("integrator")["tau_end"] = taus.back();

  simulate_command(sim, {out / "physical", false});
  scaled_command(scaled, {out / "scaled", false});
  const auto phys = read_record(out / "physical");
  const auto scal = read_record(out / "scaled");
  const auto scfg = parse_scaled(scaled);
  if (phys.snapshots.size() != taus.size() || scal.snapshots.size() != taus.size()) {
    throw NumericalFailure("cross-frame runs did not produce the expected snapshots");
  }
  double worst = 0.0;
  std::string each;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const auto& vs = scal.snapshots[i].field;
    auto vp = scaled_profile(phys.snapshots[i].field, phys.snapshots[i].time, scfg.frame, vs.grid);
    double diff = 0.0;
    for (std::size_t k = 0; k < vs.values.size(); ++k) diff = std::max(diff, std::abs(vs.values[k] - vp.values[k]));
    const double rel = diff / kernels::max_abs(vs.values);
    worst = std::max(worst, rel);
    each += (each.empty() ? "" : ",") + fmt(rel, "%.2e");
  }
  add(r, "relative_linf", worst < 1e-4, "max " + fmt(worst) + " < 1e-4 at tau = {" + [&] {
        std::string s;
        for (double t : taus) s += (s.empty() ? "" : ",") + fmt(t);
        return s;
      }() + "}: [" + each + "]");
}

// ---- 9 -------------------------------------------------------------------

bool same_tree(const fs::path& a, const fs::path& b, std::string& why) {
  std::vector<fs::path> fa, fb;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (e.is_regular_file()) fa.push_back(fs::relative(e.path(), a));
  }
  for (const auto& e : fs::recursive_directory_iterator(b)) {
    if (e.is_regular_file()) fb.push_back(fs::relative(e.path(), b));
  }
  std::sort(fa.begin(), fa.end());
  std::sort(fb.begin(), fb.end());
  if (fa != fb) {
    why = "file lists differ";
    return false;
  }
  for (const auto& f : fa) {
    if (read_file(a / f) != read_file(b / f)) {
      why = f.string() + " differs";
      return false;
    }
  }
  why = std::to_string(fa.size()) + " files identical";
  return true;
}

void solver_properties(ScenarioReport& r, const json& cfg, const fs::path& out) {
  ObjectReader in(cfg, "scenario");
  parse_header(in);
  const json mass_cfg = in.raw("mass");
  const json linear_cfg = in.raw("linear");
  ObjectReader order(in.raw("order"), "order");
  const json order_cfg = order.raw("simulate");
  const auto dts = order.get<std::vector<double>>("dts");
  order.finish();
  const json det_cfg = in.raw("determinism");
  const int det_threads = in.get<int>("determinism_threads");
  in.finish();
  if (dts.size() != 3) throw ValidationError("order.dts: expected three step sizes");

  {
    simulate_command(mass_cfg, {out / "mass", false});
    const auto rec = read_record(out / "mass");
    const auto m = rec.series("mass");
    double drift = 0.0;
    for (double v : m) drift = std::max(drift, std::abs(v - m.front()));
    const double l1 = rec.metadata.at("initial").at("l1").get<double>();
    add(r, "mass_drift", drift < 1e-10 * l1, "max |mass - mass0| / ||w0||_1 = " + fmt(drift / l1) + " < 1e-10");
  }
  {
    simulate_command(linear_cfg, {out / "linear", false});
    const auto rec = read_record(out / "linear");
    const auto cfgp = parse_simulate(linear_cfg);
    const auto init = init_perturbation(cfgp.initial, cfgp.grid);
    PseudoSpectral ps(cfgp.grid, Dealias::None);
    std::vector<Complex> wh(ps.spectral_size());
    ps.forward(init.field.values, wh);
    double worst = 0.0;
    for (const auto& s : rec.snapshots) {
      auto sym = ps.linear_symbol(cfgp.spec.n);
      std::vector<Complex> e(wh.size());
      for (std::size_t i = 0; i < wh.size(); ++i) e[i] = std::exp(sym[i] * (s.time - cfgp.integrator.t_start)) * wh[i];
      Field exact(cfgp.grid);
      ps.inverse(e, exact.values);
      for (std::size_t i = 0; i < exact.values.size(); ++i) {
        worst = std::max(worst, std::abs(exact.values[i] - s.field.values[i]));
      }
    }
    worst /= kernels::max_abs(init.field.values);
    add(r, "linear_exact", !rec.snapshots.empty() && worst < 1e-10,
        "max |w - exact| / sup w0 = " + fmt(worst) + " < 1e-10 over " + std::to_string(rec.snapshots.size()) + " snapshots");
  }
  {
    const auto base = parse_simulate(order_cfg);
    const auto init = init_perturbation(base.initial, base.grid);
    std::vector<Field> finals;
    for (double dt : dts) {
      auto ic = base.integrator;
      ic.step.adaptive = false;
      ic.step.dt = dt;
      ic.snapshot_times = {ic.t_end};
      finals.push_back(integrate(init.field, base.spec.equation(), ic).snapshots.back().field);
    }
    double e1 = 0.0, e2 = 0.0;
    for (std::size_t i = 0; i < finals[0].values.size(); ++i) {
      e1 = std::max(e1, std::abs(finals[0].values[i] - finals[1].values[i]));
      e2 = std::max(e2, std::abs(finals[1].values[i] - finals[2].values[i]));
    }
    const double p = std::log(e1 / e2) / std::log(dts[0] / dts[1]);
    add(r, "rk_order", p >= 3.5, "observed order " + fmt(p) + " >= 3.5 (differences " + fmt(e1) + ", " + fmt(e2) + ")");
  }
  {
    const int before = kernels::max_threads();
    simulate_command(det_cfg, {out / "det_a", false});
    kernels::set_threads(det_threads);
    try {
      simulate_command(det_cfg, {out / "det_b", false});
    } catch (...) {
      kernels::set_threads(before);
      throw;
    }
    kernels::set_threads(before);
    std::string why;
    const bool same = same_tree(out / "det_a", out / "det_b", why);
    add(r, "determinism", same, why + " (threads " + std::to_string(before) + " vs " + std::to_string(det_threads) + ")");
  }
}

struct Entry {
  const char* name;
  int criterion;
  const char* title;
};

const Entry kEntries[] = {
    {"golden_table", 1, "relevance golden table"},
    {"semigroup_eig", 2, "semigroup eigen-decay, composition, commutation"},
    {"kernel_decay", 3, "kernel stretched-exponential decay"},
    {"dipole_d1", 4, "d=1 relevant case, zero-mass dipole"},
    {"critical_d2", 5, "d=2 critical case"},
    {"irrelevant_d3", 6, "d=3 irrelevant case (extended)"},
    {"manifold", 7, "invariant-manifold observables"},
    {"cross_frame", 8, "physical vs scaled frame"},
    {"solver_properties", 9, "solver properties"},
};

}  // namespace

bool ScenarioReport::pass() const {
  if (!error.empty() || checks.empty()) return false;
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

nlohmann::json ScenarioReport::to_json() const {
  json checks_j = json::array();
  for (const auto& c : checks) checks_j.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  json j = {{"scenario", name}, {"criterion", criterion}, {"title", title}, {"pass", pass()}, {"checks", checks_j}};
  if (!error.empty()) j["error"] = error;
  return j;
}

std::string ScenarioReport::line() const {
  std::string s = std::string(pass() ? "PASS" : "FAIL") + "  " + std::to_string(criterion) + "  " + title + ":";
  for (const auto& c : checks) s += " [" + std::string(c.pass ? "ok" : "FAIL") + " " + c.name + ": " + c.detail + "]";
  if (!error.empty()) s += " [error: " + error + "]";
  s += " (" + fmt(seconds, "%.1f") + " s)";
  return s;
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& e : kEntries) v.emplace_back(e.name);
    return v;
  }();
  return names;
}

fs::path scenario_config(const std::string& name) {
  return fs::path(CHASYM_CONFIG_DIR) / "scenarios" / (name + ".json");
}

ScenarioReport run_scenario(const std::string& name, const fs::path& out_dir, const fs::path& config) {
  const Entry* entry = nullptr;
  for (const auto& e : kEntries) {
    if (name == e.name) entry = &e;
  }
  if (entry == nullptr) throw ValidationError("unknown scenario '" + name + "'");
  const json cfg = load_json((config.empty() ? scenario_config(name) : config).string());

  ScenarioReport r;
  r.name = name;
  r.criterion = entry->criterion;
  r.title = entry->title;
  // Stale sub-runs (e.g. error.json from an earlier failure) would leak into this one.
  for (const char* sub : {"run", "analysis", "d1", "d2", "physical", "scaled", "mass", "linear", "det_a", "det_b"}) {
    fs::remove_all(out_dir / sub);
  }
  const auto t0 = Clock::now();
  try {
    switch (entry->criterion) {
      case 1: golden_table(r, cfg); break;
      case 2: semigroup_eig(r, cfg); break;
      case 3: kernel_decay(r, cfg); break;
      case 4: dipole_d1(r, cfg, out_dir); break;
      case 5: critical_d2(r, cfg, out_dir); break;
      case 6: irrelevant_d3(r, cfg, out_dir); break;
      case 7: manifold(r, cfg, out_dir); break;
      case 8: cross_frame(r, cfg, out_dir); break;
      case 9: solver_properties(r, cfg, out_dir); break;
    }
  } catch (const ValidationError& e) {
    r.error = std::string("validation: ") + e.what();
  } catch (const NumericalFailure& e) {
    r.error = std::string("numerical: ") + e.what();
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.seconds = seconds_since(t0);
  write_atomic(out_dir / "report.json", r.to_json().dump(2) + "\n");
  return r;
}

}  // namespace chasym
