#include "chasym/commands.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "chasym/analysis.hpp"
#include "chasym/config.hpp"
#include "chasym/io.hpp"
#include "chasym/kernels.hpp"
#include "chasym/scaledflow.hpp"
#include "chasym/simulator.hpp"
#include "chasym/spectrum.hpp"

namespace chasym {

namespace {

std::string factor_text(const Factor& f) {
  std::string s;
  if (f.alpha.total() == 0) {
    s = "u";
  } else {
    s = "D(";
    for (int i = 0; i < f.alpha.dim(); ++i) s += (i ? "," : "") + std::to_string(f.alpha[i]);
    s += ")u";
  }
  if (f.power != 1) s += "^" + std::to_string(f.power);
  return s;
}

json rates_json(const std::optional<PredictedRates>& r) {
  if (!r) return nullptr;
  return {{"decay_exponent", to_string(r->decay_exponent)},
          {"remainder_exponent", to_string(r->remainder_exponent)},
          {"frame", frame_json(r->frame)}};
}

int binomial(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return static_cast<int>(r);
}

json initial_json(const Perturbation& p, const InitialData& init) {
  json j = {{"kind", p.kind}, {"mass", init.mass}, {"first_moments", init.first_moments}};
  if (p.kind != "custom") {
    j["amplitude"] = p.amplitude;
    j["width"] = p.width;
    j["axis"] = p.axis;
    j["center"] = p.center;
  }
  double l1 = 0.0;
  for (double v : init.field.values) l1 += std::abs(v);
  j["l1"] = l1 * init.field.grid.cell_volume();
  j["sup"] = kernels::max_abs(init.field.values);
  return j;
}

std::string gnuplot_script(const std::vector<std::string>& lines) {
  std::string s;
  for (const auto& l : lines) s += l + "\n";
  return s;
}

json analyze_scaled(const RunRecord& record, const AnalyzeConfig& cfg, const Outputs& out) {
  const auto tau = record.series("tau");
  const auto y0 = record.series("y0");
  const auto yperp = record.series("yperp");
  const int d = record.metadata.at("spec").at("d").get<int>();
  const int n = record.metadata.at("spec").at("n").get<int>();
  const auto& fj = record.metadata.at("frame");
  const ScalingFrame frame{n, d, parse_rational(fj.at("beta"), "frame.beta")};
  json rep = {{"kind", "scaled"}, {"frame", frame_json(frame)}};

  double y0_drift = 0.0;
  double y0_max = 0.0;
  for (double v : y0) {
    y0_drift = std::max(y0_drift, std::abs(v - y0.front()));
    y0_max = std::max(y0_max, std::abs(v));
  }
  rep["y0_initial"] = y0.front();
  rep["y0_max_abs"] = y0_max;
  rep["y0_relative_drift"] = y0.front() != 0.0 ? json(y0_drift / std::abs(y0.front())) : json(nullptr);

  std::vector<double> y1_0;
  json y1 = json::array();
  for (int a = 0; a < d; ++a) {
    const auto s = record.series("y1_" + std::to_string(a));
    double drift = 0.0;
    for (double v : s) drift = std::max(drift, std::abs(v - s.front()));
    y1.push_back({{"initial", s.front()},
                  {"final", s.back()},
                  {"relative_drift", s.front() != 0.0 ? json(drift / std::abs(s.front())) : json(nullptr)}});
    y1_0.push_back(s.front());
  }
  rep["y1"] = y1;

  const double lo = cfg.window ? cfg.window->first : std::min(1.0, tau.back() / 2);
  const double hi = cfg.window ? cfg.window->second : tau.back();
  std::vector<double> x, y;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    if (tau[i] >= lo && tau[i] <= hi && yperp[i] > 0.0) {
      x.push_back(tau[i]);
      y.push_back(std::log(yperp[i]));
    }
  }
  if (x.size() >= 3) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      mx += x[i];
      my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sxy += (x[i] - mx) * (y[i] - my);
      sxx += (x[i] - mx) * (x[i] - mx);
    }
    rep["yperp_log_slope"] = sxy / sxx;
  } else {
    rep["yperp_log_slope"] = nullptr;
  }
  rep["yperp_window"] = {lo, hi};

  try {
    auto red = reduced_ode_solution(y0.front(), y1_0, 1.0, frame, tau);
    double dev0 = 0.0;
    double dev1 = 0.0;
    for (std::size_t i = 0; i < tau.size(); ++i) {
      dev0 = std::max(dev0, std::abs(y0[i] - red.y0[i]));
      for (int a = 0; a < d; ++a) {
        dev1 = std::max(dev1, std::abs(record.rows[i][record.column("y1_" + std::to_string(a))] -
                                       red.y1[i][static_cast<size_t>(a)]));
      }
    }
    rep["reduced_ode"] = {{"max_abs_deviation_y0", dev0}, {"max_abs_deviation_y1", dev1}};
  } catch (const ValidationError& e) {
    rep["reduced_ode"] = {{"unavailable", e.what()}};
  }

  write_atomic(out.dir / "report.json", rep.dump(2) + "\n");
  if (out.gnuplot) {
    auto gp = gnuplot_script({"set datafile separator ','", "set key autotitle columnhead", "set logscale y",
                              "set xlabel 'tau'",
                              "plot 'diagnostics.csv' using 1:4 with lines, '' using 1:(column('yperp')) with lines"});
    write_atomic(out.dir / "analyze.gp", gp);
    rep["gnuplot"] = gp;
  }
  return rep;
}

}  // namespace

json classify_command(const json& config, const Outputs& out) {
  const auto cfg = parse_classify(config);
  const PDESpec spec = cfg.spec.pde();
  const auto report = classify_pde(spec);
  json terms = json::array();
  for (std::size_t i = 0; i < spec.nonlinearity.size(); ++i) {
    const auto& t = spec.nonlinearity[i];
    std::string text;
    for (const auto& f : t.factors) text += (text.empty() ? "" : " ") + factor_text(f);
    const auto& c = report.terms[i];
    terms.push_back({{"term", text},
                     {"coefficient", t.coefficient},
                     {"p", c.p},
                     {"K", c.K},
                     {"label", to_string(c.label)}});
  }
  json summary = {{"spec", spec_json(cfg.spec)},
                  {"terms", terms},
                  {"aggregate", to_string(report.aggregate)},
                  {"predicted_rates", rates_json(predicted_rates(spec))}};
  write_atomic(out.dir / "classification.json", summary.dump(2) + "\n");
  write_atomic(out.dir / "classification.txt", classify_table(summary));
  return summary;
}

std::string classify_table(const json& summary) {
  std::ostringstream s;
  std::size_t width = 4;
  for (const auto& t : summary.at("terms")) width = std::max(width, t.at("term").get<std::string>().size());
  s << std::left << std::setw(static_cast<int>(width)) << "term" << "  " << std::setw(12) << "coefficient"
    << std::right << std::setw(4) << "p" << std::setw(4) << "K" << "  label\n";
  for (const auto& t : summary.at("terms")) {
    s << std::left << std::setw(static_cast<int>(width)) << t.at("term").get<std::string>() << "  " << std::setw(12)
      << std::setprecision(6) << t.at("coefficient").get<double>() << std::right << std::setw(4)
      << t.at("p").get<long>() << std::setw(4) << t.at("K").get<int>() << "  " << t.at("label").get<std::string>()
      << "\n";
  }
  s << "aggregate: " << summary.at("aggregate").get<std::string>() << "\n";
  const auto& r = summary.at("predicted_rates");
  if (r.is_null()) {
    s << "predicted rates: none (relevant term outside the worked-out case)\n";
  } else {
    s << "predicted rates: decay t^-" << r.at("decay_exponent").get<std::string>() << ", remainder t^-"
      << r.at("remainder_exponent").get<std::string>() << ", beta = " << r.at("frame").at("beta").get<std::string>()
      << "\n";
  }
  return s.str();
}

json spectrum_command(const std::string& mode, const json& config, const Outputs& out) {
  const auto cfg = parse_spectrum(config, mode);
  const auto& fr = cfg.frame;
  json meta = {{"mode", mode}, {"frame", frame_json(fr)}};
  if (mode == "eig") {
    json rows = json::array();
    for (int j = 0; j <= cfg.j_max; ++j) {
      const auto lam = eigenvalue(j, fr);
      rows.push_back({{"j", j},
                      {"eigenvalue", to_string(lam)},
                      {"value", to_double(lam)},
                      {"multiplicity", binomial(j + fr.d - 1, fr.d - 1)}});
    }
    meta["eigenvalues"] = rows;
    write_atomic(out.dir / "eigenvalues.json", meta.dump(2) + "\n");
    return meta;
  }
  if (mode == "profile") {
    const Grid& g = *cfg.grid;
    auto prof = profile(fr, g, cfg.tolerance);
    std::vector<std::string> cols;
    for (int a = 0; a < g.dim; ++a) cols.push_back("x" + std::to_string(a));
    cols.push_back("value");
    cols.push_back("error_estimate");
    if (g.dim == 1) cols.push_back("quadrature");
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < g.size(); ++i) {
      auto idx = unflatten(g, i);
      std::vector<double> r;
      for (int a = 0; a < g.dim; ++a) r.push_back(g.coordinate(idx[static_cast<size_t>(a)]));
      r.push_back(prof.samples.values[i]);
      r.push_back(prof.error_estimate);
      if (g.dim == 1) r.push_back(profile_value(fr.n, 1, r[0]));
      rows.push_back(std::move(r));
    }
    write_atomic(out.dir / "profile.csv", to_csv(cols, rows));
    meta["grid"] = grid_json(g);
    meta["tolerance"] = cfg.tolerance;
    meta["error_estimate"] = prof.error_estimate;
    meta["value_at_origin"] = profile_value(fr.n, fr.d, 0.0);
    write_atomic(out.dir / "profile.json", meta.dump(2) + "\n");
    return meta;
  }
  if (mode == "kernel") {
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < cfg.points; ++i) {
      const double z = cfg.z_min + (cfg.z_max - cfg.z_min) * i / (cfg.points - 1);
      std::vector<double> pt(static_cast<size_t>(fr.d), 0.0);
      pt[0] = z;
      auto s = kernel_g(pt, cfg.tau, fr.n, fr.d);
      rows.push_back({z, s.value, s.error});
    }
    write_atomic(out.dir / "kernel.csv", to_csv({"z", "value", "error_estimate"}, rows));
    meta["tau"] = cfg.tau;
    meta["a"] = -std::expm1(-cfg.tau);
    meta["z_range"] = {cfg.z_min, cfg.z_max};
    meta["points"] = cfg.points;
    meta["abs_tol"] = 1e-10;
    write_atomic(out.dir / "kernel.json", meta.dump(2) + "\n");
    return meta;
  }
  auto fit = kernel_decay_fit(fr.n, fr.d, cfg.tau, cfg.z_min, cfg.z_max, cfg.points);
  meta["tau"] = cfg.tau;
  meta["z_range"] = {cfg.z_min, cfg.z_max};
  meta["gamma_hat"] = fit.gamma_hat;
  meta["exponent_hat"] = fit.exponent_hat;
  meta["expected_exponent"] = 2.0 * fr.n / (2.0 * fr.n - 1.0);
  meta["r2"] = fit.r2;
  meta["samples"] = fit.samples;
  write_atomic(out.dir / "decay_fit.json", meta.dump(2) + "\n");
  return meta;
}

json simulate_command(const json& config, const Outputs& out) {
  const auto cfg = parse_simulate(config);
  const auto init = init_perturbation(cfg.initial, cfg.grid);
  const auto eq = cfg.spec.equation();
  const auto rates = predicted_rates(cfg.spec.pde());
  RunRecord rec;
  try {
    rec = integrate(init.field, eq, cfg.integrator);
  } catch (const SolverFailure& f) {
    write_failure(out.dir, "numerical_failure", f.what(), &f.last_state);
    throw;
  }
  json steps = rec.metadata["steps"];
  rec.metadata = {{"kind", "simulate"},
                  {"spec", spec_json(cfg.spec)},
                  {"grid", grid_json(cfg.grid)},
                  {"frame", frame_json(rates ? rates->frame : ScalingFrame::diffusive(eq.n, cfg.grid.dim))},
                  {"predicted_rates", rates_json(rates)},
                  {"initial", initial_json(cfg.initial, init)},
                  {"seed", cfg.header.seed},
                  {"config", config},
                  {"steps", steps}};
  write_record(out.dir, rec);
  const auto& last = rec.rows.back();
  return {{"run_dir", out.dir.string()},
          {"t_end", last[0]},
          {"sup", last[1]},
          {"mass", last[3]},
          {"rows", rec.rows.size()},
          {"snapshots", rec.snapshots.size()},
          {"steps", steps}};
}

json scaled_command(const json& config, const Outputs& out) {
  const auto cfg = parse_scaled(config);
  const auto init = init_perturbation(cfg.initial, cfg.grid);
  const auto eq = cfg.spec.equation();
  RunRecord rec;
  try {
    rec = integrate_scaled(ScaledState{cfg.frame, 0.0, init.field}, eq, cfg.integrator);
  } catch (const SolverFailure& f) {
    write_failure(out.dir, "numerical_failure", f.what(), &f.last_state);
    throw;
  }
  json steps = rec.metadata["steps"];
  rec.metadata = {{"kind", "scaled"},
                  {"spec", spec_json(cfg.spec)},
                  {"grid", grid_json(cfg.grid)},
                  {"frame", frame_json(cfg.frame)},
                  {"initial", initial_json(cfg.initial, init)},
                  {"seed", cfg.header.seed},
                  {"config", config},
                  {"steps", steps}};
  write_record(out.dir, rec);
  const auto& last = rec.rows.back();
  return {{"run_dir", out.dir.string()},
          {"tau_end", last[0]},
          {"y0", last[3]},
          {"rows", rec.rows.size()},
          {"snapshots", rec.snapshots.size()},
          {"steps", steps}};
}

json analyze_command(const fs::path& run_dir, const json& config, const Outputs& out) {
  if (!fs::exists(run_dir / "run.json")) throw ValidationError("'" + run_dir.string() + "' is not a run directory");
  auto rec = read_record(run_dir);
  return analyze_record(rec, config, out);
}

json analyze_record(const RunRecord& record, const json& config, const Outputs& out) {
  const AnalyzeConfig cfg = config.is_null() ? AnalyzeConfig{} : parse_analyze(config);
  const auto& meta = record.metadata;
  if (meta.value("kind", "") == "scaled") return analyze_scaled(record, cfg, out);
  if (meta.value("kind", "") != "simulate") throw ValidationError("run metadata has no known kind");

  const auto spec = parse_spec(meta.at("spec"));
  const Grid grid = grid_from_json(meta.at("grid"));
  const int n = spec.n;
  const int d = spec.d;
  const auto rates = predicted_rates(spec.pde());
  const ScalingFrame frame = rates ? rates->frame : ScalingFrame::diffusive(n, d);
  const auto t = record.series("t");
  const double t_end = t.back();
  const double lo = cfg.window ? cfg.window->first : t_end / 10.0;
  const double hi = cfg.window ? cfg.window->second : t_end;

  json rep = {{"kind", "simulate"}, {"frame", frame_json(frame)}, {"predicted_rates", rates_json(rates)}};
  auto sup_fit = decay_exponent(record, cfg.norm, lo, hi);
  rep["decay"] = {{"norm", cfg.norm},
                  {"window", {lo, hi}},
                  {"slope", sup_fit.exponent},
                  {"residual", sup_fit.residual},
                  {"samples", sup_fit.samples},
                  {"monotone", sup_fit.monotone}};

  const bool diffusive = frame.beta == Rational(d, 2 * n);
  const std::string ref_kind = cfg.reference != "auto" ? cfg.reference : (diffusive ? "profile" : "first_moment");
  const auto& init = meta.at("initial");
  double predicted = ref_kind == "profile"
                         ? std::pow(2.0 * std::numbers::pi, -0.5 * d) * init.at("mass").get<double>()
                         : init.at("first_moments").at(static_cast<size_t>(cfg.axis)).get<double>();
  if (cfg.amplitude) predicted = *cfg.amplitude;
  rep["reference"] = ref_kind;
  rep["predicted_amplitude"] = predicted;

  const double t_far = std::max(hi, cfg.fit_time);
  Grid xi = cfg.xi_grid ? *cfg.xi_grid
                        : Grid{d, d == 1 ? 512 : (d == 2 ? 256 : 64),
                               std::min(40.0, grid.length / std::pow(t_far, 1.0 / (2 * n)))};
  const Field ref = ref_kind == "profile" ? profile(frame, xi, std::numeric_limits<double>::infinity()).samples
                                          : first_moment_profile(frame, xi, cfg.axis);
  rep["xi_grid"] = grid_json(xi);

  std::vector<std::vector<double>> profile_rows;
  if (!record.snapshots.empty()) {
    const Snapshot* near = &record.snapshots.front();
    for (const auto& s : record.snapshots) {
      if (std::abs(std::log(s.time / cfg.fit_time)) < std::abs(std::log(near->time / cfg.fit_time))) near = &s;
    }
    auto v = scaled_profile(near->field, near->time, frame, xi);
    auto fit = amplitude_fit(v, ref);
    double dist = 0.0;
    for (std::size_t i = 0; i < v.values.size(); ++i) {
      dist = std::max(dist, std::abs(v.values[i] - predicted * ref.values[i]));
    }
    rep["amplitude"] = {{"time", near->time},
                        {"fitted", fit.amplitude},
                        {"relative_error", predicted != 0.0 ? json(std::abs(fit.amplitude / predicted - 1.0)) : json(nullptr)},
                        {"fit_residual", fit.residual},
                        {"profile_distance", dist},
                        {"profile_distance_relative", predicted != 0.0 ? json(dist / std::abs(predicted)) : json(nullptr)}};
    for (std::size_t i = 0; i < v.values.size(); ++i) {
      auto idx = unflatten(xi, i);
      std::vector<double> r;
      for (int a = 0; a < d; ++a) r.push_back(xi.coordinate(idx[static_cast<size_t>(a)]));
      r.push_back(v.values[i]);
      r.push_back(predicted * ref.values[i]);
      profile_rows.push_back(std::move(r));
    }
    auto rem = remainder_rate(record, ref, predicted, frame, lo, hi, cfg.noise_floor);
    rep["remainder"] = {{"window", {lo, hi}},
                        {"slope", rem.saturated ? json(nullptr) : json(rem.exponent)},
                        {"saturated", rem.saturated},
                        {"samples", rem.samples},
                        {"residual", rem.residual}};
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < rem.times.size(); ++i) rows.push_back({rem.times[i], rem.values[i]});
    write_atomic(out.dir / "remainder.csv", to_csv({"t", "remainder_sup"}, rows));
  }

  json checks = json::object();
  if (rates) {
    const double decay = to_double(rates->decay_exponent);
    const double slope = sup_fit.exponent;
    checks["decay_slope"] = std::abs(slope + decay) <= cfg.slope_tolerance * decay;
    if (rep.contains("amplitude") && !rep["amplitude"]["relative_error"].is_null()) {
      checks["amplitude"] = rep["amplitude"]["relative_error"].get<double>() < 0.1;
      checks["profile_distance"] = rep["amplitude"]["profile_distance_relative"].get<double>() < 0.1;
    }
    if (rep.contains("remainder")) {
      const auto& r = rep["remainder"];
      checks["remainder_slope"] =
          r["saturated"].get<bool>() || r["slope"].get<double>() <= -to_double(rates->remainder_exponent) + 0.1;
    }
  }
  rep["checks"] = checks;

  std::vector<std::vector<double>> decay_rows;
  for (const auto& row : record.rows) decay_rows.push_back({row[0], row[1], row[2]});
  write_atomic(out.dir / "decay.csv", to_csv({"t", "sup", "l2"}, decay_rows));
  if (!profile_rows.empty()) {
    std::vector<std::string> cols;
    for (int a = 0; a < d; ++a) cols.push_back("xi" + std::to_string(a));
    cols.push_back("profile");
    cols.push_back("prediction");
    write_atomic(out.dir / "profile.csv", to_csv(cols, profile_rows));
  }
  write_atomic(out.dir / "report.json", rep.dump(2) + "\n");
  if (out.gnuplot) {
    std::vector<std::string> gp = {"set datafile separator ','", "set key autotitle columnhead", "set logscale xy",
                                   "set xlabel 't'", "plot 'decay.csv' using 1:2 with linespoints, '' using 1:3 with lines"};
    if (rep.contains("remainder")) gp.push_back("pause -1\nplot 'remainder.csv' using 1:2 with linespoints");
    if (d == 1 && !profile_rows.empty()) {
      gp.push_back("pause -1\nunset logscale\nset xlabel 'xi'\nplot 'profile.csv' using 1:2 with lines, '' using 1:3 with lines");
    }
    const auto script = gnuplot_script(gp);
    write_atomic(out.dir / "analyze.gp", script);
    rep["gnuplot"] = script;
  }
  return rep;
}

void write_failure(const fs::path& dir, const std::string& kind, const std::string& message, const Snapshot* last_state) {
  json err = {{"error", kind}, {"message", message}};
  if (last_state != nullptr) {
    Snapshot s = *last_state;
    auto rel = write_snapshot(dir / "diagnostic", 0, s);
    err["diagnostic_snapshot"] = "diagnostic/" + rel;
    err["time"] = s.time;
  }
  write_atomic(dir / "error.json", err.dump(2) + "\n");
}

}  // namespace chasym
