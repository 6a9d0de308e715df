#include "chasym/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "chasym/kernels.hpp"
#include "chasym/spectrum.hpp"

namespace chasym {

InitialData init_perturbation(const Perturbation& p, const Grid& grid) {
  grid.validate();
  const int d = grid.dim;
  std::vector<double> center = p.center.empty() ? std::vector<double>(static_cast<size_t>(d), 0.0) : p.center;
  if (static_cast<int>(center.size()) != d) throw ValidationError("perturbation center has wrong dimension");
  Field f(grid);
  if (p.kind == "custom") {
    if (p.samples.size() != grid.size()) throw ValidationError("custom samples do not match the grid size");
    f.values = p.samples;
  } else {
    if (!(p.width > 0.0)) throw ValidationError("perturbation width must be positive");
    if (p.kind != "gaussian" && p.kind != "dipole") {
      throw ValidationError("unknown perturbation kind '" + p.kind + "' (gaussian, dipole, custom)");
    }
    if (p.axis < 0 || p.axis >= d) throw ValidationError("dipole axis out of range");
    const double s2 = 2.0 * p.width * p.width;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      auto idx = unflatten(grid, i);
      double r2 = 0.0;
      for (int a = 0; a < d; ++a) {
        const double x = grid.coordinate(idx[static_cast<size_t>(a)]) - center[static_cast<size_t>(a)];
        r2 += x * x;
      }
      double v = p.amplitude * std::exp(-r2 / s2);
      if (p.kind == "dipole") {
        v *= (grid.coordinate(idx[static_cast<size_t>(p.axis)]) - center[static_cast<size_t>(p.axis)]) / p.width;
      }
      f.values[i] = v;
    }
  }
  for (double v : f.values) {
    if (!std::isfinite(v)) throw ValidationError("initial data contains non-finite values");
  }
  const double peak = kernels::max_abs(f.values);
  if (edge_max(f) > 1e-12 * peak) {
    throw ValidationError("initial data not decayed at the box edge (edge/peak > 1e-12)");
  }
  auto diag = diagnose(f);
  return {f, diag.mass, diag.moments};
}

void IntegratorConfig::validate() const {
  if (!(t_start > 0.0)) throw ValidationError("t_start must be positive");
  if (!(t_end > t_start)) throw ValidationError("t_end must exceed t_start");
  if (!(step.dt > 0.0)) throw ValidationError("dt must be positive");
  if (!(step.tol > 0.0)) throw ValidationError("tol must be positive");
  if (!(step.dt_min > 0.0) || !(step.dt_max >= step.dt_min)) throw ValidationError("need 0 < dt_min <= dt_max");
  if (!(edge_tol > 0.0)) throw ValidationError("edge_tol must be positive");
  if (!(box_margin > 0.0)) throw ValidationError("box_margin must be positive");
  for (double t : record_times) {
    if (t < t_start || t > t_end) throw ValidationError("record time outside [t_start, t_end]");
  }
  for (double t : snapshot_times) {
    if (t < t_start || t > t_end) throw ValidationError("snapshot time outside [t_start, t_end]");
  }
}

std::vector<double> log_times(double t0, double t1, int count) {
  if (count < 2 || !(t0 > 0.0) || !(t1 > t0)) throw ValidationError("log_times needs count >= 2 and 0 < t0 < t1");
  std::vector<double> t(static_cast<size_t>(count));
  const double a = std::log(t0);
  const double b = std::log(t1);
  for (int i = 0; i < count; ++i) t[static_cast<size_t>(i)] = std::exp(a + (b - a) * i / (count - 1));
  t.front() = t0;
  t.back() = t1;
  return t;
}

FieldDiagnostics diagnose(const Field& w) {
  const Grid& g = w.grid;
  FieldDiagnostics d;
  d.sup = kernels::max_abs(w.values);
  d.l2 = std::sqrt(g.cell_volume() * kernels::dot(w.values, w.values));
  d.mass = g.cell_volume() * kernels::sum(w.values);
  for (int a = 0; a < g.dim; ++a) {
    auto x = axis_coordinates(g, a);
    d.moments.push_back(g.cell_volume() * kernels::dot(x, w.values));
  }
  return d;
}

Field rhs_spectral(const Field& w, const Equation& eq, Dealias dealias) {
  PseudoSpectral ps(w.grid, dealias);
  std::vector<Complex> wh(ps.spectral_size()), out(ps.spectral_size());
  ps.forward(w.values, wh);
  std::vector<double> ones(eq.nonlinearity.term_count(), 1.0);
  ps.nonlinear(eq.nonlinearity, ones, wh, out, std::numeric_limits<double>::infinity());
  auto symbol = ps.linear_symbol(eq.n);
  for (std::size_t o = 0; o < out.size(); ++o) out[o] += symbol[o] * wh[o];
  Field r(w.grid);
  ps.inverse(out, r.values);
  return r;
}

double required_box(int n, int d, double t_end, double margin) {
  return 2.0 * margin * profile_decay_radius(n, d) * std::pow(t_end, 1.0 / (2 * n));
}

RunRecord integrate(const Field& w0, const Equation& eq, const IntegratorConfig& config) {
  const Grid& g = w0.grid;
  g.validate();
  config.validate();
  if (g.n < 64) throw ValidationError("simulation grids need N >= 64");
  if (eq.n < 1) throw ValidationError("n must be positive");
  if (config.enforce_box) {
    const double need = required_box(eq.n, g.dim, config.t_end, config.box_margin);
    if (g.length < need) {
      throw ValidationError("box too small: L = " + fmt_num(g.length) + " < " + fmt_num(need) +
                            " required for t_end = " + fmt_num(config.t_end) + " at margin " +
                            fmt_num(config.box_margin));
    }
  }

  PseudoSpectral ps(g, config.dealias);
  const std::vector<double> ones(eq.nonlinearity.term_count(), 1.0);
  auto rhs = [&](double, std::span<const Complex> w, std::span<Complex> out) {
    if (eq.nonlinearity.empty()) {
      std::fill(out.begin(), out.end(), Complex{});
      return;
    }
    ps.nonlinear(eq.nonlinearity, ones, w, out, config.blowup);
  };
  IfRk4 stepper(ps.linear_symbol(eq.n), ps.sup_weights(), rhs, config.step);

  std::vector<Complex> wh(ps.spectral_size());
  ps.forward(w0.values, wh);

  std::set<double> record(config.record_times.begin(), config.record_times.end());
  record.insert(config.t_start);
  record.insert(config.t_end);
  std::set<double> snaps(config.snapshot_times.begin(), config.snapshot_times.end());
  std::set<double> stops = record;
  stops.insert(snaps.begin(), snaps.end());

  RunRecord rec;
  rec.columns = {"t", "sup", "l2", "mass"};
  for (int a = 0; a < g.dim; ++a) rec.columns.push_back("m1_" + std::to_string(a));
  rec.columns.push_back("tail");

  Field w(g);
  double t = config.t_start;
  auto last_good = [&] {
    Field f(g);
    ps.inverse(wh, f.values);
    return Snapshot{t, f, ""};
  };
  for (double stop : stops) {
    try {
      stepper.advance(t, wh, stop);
    } catch (const NumericalFailure& e) {
      throw SolverFailure(e.what(), last_good());
    }
    ps.inverse(wh, w.values);
    auto diag = diagnose(w);
    if (!std::isfinite(diag.sup)) throw SolverFailure("non-finite field at t = " + fmt_num(t), last_good());
    if (diag.sup > 0.0 && edge_max(w) > config.edge_tol * diag.sup) {
      char msg[160];
      std::snprintf(msg, sizeof msg, "boundary contamination at t = %.6g: edge/sup = %.3g > %.3g", t,
                    edge_max(w) / diag.sup, config.edge_tol);
      throw SolverFailure(msg, Snapshot{t, w, ""});
    }
    if (record.count(stop)) {
      std::vector<double> row = {t, diag.sup, diag.l2, diag.mass};
      row.insert(row.end(), diag.moments.begin(), diag.moments.end());
      row.push_back(ps.tail_fraction(wh));
      rec.rows.push_back(std::move(row));
    }
    if (snaps.count(stop)) rec.snapshots.push_back({t, w, ""});
  }
  rec.metadata["steps"] = {{"accepted", stepper.accepted()},
                           {"rejected", stepper.rejected()},
                           {"rhs_evaluations", stepper.evaluations()}};
  return rec;
}

}  // namespace chasym
