#include "chasym/scaledflow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "chasym/kernels.hpp"
#include "chasym/simulator.hpp"
#include "chasym/spectrum.hpp"

namespace chasym {

namespace {

void check_frame(const ScalingFrame& frame, const Grid& g, int n) {
  if (frame.d != g.dim) throw ValidationError("frame dimension does not match the grid");
  if (frame.n != n) throw ValidationError("frame order n does not match the equation");
}

// Adds (1/2n) xi.grad v to `out` (half spectrum).
class Drift {
 public:
  Drift(PseudoSpectral& ps, int n) : ps_(ps), n_(n), grad_(ps.grid().size()), acc_(ps.grid().size()),
                                    spec_(ps.spectral_size()) {
    for (int a = 0; a < ps.grid().dim; ++a) xi_.push_back(axis_coordinates(ps.grid(), a));
  }

  void add(std::span<const Complex> v_hat, std::span<Complex> out) {
    std::fill(acc_.begin(), acc_.end(), 0.0);
    for (std::size_t a = 0; a < xi_.size(); ++a) {
      ps_.gradient(v_hat, static_cast<int>(a), grad_);
      for (std::size_t i = 0; i < acc_.size(); ++i) acc_[i] += xi_[a][i] * grad_[i];
    }
    ps_.forward(acc_, spec_);
    const double c = 1.0 / (2.0 * n_);
    for (std::size_t o = 0; o < out.size(); ++o) out[o] += c * spec_[o];
  }

 private:
  PseudoSpectral& ps_;
  int n_;
  std::vector<std::vector<double>> xi_;
  std::vector<double> grad_, acc_;
  std::vector<Complex> spec_;
};

struct ProjectionBasis {
  Field f_star;
  std::vector<Field> first;
  std::vector<std::vector<double>> xi;
};

ProjectionBasis basis(const ScalingFrame& frame, const Grid& g) {
  ProjectionBasis b;
  b.f_star = profile(frame, g, std::numeric_limits<double>::infinity()).samples;
  for (int a = 0; a < g.dim; ++a) {
    b.first.push_back(first_moment_profile(frame, g, a));
    b.xi.push_back(axis_coordinates(g, a));
  }
  return b;
}

Projections project_with(const Field& v, const ProjectionBasis& b) {
  const Grid& g = v.grid;
  const double dv = g.cell_volume();
  Projections p;
  p.y0 = std::pow(2.0 * std::numbers::pi, -0.5 * g.dim) * dv * kernels::sum(v.values);
  std::vector<double> rest = v.values;
  for (std::size_t i = 0; i < rest.size(); ++i) rest[i] -= p.y0 * b.f_star.values[i];
  for (int a = 0; a < g.dim; ++a) {
    const double y = dv * kernels::dot(b.xi[static_cast<size_t>(a)], v.values);
    p.y1.push_back(y);
    const auto& f = b.first[static_cast<size_t>(a)].values;
    for (std::size_t i = 0; i < rest.size(); ++i) rest[i] -= y * f[i];
  }
  p.yperp = std::sqrt(dv * kernels::dot(rest, rest));
  return p;
}

void check_edge(const Field& v, double tol, double tau) {
  const double sup = kernels::max_abs(v.values);
  const double edge = edge_max(v);
  if (sup > 0.0 && edge > tol * sup) {
    throw NumericalFailure("scaled state leaks through the box edge at tau = " + fmt_num(tau) +
                           ": edge/sup = " + fmt_num(edge / sup));
  }
}

}  // namespace

Projections project(const ScaledState& state, double edge_tol) {
  check_edge(state.v, edge_tol, state.tau);
  return project_with(state.v, basis(state.frame, state.v.grid));
}

Field scaled_rhs(const ScaledState& state, const Equation& eq, Dealias dealias) {
  const Grid& g = state.v.grid;
  check_frame(state.frame, g, eq.n);
  PseudoSpectral ps(g, dealias);
  std::vector<Complex> vh(ps.spectral_size()), out(ps.spectral_size());
  ps.forward(state.v.values, vh);
  auto ex = eq.nonlinearity.scaled_exponents(state.frame);
  std::vector<double> mult(ex.size());
  for (std::size_t i = 0; i < ex.size(); ++i) mult[i] = std::exp(ex[i] * state.tau);
  ps.nonlinear(eq.nonlinearity, mult, vh, out, std::numeric_limits<double>::infinity());
  Drift drift(ps, eq.n);
  drift.add(vh, out);
  auto symbol = ps.linear_symbol(eq.n, to_double(state.frame.beta));
  for (std::size_t o = 0; o < out.size(); ++o) out[o] += symbol[o] * vh[o];
  Field r(g);
  ps.inverse(out, r.values);
  return r;
}

void ScaledConfig::validate() const {
  if (!(tau_end > 0.0)) throw ValidationError("tau_end must be positive");
  if (!(step.dt > 0.0) || !(step.tol > 0.0)) throw ValidationError("dt and tol must be positive");
  if (!(edge_tol > 0.0)) throw ValidationError("edge_tol must be positive");
  for (double t : record_times) {
    if (t < 0.0 || t > tau_end) throw ValidationError("record time outside [0, tau_end]");
  }
  for (double t : snapshot_times) {
    if (t < 0.0 || t > tau_end) throw ValidationError("snapshot time outside [0, tau_end]");
  }
}

RunRecord integrate_scaled(const ScaledState& state0, const Equation& eq, const ScaledConfig& config) {
  const Grid& g = state0.v.grid;
  g.validate();
  config.validate();
  check_frame(state0.frame, g, eq.n);
  if (state0.tau != 0.0) throw ValidationError("scaled runs start at tau = 0 (t = 1)");

  PseudoSpectral ps(g, config.dealias);
  Drift drift(ps, eq.n);
  const auto exponents = eq.nonlinearity.scaled_exponents(state0.frame);
  std::vector<double> mult(exponents.size());
  auto rhs = [&](double tau, std::span<const Complex> v, std::span<Complex> out) {
    std::fill(out.begin(), out.end(), Complex{});
    if (!eq.nonlinearity.empty()) {
      for (std::size_t i = 0; i < mult.size(); ++i) mult[i] = std::exp(exponents[i] * tau);
      ps.nonlinear(eq.nonlinearity, mult, v, out, config.blowup);
    }
    drift.add(v, out);
  };
  IfRk4 stepper(ps.linear_symbol(eq.n, to_double(state0.frame.beta)), ps.sup_weights(), rhs, config.step);

  const auto b = basis(state0.frame, g);
  std::vector<Complex> vh(ps.spectral_size());
  ps.forward(state0.v.values, vh);

  std::set<double> record(config.record_times.begin(), config.record_times.end());
  record.insert(0.0);
  record.insert(config.tau_end);
  std::set<double> snaps(config.snapshot_times.begin(), config.snapshot_times.end());
  std::set<double> stops = record;
  stops.insert(snaps.begin(), snaps.end());

  RunRecord rec;
  rec.columns = {"tau", "eta", "eta_tilde", "y0"};
  for (int a = 0; a < g.dim; ++a) rec.columns.push_back("y1_" + std::to_string(a));
  rec.columns.push_back("yperp");
  rec.columns.push_back("sup");

  ScaledState s{state0.frame, 0.0, Field(g)};
  auto last_good = [&] {
    Field f(g);
    ps.inverse(vh, f.values);
    return Snapshot{s.tau, f, ""};
  };
  for (double stop : stops) {
    try {
      stepper.advance(s.tau, vh, stop);
    } catch (const NumericalFailure& e) {
      throw SolverFailure(e.what(), last_good());
    }
    ps.inverse(vh, s.v.values);
    try {
      check_edge(s.v, config.edge_tol, s.tau);
    } catch (const NumericalFailure& e) {
      throw SolverFailure(e.what(), Snapshot{s.tau, s.v, ""});
    }
    if (record.count(stop)) {
      auto p = project_with(s.v, b);
      std::vector<double> row = {s.tau, s.eta(), s.eta_tilde(), p.y0};
      row.insert(row.end(), p.y1.begin(), p.y1.end());
      row.push_back(p.yperp);
      row.push_back(kernels::max_abs(s.v.values));
      rec.rows.push_back(std::move(row));
    }
    if (snaps.count(stop)) rec.snapshots.push_back({s.tau, s.v, ""});
  }
  rec.metadata["steps"] = {{"accepted", stepper.accepted()},
                           {"rejected", stepper.rejected()},
                           {"rhs_evaluations", stepper.evaluations()}};
  return rec;
}

ReducedTrajectory reduced_ode_solution(double y0, const std::vector<double>& y1, double eta, const ScalingFrame& frame,
                                       const std::vector<double>& taus) {
  const bool diffusive = frame.beta == Rational(frame.d, 2 * frame.n);
  const bool shifted = frame.n == 2 && frame.d == 1 && frame.beta == Rational(1, 2);
  if (!diffusive && !shifted) {
    throw ValidationError("no reduced dynamics for frame (n=" + std::to_string(frame.n) + ", d=" +
                          std::to_string(frame.d) + ", beta=" + to_string(frame.beta) + ")");
  }
  if (static_cast<int>(y1.size()) != frame.d) throw ValidationError("y1 must have d components");
  ReducedTrajectory r;
  for (double tau : taus) {
    r.tau.push_back(tau);
    if (diffusive) {
      const double decay = std::exp(-tau / (2.0 * frame.n));
      r.y0.push_back(y0);
      std::vector<double> y(y1);
      for (double& v : y) v *= decay;
      r.y1.push_back(y);
      r.eta.push_back(eta * decay);
    } else {
      r.y0.push_back(std::exp(tau / 4.0) * y0);
      r.y1.push_back(y1);
      r.eta.push_back(eta * std::exp(-tau / 8.0));
    }
  }
  return r;
}

}  // namespace chasym
