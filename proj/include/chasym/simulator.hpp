#pragma once

#include <string>
#include <vector>

#include "chasym/errors.hpp"
#include "chasym/grid.hpp"
#include "chasym/integrator.hpp"
#include "chasym/nonlinear.hpp"
#include "chasym/record.hpp"

namespace chasym {

struct Perturbation {
  std::string kind = "gaussian";  // gaussian | dipole | custom
  double amplitude = 0.05;
  double width = 1.0;
  std::vector<double> center;     // defaults to the origin
  int axis = 0;                   // dipole orientation
  std::vector<double> samples;    // custom: row-major values on the grid
};

struct InitialData {
  Field field;
  double mass = 0.0;
  std::vector<double> first_moments;
};

/// Builds w0 and reports its trapezoid moments. Rejects data whose value on the
/// box faces exceeds 1e-12 of the peak.
InitialData init_perturbation(const Perturbation& p, const Grid& grid);

struct IntegratorConfig {
  double t_start = 1.0;
  double t_end = 10.0;
  StepControl step;
  Dealias dealias = Dealias::TwoThirds;
  std::vector<double> record_times;    // diagnostics rows; t_end is always recorded
  std::vector<double> snapshot_times;  // fields kept in the record
  double edge_tol = 1e-8;              // |w| on the faces relative to sup |w|
  double blowup = 1e3;
  double box_margin = 4.0;             // require L/2 >= margin * Xi * t_end^{1/2n}
  bool enforce_box = true;

  void validate() const;
};

/// Equally spaced in log t (inclusive), `count` points.
std::vector<double> log_times(double t0, double t1, int count);

/// A run that stopped early; carries the last accepted state for diagnosis.
class SolverFailure : public NumericalFailure {
 public:
  SolverFailure(const std::string& what, Snapshot last) : NumericalFailure(what), last_state(std::move(last)) {}
  Snapshot last_state;
};

/// Diagnostics of one field: sup, L2, mass, first moments.
struct FieldDiagnostics {
  double sup = 0.0;
  double l2 = 0.0;
  double mass = 0.0;
  std::vector<double> moments;
};
FieldDiagnostics diagnose(const Field& w);

/// du/dt of the nonlinear equation for the field `w` (real space), for testing.
Field rhs_spectral(const Field& w, const Equation& eq, Dealias dealias = Dealias::TwoThirds);

/// Smallest admissible box side for a run to t_end: 2 * margin * Xi * t_end^{1/(2n)}.
double required_box(int n, int d, double t_end, double margin);

/// Integrates from w0 at t_start to t_end. Columns: t, sup, l2, mass, m1_0.., tail.
RunRecord integrate(const Field& w0, const Equation& eq, const IntegratorConfig& config);

}  // namespace chasym
