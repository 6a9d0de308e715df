#pragma once

// The equation in scaling variables xi = x / t^{1/(2n)}, tau = log t,
// u = t^{-beta} v(xi, tau):
//   v_tau = (-1)^{n+1} Lap^n v + (1/2n) xi.grad v + beta v + sum_t e^{e_t tau} F_t(v)
// with t = 1 mapped to tau = 0.

#include <cmath>
#include <vector>

#include "chasym/integrator.hpp"
#include "chasym/nonlinear.hpp"
#include "chasym/record.hpp"
#include "chasym/relevance.hpp"

namespace chasym {

struct ScaledState {
  ScalingFrame frame;
  double tau = 0.0;
  Field v;

  double eta() const { return std::exp(-tau / (2.0 * frame.n)); }
  /// e^{-tau/8}, the slow variable of the beta = 1/2 frame.
  double eta_tilde() const { return std::exp(-tau / 8.0); }
};

struct Projections {
  double y0 = 0.0;
  std::vector<double> y1;
  double yperp = 0.0;
};

/// y0 = (2 pi)^{-d/2} int v, y1_j = int xi_j v, yperp = ||v - y0 f* - sum_j y1_j F1_j||_2.
/// Throws NumericalFailure if |v| on the box faces exceeds 1e-8 of its sup.
Projections project(const ScaledState& state, double edge_tol = 1e-8);

/// Right-hand side in real space (for testing and single evaluations).
Field scaled_rhs(const ScaledState& state, const Equation& eq, Dealias dealias = Dealias::TwoThirds);

struct ScaledConfig {
  double tau_end = 6.0;
  StepControl step;
  Dealias dealias = Dealias::TwoThirds;
  std::vector<double> record_times;
  std::vector<double> snapshot_times;
  double edge_tol = 1e-8;
  double blowup = 1e3;

  void validate() const;
};

/// Columns: tau, eta, eta_tilde, y0, y1_0.., yperp, sup.
RunRecord integrate_scaled(const ScaledState& state0, const Equation& eq, const ScaledConfig& config);

struct ReducedTrajectory {
  std::vector<double> tau;
  std::vector<double> y0;
  std::vector<std::vector<double>> y1;
  std::vector<double> eta;  // eta for beta = d/2n, eta_tilde for the beta = 1/2 frame
};

/// Closed-form reduced dynamics: beta = d/(2n) gives y0 constant,
/// y1 = y1(0) e^{-tau/(2n)}, eta = eta(0) e^{-tau/(2n)}; the (n, d, beta) =
/// (2, 1, 1/2) frame gives y0 = e^{tau/4} y0(0), y1 constant, eta_tilde = e^{-tau/8} eta_tilde(0).
/// Other frames are a ValidationError.
ReducedTrajectory reduced_ode_solution(double y0, const std::vector<double>& y1, double eta, const ScalingFrame& frame,
                                       const std::vector<double>& taus);

}  // namespace chasym
