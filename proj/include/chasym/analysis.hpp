#pragma once

#include <string>
#include <vector>

#include "chasym/grid.hpp"
#include "chasym/record.hpp"
#include "chasym/relevance.hpp"

namespace chasym {

struct FitResult {
  std::string method;
  double exponent = 0.0;
  double amplitude = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  double residual = 0.0;
  int samples = 0;
  bool saturated = false;  // remainder below the noise floor
  bool monotone = true;    // data decreasing over the window
  std::vector<double> times;
  std::vector<double> values;
};

/// Least-squares slope of log ||w|| against log t over rows with t in [t_min, t_max].
/// `norm` is "sup" or "l2". Needs 10 samples; all-zero data is a ValidationError.
FitResult decay_exponent(const RunRecord& record, const std::string& norm, double t_min, double t_max);

/// Band-limited (trigonometric) interpolation of w at stretch * x_target for every
/// node of `target`. ValidationError if a point falls outside the source box.
Field resample(const Field& w, const Grid& target, double stretch);

/// t^beta w(xi t^{1/(2n)}) on the xi-grid.
Field scaled_profile(const Field& w, double t, const ScalingFrame& frame, const Grid& xi_grid);

/// B = <profile, reference> / <reference, reference>; residual is the sup of the
/// misfit relative to sup |profile|.
FitResult amplitude_fit(const Field& profile, const Field& reference);

/// Slope of log ||w(t) - B t^{-beta} ref(x / t^{1/(2n)})||_inf against log t over the
/// snapshots in [t_min, t_max]. Points below `noise_floor` times the predicted sup
/// are dropped; with fewer than 3 left the fit is reported as saturated.
FitResult remainder_rate(const RunRecord& record, const Field& reference, double amplitude, const ScalingFrame& frame,
                         double t_min, double t_max, double noise_floor = 1e-11);

struct Moment {
  std::vector<double> value;      // one entry for order 0, d entries for order 1
  bool tail_contaminated = false; // |w| on the faces above 1e-8 of the peak
};

/// Trapezoid moments int w and int x_j w.
Moment moment(const Field& w, int order);

}  // namespace chasym
