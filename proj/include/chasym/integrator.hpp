#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace chasym {

using Complex = std::complex<double>;

struct StepControl {
  double dt = 1e-3;        // initial (or fixed) step
  double dt_min = 1e-12;
  double dt_max = 1e300;
  double tol = 1e-9;       // error per unit time, relative to the sup-norm scale
  double safety = 0.9;
  bool adaptive = true;
};

/// Integrating-factor RK4 for w_t = diag(L) w + N(t, w) on a diagonal spectral
/// representation. The linear part is propagated exactly with e^{L h}; only
/// factors with h >= 0 are formed, so stiff negative symbols never overflow.
class IfRk4 {
 public:
  using Rhs = std::function<void(double t, std::span<const Complex> w, std::span<Complex> out)>;

  IfRk4(std::vector<double> symbol, std::vector<double> sup_weights, Rhs rhs, StepControl control);

  /// Advances (t, w) to exactly t_target. Throws NumericalFailure when the step
  /// size would drop below dt_min.
  void advance(double& t, std::vector<Complex>& w, double t_target);
  /// The caller changed w outside advance(); drop the cached first stage.
  void invalidate() { have_n1_ = false; }

  double dt() const { return dt_; }
  long accepted() const { return accepted_; }
  long rejected() const { return rejected_; }
  long evaluations() const { return evaluations_; }

 private:
  void factors(double h);
  /// One trial step of size h; returns the normalized error ratio.
  double trial(double t, std::span<const Complex> w, double h);

  std::vector<double> symbol_;
  std::vector<double> weights_;
  Rhs rhs_;
  StepControl control_;
  double dt_;
  double factor_h_ = -1.0;
  double prev_ratio_ = 1.0;
  bool have_n1_ = false;
  long accepted_ = 0;
  long rejected_ = 0;
  long evaluations_ = 0;
  std::vector<double> e_, e2_;
  std::vector<Complex> n1_, n2_, n3_, n4_, n5_, stage_, next_;
};

}  // namespace chasym
