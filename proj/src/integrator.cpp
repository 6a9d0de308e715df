#include "chasym/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "chasym/errors.hpp"
#include "chasym/kernels.hpp"

namespace chasym {

IfRk4::IfRk4(std::vector<double> symbol, std::vector<double> sup_weights, Rhs rhs, StepControl control)
    : symbol_(std::move(symbol)), weights_(std::move(sup_weights)), rhs_(std::move(rhs)), control_(control),
      dt_(control.dt) {
  if (!(control_.dt > 0.0)) throw ValidationError("time step must be positive");
  if (!(control_.tol > 0.0)) throw ValidationError("error tolerance must be positive");
  if (weights_.size() != symbol_.size()) throw ValidationError("weights and symbol differ in size");
  for (double s : symbol_) {
    if (!std::isfinite(s)) throw ValidationError("linear symbol must be finite");
  }
  const std::size_t n = symbol_.size();
  e_.resize(n);
  e2_.resize(n);
  for (auto* v : {&n1_, &n2_, &n3_, &n4_, &n5_, &stage_, &next_}) v->assign(n, Complex{});
}

void IfRk4::factors(double h) {
  if (h == factor_h_) return;
  for (std::size_t i = 0; i < symbol_.size(); ++i) {
    e_[i] = std::exp(0.5 * h * symbol_[i]);
    e2_[i] = e_[i] * e_[i];
  }
  factor_h_ = h;
}

double IfRk4::trial(double t, std::span<const Complex> w, double h) {
  factors(h);
  if (!have_n1_) {
    rhs_(t, w, n1_);
    ++evaluations_;
    have_n1_ = true;
  }
  kernels::if_stage(w, e_, n1_, e_, 0.5 * h, stage_);
  rhs_(t + 0.5 * h, stage_, n2_);
  kernels::if_stage(w, e_, n2_, {}, 0.5 * h, stage_);
  rhs_(t + 0.5 * h, stage_, n3_);
  kernels::if_stage(w, e2_, n3_, e_, h, stage_);
  rhs_(t + h, stage_, n4_);
  kernels::rk4_combine(w, n1_, n2_, n3_, n4_, e_, e2_, h, next_);
  rhs_(t + h, next_, n5_);
  evaluations_ += 4;

  const double err = kernels::rk4_error_l1(n4_, n5_, h, weights_);
  double scale = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) scale += weights_[i] * std::max(std::abs(w[i]), std::abs(next_[i]));
  if (err == 0.0) return 0.0;
  if (!(scale > 0.0)) return std::numeric_limits<double>::infinity();
  return err / (control_.tol * h * scale);
}

void IfRk4::advance(double& t, std::vector<Complex>& w, double t_target) {
  while (t < t_target) {
    const double remaining = t_target - t;
    const double want = control_.adaptive ? dt_ : control_.dt;
    // Stretch slightly rather than leave a sliver step before the target.
    const bool last = want >= remaining * (1.0 - 1e-9);
    const double h = last ? remaining : want;
    const double ratio = trial(t, w, h);
    if (!control_.adaptive || ratio <= 1.0) {
      std::swap(w, next_);
      std::swap(n1_, n5_);
      t = last ? t_target : t + h;
      ++accepted_;
      if (control_.adaptive) {
        const double r = std::max(ratio, 1e-10);
        double fac = control_.safety * std::pow(r, -0.7 / 4.0) * std::pow(prev_ratio_, 0.4 / 4.0);
        fac = std::clamp(fac, 0.2, 5.0);
        const double proposal = std::min(h * fac, control_.dt_max);
        dt_ = last ? std::max(dt_, proposal) : proposal;
        prev_ratio_ = r;
      }
    } else {
      ++rejected_;
      const double fac = std::isfinite(ratio) ? std::max(0.2, control_.safety * std::pow(ratio, -0.25)) : 0.2;
      dt_ = h * fac;
      if (dt_ < control_.dt_min) {
        throw NumericalFailure("step size underflow at t = " + fmt_num(t) + " (dt = " + fmt_num(dt_) +
                               " < dt_min = " + fmt_num(control_.dt_min) + ")");
      }
    }
  }
}

}  // namespace chasym
