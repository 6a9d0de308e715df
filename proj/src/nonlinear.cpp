#include "chasym/nonlinear.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "chasym/kernels.hpp"

namespace chasym {

NonlinearModel NonlinearModel::cahn_hilliard() {
  NonlinearModel m;
  m.conservative = {{std::sqrt(3.0), 2}, {1.0, 3}};
  return m;
}

PDESpec NonlinearModel::as_spec(int n, int d) const {
  PDESpec spec{n, d, monomials};
  for (const auto& c : conservative) {
    const int m = c.power;
    for (int i = 0; i < d; ++i) {
      NonlinearTerm a{c.coefficient * m, {}};
      if (m > 1) a.factors.push_back({MultiIndex::zero(d), m - 1});
      a.factors.push_back({MultiIndex::along(d, i, 2), 1});
      spec.nonlinearity.push_back(a);
      if (m > 1) {
        NonlinearTerm b{c.coefficient * m * (m - 1), {}};
        if (m > 2) b.factors.push_back({MultiIndex::zero(d), m - 2});
        b.factors.push_back({MultiIndex::along(d, i, 1), 2});
        spec.nonlinearity.push_back(b);
      }
    }
  }
  return spec;
}

std::vector<double> NonlinearModel::scaled_exponents(const ScalingFrame& frame) const {
  const double beta = to_double(frame.beta);
  const double n = frame.n;
  std::vector<double> e;
  for (const auto& c : conservative) e.push_back(1.0 - 1.0 / n + beta * (1 - c.power));
  for (const auto& t : monomials) {
    e.push_back(1.0 + beta * (1 - t.total_power()) - t.total_derivatives() / (2.0 * n));
  }
  return e;
}

std::string to_string(Dealias d) {
  switch (d) {
    case Dealias::None: return "none";
    case Dealias::TwoThirds: return "2/3";
    case Dealias::Half: return "1/2";
  }
  return "?";
}

Dealias parse_dealias(const std::string& s) {
  if (s == "none") return Dealias::None;
  if (s == "2/3") return Dealias::TwoThirds;
  if (s == "1/2") return Dealias::Half;
  throw ValidationError("dealias must be one of none, 2/3, 1/2 (got '" + s + "')");
}

PseudoSpectral::PseudoSpectral(const Grid& grid, Dealias dealias)
    : grid_(grid), dealias_(dealias), fft_(grid), kaxis_(static_cast<size_t>(grid.dim)) {
  const std::size_t ns = grid.spectral_size();
  const int half = grid.n / 2 + 1;
  k2_.assign(ns, 0.0);
  mask_.assign(ns, 1.0);
  band_.assign(ns, 0);
  for (auto& k : kaxis_) k.assign(ns, 0.0);
  const double dk = 2.0 * std::numbers::pi / grid.length;
  for (std::size_t o = 0; o < ns; ++o) {
    std::size_t rest = o;
    const int j_last = static_cast<int>(rest % static_cast<std::size_t>(half));
    rest /= static_cast<std::size_t>(half);
    for (int a = grid.dim - 1; a >= 0; --a) {
      int m;
      if (a == grid.dim - 1) {
        m = j_last;
      } else {
        m = grid.wave_index(static_cast<int>(rest % static_cast<std::size_t>(grid.n)));
        rest /= static_cast<std::size_t>(grid.n);
      }
      const double k = dk * m;
      kaxis_[static_cast<size_t>(a)][o] = k;
      k2_[o] += k * k;
      band_[o] = std::max(band_[o], std::abs(m));
      const bool keep = dealias == Dealias::TwoThirds ? 3 * std::abs(m) < grid.n
                        : dealias == Dealias::Half    ? 4 * std::abs(m) < grid.n
                                                      : true;
      if (!keep) mask_[o] = 0.0;
    }
  }
  work_.assign(grid.size(), 0.0);
  acc_.assign(grid.size(), 0.0);
  spec_work_.assign(ns, Complex{});
}

std::vector<double> PseudoSpectral::linear_symbol(int n, double shift) const {
  std::vector<double> s(k2_.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = -std::pow(k2_[i], n) + shift;
  return s;
}

std::vector<double> PseudoSpectral::sup_weights() const {
  std::vector<double> w(k2_.size());
  const int half = grid_.n / 2 + 1;
  const double inv = 1.0 / static_cast<double>(grid_.size());
  for (std::size_t o = 0; o < w.size(); ++o) {
    const int j = static_cast<int>(o % static_cast<std::size_t>(half));
    w[o] = (j == 0 || j == grid_.n / 2) ? inv : 2.0 * inv;
  }
  return w;
}

void PseudoSpectral::forward(std::span<const double> real, std::span<Complex> spec) {
  auto r = fft_.real();
  std::copy(real.begin(), real.end(), r.begin());
  fft_.forward();
  auto s = fft_.spectral();
  std::copy(s.begin(), s.end(), spec.begin());
}

void PseudoSpectral::inverse(std::span<const Complex> spec, std::span<double> real) {
  auto s = fft_.spectral();
  std::copy(spec.begin(), spec.end(), s.begin());
  fft_.backward();
  const double inv = 1.0 / static_cast<double>(grid_.size());
  auto r = fft_.real();
  for (std::size_t i = 0; i < real.size(); ++i) real[i] = r[i] * inv;
}

void PseudoSpectral::gradient(std::span<const Complex> spec, int axis, std::span<double> out) {
  const auto& k = kaxis_[static_cast<size_t>(axis)];
  for (std::size_t o = 0; o < spec_work_.size(); ++o) {
    const bool nyquist = std::abs(k[o]) * grid_.length / (2.0 * std::numbers::pi) >= grid_.n / 2;
    spec_work_[o] = nyquist ? Complex{} : Complex(0.0, k[o]) * spec[o];
  }
  inverse(spec_work_, out);
}

void PseudoSpectral::nonlinear(const NonlinearModel& model, std::span<const double> multipliers,
                               std::span<const Complex> w_hat, std::span<Complex> out, double blowup) {
  std::fill(out.begin(), out.end(), Complex{});
  const std::size_t ns = spectral_size();
  std::vector<Complex> masked(w_hat.begin(), w_hat.end());
  kernels::scale(masked, mask_);
  std::vector<double> w(grid_.size());
  inverse(masked, w);
  const double total = kernels::sum(w);
  const double sup = kernels::max_abs(w);
  if (!std::isfinite(total) || !std::isfinite(sup) || sup > blowup) {
    throw NumericalFailure("blow-up: sup |w| = " + std::to_string(sup) + " (threshold " + std::to_string(blowup) + ")");
  }

  if (!model.conservative.empty()) {
    int top = 0;
    for (const auto& c : model.conservative) top = std::max(top, c.power);
    std::vector<double> coeffs(static_cast<size_t>(top + 1), 0.0);
    for (std::size_t t = 0; t < model.conservative.size(); ++t) {
      coeffs[static_cast<size_t>(model.conservative[t].power)] += model.conservative[t].coefficient * multipliers[t];
    }
    kernels::polynomial(w, coeffs, acc_);
    forward(acc_, spec_work_);
    for (std::size_t o = 0; o < ns; ++o) out[o] = -k2_[o] * mask_[o] * spec_work_[o];
  }

  if (!model.monomials.empty()) {
    std::map<MultiIndex, std::vector<double>> derivs;
    for (const auto& term : model.monomials) {
      for (const auto& f : term.factors) {
        if (derivs.count(f.alpha)) continue;
        if (f.alpha.total() == 0) {
          derivs[f.alpha] = w;
          continue;
        }
        std::vector<Complex> d(ns);
        for (std::size_t o = 0; o < ns; ++o) {
          Complex factor = 1.0;
          bool nyquist = false;
          for (int a = 0; a < grid_.dim; ++a) {
            const double k = kaxis_[static_cast<size_t>(a)][o];
            if (f.alpha[a] % 2 == 1 && std::abs(k) * grid_.length / (2.0 * std::numbers::pi) >= grid_.n / 2) nyquist = true;
            factor *= std::pow(Complex(0.0, k), f.alpha[a]);
          }
          d[o] = nyquist ? Complex{} : factor * masked[o];
        }
        std::vector<double> r(grid_.size());
        inverse(d, r);
        derivs[f.alpha] = std::move(r);
      }
    }
    std::fill(acc_.begin(), acc_.end(), 0.0);
    for (std::size_t t = 0; t < model.monomials.size(); ++t) {
      const auto& term = model.monomials[t];
      std::fill(work_.begin(), work_.end(), term.coefficient * multipliers[model.conservative.size() + t]);
      for (const auto& f : term.factors) {
        const auto& d = derivs[f.alpha];
        for (int k = 0; k < f.power; ++k) kernels::multiply(work_, d);
      }
      for (std::size_t i = 0; i < acc_.size(); ++i) acc_[i] += work_[i];
    }
    forward(acc_, spec_work_);
    for (std::size_t o = 0; o < ns; ++o) out[o] += mask_[o] * spec_work_[o];
  }
}

double PseudoSpectral::tail_fraction(std::span<const Complex> w_hat) const {
  const int half = grid_.n / 2 + 1;
  double all = 0.0;
  double tail = 0.0;
  for (std::size_t o = 0; o < w_hat.size(); ++o) {
    const int j = static_cast<int>(o % static_cast<std::size_t>(half));
    const double mult = (j == 0 || j == grid_.n / 2) ? 1.0 : 2.0;
    const double e = mult * std::norm(w_hat[o]);
    all += e;
    if (4 * band_[o] > grid_.n) tail += e;
  }
  return all > 0.0 ? tail / all : 0.0;
}

}  // namespace chasym
