#pragma once

// Pseudo-spectral evaluation of polynomial nonlinearities on a periodic grid.
// Spectral arrays are the unnormalized r2c half spectrum of FFTW:
//   w_hat = sum_j w_j e^{-i k.x_j},   w_j = N^{-d} sum_k w_hat e^{i k.x_j}.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chasym/fft.hpp"
#include "chasym/grid.hpp"
#include "chasym/relevance.hpp"

namespace chasym {

/// coefficient * Lap(w^power)
struct ConservativeTerm {
  double coefficient = 1.0;
  int power = 2;
};

struct NonlinearModel {
  std::vector<ConservativeTerm> conservative;
  std::vector<NonlinearTerm> monomials;

  /// sqrt(3) Lap(w^2) + Lap(w^3)
  static NonlinearModel cahn_hilliard();
  bool empty() const { return conservative.empty() && monomials.empty(); }
  std::size_t term_count() const { return conservative.size() + monomials.size(); }

  /// Monomial expansion, for classification. Lap(w^m) expands into
  /// m w^{m-1} d_i^2 w + m(m-1) w^{m-2} (d_i w)^2 summed over axes.
  PDESpec as_spec(int n, int d) const;

  /// Growth exponent e of each term's coefficient exp(e tau) in `frame`
  /// (conservative terms first, then monomials).
  std::vector<double> scaled_exponents(const ScalingFrame& frame) const;
};

/// u_t = (-1)^{n+1} Lap^n u + F(u)
struct Equation {
  int n = 2;
  NonlinearModel nonlinearity;
};

enum class Dealias { None, TwoThirds, Half };
std::string to_string(Dealias d);
Dealias parse_dealias(const std::string& s);

class PseudoSpectral {
 public:
  PseudoSpectral(const Grid& grid, Dealias dealias);

  const Grid& grid() const { return grid_; }
  std::size_t spectral_size() const { return grid_.spectral_size(); }

  /// |k|^2 per half-spectrum mode.
  std::span<const double> k2() const { return k2_; }
  /// Wave vector component along `axis` per half-spectrum mode.
  std::span<const double> k_axis(int axis) const { return kaxis_[static_cast<size_t>(axis)]; }
  std::span<const double> mask() const { return mask_; }
  /// Wave index magnitude (max over axes) per mode; N/2 marks a Nyquist mode.
  std::span<const int> band() const { return band_; }

  /// -|k|^{2n} + shift
  std::vector<double> linear_symbol(int n, double shift = 0.0) const;
  /// Weights c_k with max_x |w(x)| <= sum_k c_k |w_hat_k|.
  std::vector<double> sup_weights() const;

  void forward(std::span<const double> real, std::span<Complex> spec);
  /// Normalized inverse; `spec` is left untouched.
  void inverse(std::span<const Complex> spec, std::span<double> real);
  /// Real-space d w / d x_axis (Nyquist mode dropped).
  void gradient(std::span<const Complex> spec, int axis, std::span<double> out);

  /// out = sum_t multipliers[t] * F_t(w) in half-spectrum form, dealiased.
  /// Throws NumericalFailure on non-finite values or |w| above `blowup`.
  void nonlinear(const NonlinearModel& model, std::span<const double> multipliers, std::span<const Complex> w_hat,
                 std::span<Complex> out, double blowup = 1e3);

  /// Spectral mass fraction sum |w_hat|^2 over modes beyond N/4 on some axis.
  double tail_fraction(std::span<const Complex> w_hat) const;

 private:
  Grid grid_;
  Dealias dealias_;
  RealFft fft_;
  std::vector<double> k2_;
  std::vector<std::vector<double>> kaxis_;
  std::vector<double> mask_;
  std::vector<int> band_;
  std::vector<double> work_;
  std::vector<double> acc_;
  std::vector<Complex> spec_work_;
};

}  // namespace chasym
