#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "chasym/errors.hpp"

namespace chasym {

using Rational = boost::rational<std::int64_t>;

std::string to_string(const Rational& r);
double to_double(const Rational& r);

/// Non-negative derivative orders, one per coordinate axis.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> orders);

  /// Derivative of total order `order` along a single axis of a `dim`-dimensional space.
  static MultiIndex along(int dim, int axis, int order);
  static MultiIndex zero(int dim) { return MultiIndex(std::vector<int>(static_cast<size_t>(dim), 0)); }

  int dim() const { return static_cast<int>(orders_.size()); }
  int total() const;
  int operator[](int axis) const { return orders_[static_cast<size_t>(axis)]; }
  const std::vector<int>& orders() const { return orders_; }

  bool operator==(const MultiIndex&) const = default;
  auto operator<=>(const MultiIndex&) const = default;

 private:
  std::vector<int> orders_;
};

struct Factor {
  MultiIndex alpha;
  int power = 1;
};

/// coefficient * prod_j (d^{alpha_j} u)^{k_j}
struct NonlinearTerm {
  double coefficient = 1.0;
  std::vector<Factor> factors;

  int total_power() const;
  int total_derivatives() const;  // sum_j |alpha_j| k_j
};

struct PDESpec {
  int n = 2;  // linear part (-1)^{n+1} Laplacian^n
  int d = 1;
  std::vector<NonlinearTerm> nonlinearity;

  void validate() const;
};

enum class Relevance { Relevant, Critical, Irrelevant };
std::string to_string(Relevance r);

struct Classification {
  Relevance label = Relevance::Irrelevant;
  std::int64_t p = 0;  // scaling exponent: sum_j (|alpha_j| + d) k_j - (2n + d)
  int K = 0;           // sum_j k_j
};

void validate_term(const NonlinearTerm& term, int n, int d);

/// Pure integer arithmetic; the coefficient does not enter.
Classification classify_term(const NonlinearTerm& term, int n, int d);

struct PDEReport {
  std::vector<Classification> terms;
  Relevance aggregate = Relevance::Irrelevant;
};

/// Aggregate precedence: Relevant > Critical > Irrelevant.
PDEReport classify_pde(const PDESpec& spec);

/// (n, d, beta): amplitude of the similarity ansatz u = t^{-beta} v(x / t^{1/(2n)}, log t).
struct ScalingFrame {
  int n = 2;
  int d = 1;
  Rational beta{1, 4};

  static ScalingFrame diffusive(int n, int d) { return {n, d, Rational(d, 2 * n)}; }
  bool operator==(const ScalingFrame&) const = default;
};

struct PredictedRates {
  Rational decay_exponent;
  Rational remainder_exponent;
  ScalingFrame frame;
};

/// std::nullopt when a relevant term is present outside the one worked-out case
/// (Cahn-Hilliard, n = 2, d = 1, where the frame beta = 1/2 is used).
std::optional<PredictedRates> predicted_rates(const PDESpec& spec);

/// Monomial expansion of sqrt(3) Lap(w^2) + Lap(w^3) in dimension d.
PDESpec cahn_hilliard_spec(int d);

/// True if `spec` is (up to term order) the Cahn-Hilliard nonlinearity with n = 2.
bool is_cahn_hilliard(const PDESpec& spec);

}  // namespace chasym
