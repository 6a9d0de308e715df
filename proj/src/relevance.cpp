#include "chasym/relevance.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace chasym {

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

MultiIndex::MultiIndex(std::vector<int> orders) : orders_(std::move(orders)) {
  for (int o : orders_) {
    if (o < 0) throw ValidationError("multi-index entries must be non-negative");
  }
}

MultiIndex MultiIndex::along(int dim, int axis, int order) {
  if (axis < 0 || axis >= dim) throw ValidationError("multi-index axis out of range");
  std::vector<int> o(static_cast<size_t>(dim), 0);
  o[static_cast<size_t>(axis)] = order;
  return MultiIndex(std::move(o));
}

int MultiIndex::total() const {
  int s = 0;
  for (int o : orders_) s += o;
  return s;
}

int NonlinearTerm::total_power() const {
  int k = 0;
  for (const auto& f : factors) k += f.power;
  return k;
}

int NonlinearTerm::total_derivatives() const {
  int s = 0;
  for (const auto& f : factors) s += f.alpha.total() * f.power;
  return s;
}

std::string to_string(Relevance r) {
  switch (r) {
    case Relevance::Relevant: return "Relevant";
    case Relevance::Critical: return "Critical";
    case Relevance::Irrelevant: return "Irrelevant";
  }
  return "?";
}

void validate_term(const NonlinearTerm& term, int n, int d) {
  if (n < 1) throw ValidationError("n must be positive");
  if (d < 1) throw ValidationError("d must be positive");
  if (term.factors.empty()) throw ValidationError("nonlinear term has no factors");
  std::set<MultiIndex> seen;
  for (const auto& f : term.factors) {
    if (f.power < 1) throw ValidationError("factor powers must be >= 1");
    if (f.alpha.dim() != d) {
      throw ValidationError("multi-index length " + std::to_string(f.alpha.dim()) +
                            " does not match dimension " + std::to_string(d));
    }
    if (f.alpha.total() > 2 * n - 1) {
      throw ValidationError("derivative order |alpha| = " + std::to_string(f.alpha.total()) +
                            " exceeds 2n-1 = " + std::to_string(2 * n - 1));
    }
    if (!seen.insert(f.alpha).second) {
      throw ValidationError("multi-indices within a term must be distinct");
    }
  }
}

void PDESpec::validate() const {
  if (n < 1) throw ValidationError("n must be positive");
  if (d < 1) throw ValidationError("d must be positive");
  for (const auto& t : nonlinearity) validate_term(t, n, d);
}

Classification classify_term(const NonlinearTerm& term, int n, int d) {
  validate_term(term, n, d);
  Classification c;
  std::int64_t weight = 0;
  for (const auto& f : term.factors) {
    weight += static_cast<std::int64_t>(f.alpha.total() + d) * f.power;
  }
  c.p = weight - (2 * n + d);
  c.K = term.total_power();
  c.label = c.p > 0 ? Relevance::Irrelevant : (c.p == 0 ? Relevance::Critical : Relevance::Relevant);
  return c;
}

PDEReport classify_pde(const PDESpec& spec) {
  spec.validate();
  PDEReport report;
  bool any_relevant = false;
  bool any_critical = false;
  for (const auto& t : spec.nonlinearity) {
    auto c = classify_term(t, spec.n, spec.d);
    any_relevant |= c.label == Relevance::Relevant;
    any_critical |= c.label == Relevance::Critical;
    report.terms.push_back(c);
  }
  report.aggregate = any_relevant ? Relevance::Relevant
                                  : (any_critical ? Relevance::Critical : Relevance::Irrelevant);
  return report;
}

std::optional<PredictedRates> predicted_rates(const PDESpec& spec) {
  auto report = classify_pde(spec);
  if (report.aggregate != Relevance::Relevant) {
    Rational decay(spec.d, 2 * spec.n);
    Rational remainder(spec.d + 1, 2 * spec.n);
    return PredictedRates{decay, remainder, ScalingFrame::diffusive(spec.n, spec.d)};
  }
  if (spec.n == 2 && spec.d == 1 && is_cahn_hilliard(spec)) {
    return PredictedRates{Rational(1, 2), Rational(3, 4), ScalingFrame{2, 1, Rational(1, 2)}};
  }
  return std::nullopt;
}

PDESpec cahn_hilliard_spec(int d) {
  if (d < 1) throw ValidationError("d must be positive");
  PDESpec spec;
  spec.n = 2;
  spec.d = d;
  const double s3 = std::sqrt(3.0);
  const auto w = MultiIndex::zero(d);
  for (int i = 0; i < d; ++i) {
    const auto dii = MultiIndex::along(d, i, 2);
    const auto di = MultiIndex::along(d, i, 1);
    // sqrt(3) Lap(w^2) = sum_i 2 sqrt(3) (w d_ii w + (d_i w)^2)
    spec.nonlinearity.push_back({2.0 * s3, {{w, 1}, {dii, 1}}});
    spec.nonlinearity.push_back({2.0 * s3, {{di, 2}}});
    // Lap(w^3) = sum_i 3 w^2 d_ii w + 6 w (d_i w)^2
    spec.nonlinearity.push_back({3.0, {{w, 2}, {dii, 1}}});
    spec.nonlinearity.push_back({6.0, {{w, 1}, {di, 2}}});
  }
  return spec;
}

namespace {

// Shape of a term with coefficient dropped and factors sorted.
std::vector<std::pair<MultiIndex, int>> shape_of(const NonlinearTerm& t) {
  std::vector<std::pair<MultiIndex, int>> s;
  for (const auto& f : t.factors) s.emplace_back(f.alpha, f.power);
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

bool is_cahn_hilliard(const PDESpec& spec) {
  if (spec.n != 2 || spec.nonlinearity.empty()) return false;
  const auto reference = cahn_hilliard_spec(spec.d);
  std::set<std::vector<std::pair<MultiIndex, int>>> allowed;
  for (const auto& t : reference.nonlinearity) allowed.insert(shape_of(t));
  return std::all_of(spec.nonlinearity.begin(), spec.nonlinearity.end(),
                     [&](const NonlinearTerm& t) { return allowed.count(shape_of(t)) > 0; });
}

}  // namespace chasym
