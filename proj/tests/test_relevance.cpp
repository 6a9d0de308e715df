#include <doctest.h>

#include <random>

#include "chasym/nonlinear.hpp"
#include "chasym/relevance.hpp"

using namespace chasym;

namespace {

NonlinearTerm term(double c, std::vector<std::pair<std::vector<int>, int>> factors) {
  NonlinearTerm t;
  t.coefficient = c;
  for (auto& [a, k] : factors) t.factors.push_back({MultiIndex(a), k});
  return t;
}

// Independent evaluation of the scaling exponent.
long long exponent(const NonlinearTerm& t, int n, int d) {
  long long p = -(2 * n + d);
  for (const auto& f : t.factors) {
    long long order = 0;
    for (int v : f.alpha.orders()) order += v;
    p += (order + d) * f.power;
  }
  return p;
}

}  // namespace

TEST_SUITE("relevance") {
  TEST_CASE("Cahn-Hilliard golden labels") {
    // Lap(w^2): p = d - 2, Lap(w^3): p = 2d - 2
    const Relevance quad[] = {Relevance::Relevant, Relevance::Critical, Relevance::Irrelevant};
    const Relevance cube[] = {Relevance::Critical, Relevance::Irrelevant, Relevance::Irrelevant};
    for (int d = 1; d <= 3; ++d) {
      const auto spec = cahn_hilliard_spec(d);
      for (const auto& t : spec.nonlinearity) {
        const auto c = classify_term(t, 2, d);
        CHECK(c.p == exponent(t, 2, d));
        CHECK(c.label == (t.total_power() == 2 ? quad[d - 1] : cube[d - 1]));
      }
      CHECK(classify_pde(spec).aggregate == quad[d - 1]);
      CHECK(is_cahn_hilliard(spec));
    }
  }

  TEST_CASE("expanded conservative form matches the monomial spec") {
    for (int d = 1; d <= 3; ++d) {
      const auto a = NonlinearModel::cahn_hilliard().as_spec(2, d);
      CHECK(is_cahn_hilliard(a));
      CHECK(classify_pde(a).aggregate == classify_pde(cahn_hilliard_spec(d)).aggregate);
    }
  }

  TEST_CASE("exponent is integer arithmetic on random terms") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> power(1, 4), dim(1, 3), nn(1, 3);
    for (int trial = 0; trial < 500; ++trial) {
      const int d = dim(rng);
      const int n = nn(rng);
      NonlinearTerm t;
      t.coefficient = trial % 2 ? -1.5 : 1e6;
      // distinct multi-indices: order f along the first axis
      const int nf = 1 + trial % (2 * n - 1);
      for (int f = 0; f < nf; ++f) t.factors.push_back({MultiIndex::along(d, 0, f), power(rng)});
      if (t.total_power() < 2) t.factors[0].power = 2;
      const auto c = classify_term(t, n, d);
      CHECK(c.p == exponent(t, n, d));
      CHECK(c.K == t.total_power());
      if (nf < 2 * n - 1) {
        // one more derivative on a factor of power k raises p by k
        NonlinearTerm u = t;
        u.factors.back().alpha = MultiIndex::along(d, 0, nf);
        CHECK(classify_term(u, n, d).p == c.p + u.factors.back().power);
      }
    }
  }

  TEST_CASE("coefficient does not enter") {
    auto a = term(1.0, {{{0}, 1}, {{2}, 1}});
    auto b = term(-37.0, {{{0}, 1}, {{2}, 1}});
    CHECK(classify_term(a, 2, 1).p == classify_term(b, 2, 1).p);
    CHECK(classify_term(a, 2, 1).p == -1);
  }

  TEST_CASE("aggregate precedence") {
    PDESpec s{2, 2, {term(1.0, {{{0, 0}, 3}}), term(1.0, {{{0, 0}, 1}, {{2, 0}, 1}})}};
    CHECK(classify_pde(s).aggregate == Relevance::Critical);
    s.nonlinearity.push_back(term(1.0, {{{0, 0}, 2}}));
    CHECK(classify_pde(s).aggregate == Relevance::Relevant);
    PDESpec empty{2, 3, {}};
    CHECK(classify_pde(empty).aggregate == Relevance::Irrelevant);
  }

  TEST_CASE("predicted rates") {
    for (int d = 2; d <= 3; ++d) {
      auto r = predicted_rates(cahn_hilliard_spec(d));
      REQUIRE(r);
      CHECK(r->decay_exponent == Rational(d, 4));
      CHECK(r->remainder_exponent == Rational(d + 1, 4));
      CHECK(r->frame.beta == Rational(d, 4));
    }
    auto r1 = predicted_rates(cahn_hilliard_spec(1));
    REQUIRE(r1);
    CHECK(r1->decay_exponent == Rational(1, 2));
    CHECK(r1->remainder_exponent == Rational(3, 4));
    CHECK(r1->frame.beta == Rational(1, 2));

    PDESpec other{2, 1, {term(1.0, {{{0}, 2}})}};  // u^2: relevant, not Cahn-Hilliard
    CHECK_FALSE(predicted_rates(other).has_value());
    PDESpec heat{1, 2, {}};
    auto rh = predicted_rates(heat);
    REQUIRE(rh);
    CHECK(rh->decay_exponent == Rational(1));
  }

  TEST_CASE("invalid input") {
    CHECK_THROWS_AS(MultiIndex({-1}), ValidationError);
    PDESpec bad{0, 1, {}};
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    CHECK_THROWS_AS(validate_term(term(1.0, {{{0, 0}, 2}}), 2, 1), ValidationError);
    CHECK_THROWS_AS(validate_term(term(1.0, {{{0}, 0}}), 2, 1), ValidationError);
  }
}
