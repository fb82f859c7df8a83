#include "qsteer/lhs_bound.hpp"

#include "qsteer/steering_eval.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

using namespace qsteer;
using namespace qsteer::testing;

TEST_CASE("bound values match the closed forms") {
  const std::pair<SetLabel, double> expected[] = {
      {SetLabel::square, 1.0 / std::sqrt(2.0)},
      {SetLabel::octahedron, 1.0 / std::sqrt(3.0)},
      {SetLabel::custom4, (1.0 + std::sqrt(13.0)) / 8.0},
      {SetLabel::custom5, (1.0 + 2.0 * std::sqrt(13.0)) / 15.0},
      {SetLabel::icosahedron, (1.0 + std::sqrt(5.0)) / 6.0},
      {SetLabel::dodecahedron, (3.0 + std::sqrt(5.0)) / 10.0},
      {SetLabel::cube4, 1.0 / std::sqrt(3.0)},
  };
  for (const auto& [label, value] : expected) {
    const SteeringBound bound = lhs_bound(make_set(label));
    CHECK(std::abs(bound.c_n - value) < 1e-12);
    CHECK(bound.c_prime_n == doctest::Approx((bound.c_n - 1.0) / 2.0).epsilon(1e-15));
  }
}

TEST_CASE("maximizer degeneracies have the expected multiplicities") {
  const std::pair<SetLabel, std::size_t> expected[] = {
      {SetLabel::square, 2},      {SetLabel::octahedron, 4},
      {SetLabel::custom4, 4},     {SetLabel::custom5, 5},
      {SetLabel::icosahedron, 6}, {SetLabel::dodecahedron, 10},
      {SetLabel::cube4, 3},
  };
  for (const auto& [label, count] : expected) {
    const MeasurementSet set = make_set(label);
    const SteeringBound bound = lhs_bound(set);
    REQUIRE(bound.maximizing_patterns.size() == count);
    REQUIRE(bound.saturating_states.size() == count);
    for (const auto& pattern : bound.maximizing_patterns) {
      REQUIRE(pattern.size() == static_cast<std::size_t>(set.n()));
      CHECK(pattern[0] == 1);  // canonical representative
      // Each stored pattern attains the maximum.
      Vec3 sum = Vec3::Zero();
      for (int k = 0; k < set.n(); ++k) sum += pattern[k] * set.directions[k];
      CHECK(sum.norm() / set.n() == doctest::Approx(bound.c_n).epsilon(1e-12));
    }
    // Patterns are sorted and unique.
    CHECK(std::is_sorted(bound.maximizing_patterns.begin(),
                         bound.maximizing_patterns.end()));
    CHECK(std::adjacent_find(bound.maximizing_patterns.begin(),
                             bound.maximizing_patterns.end()) ==
          bound.maximizing_patterns.end());
  }
}

TEST_CASE("cube4 keeps the octahedron value with a three-fold degeneracy") {
  const SteeringBound cube = lhs_bound(make_set(SetLabel::cube4));
  const SteeringBound oct = lhs_bound(make_set(SetLabel::octahedron));
  CHECK(cube.c_n == doctest::Approx(oct.c_n).epsilon(1e-15));
  // All-plus is among the cube maximizers: the main diagonal of signs.
  const std::vector<int> all_plus{1, 1, 1, 1};
  CHECK(std::find(cube.maximizing_patterns.begin(), cube.maximizing_patterns.end(),
                  all_plus) != cube.maximizing_patterns.end());
}

TEST_CASE("enumerated bound matches the recursive oracle on random sets") {
  auto rng = test_rng(31);
  std::uniform_int_distribution<int> size(2, 10);
  for (int trial = 0; trial < 100; ++trial) {
    const MeasurementSet set = random_user_set(rng, size(rng));
    CHECK(lhs_bound(set).c_n ==
          doctest::Approx(naive_c_n(set.directions)).epsilon(1e-12));
  }
}

TEST_CASE("bound decreases strictly along the growing named sets, towards 1/2") {
  const SetLabel order[] = {SetLabel::square,  SetLabel::octahedron,
                            SetLabel::custom4, SetLabel::custom5,
                            SetLabel::icosahedron, SetLabel::dodecahedron};
  double previous = 1.0;
  for (SetLabel label : order) {
    const double c = lhs_bound(make_set(label)).c_n;
    CHECK(c < previous);
    CHECK(c > 0.5);
    previous = c;
  }
  CHECK(lhs_bound(continuum_set()).c_n == 0.5);
  CHECK(lhs_bound(continuum_set()).c_prime_n == -0.25);
  CHECK(lhs_bound(continuum_set()).maximizing_patterns.empty());
}

TEST_CASE("bound rejects out-of-range inputs") {
  MeasurementSet empty;
  empty.label = SetLabel::user;
  CHECK_THROWS_AS(lhs_bound(empty), std::domain_error);

  auto rng = test_rng(32);
  const MeasurementSet big = random_user_set(rng, 21);
  CHECK_THROWS_AS(lhs_bound(big), std::length_error);
  // n = 20 is the documented ceiling and must work.
  const MeasurementSet at_limit = random_user_set(rng, 20);
  CHECK_NOTHROW(lhs_bound(at_limit));
}

TEST_CASE("saturating strategies hit the bound exactly") {
  for (SetLabel label : {SetLabel::square, SetLabel::octahedron, SetLabel::custom4,
                         SetLabel::custom5, SetLabel::icosahedron,
                         SetLabel::dodecahedron, SetLabel::cube4}) {
    const MeasurementSet set = make_set(label);
    const SteeringBound bound = lhs_bound(set);
    const LHSStrategy strategy = saturating_strategy(set, bound);
    CHECK_NOTHROW(validate_strategy(strategy, set.n()));
    REQUIRE(strategy.entries.size() == bound.maximizing_patterns.size());
    for (const LHSEntry& entry : strategy.entries) {
      CHECK(entry.probability ==
            doctest::Approx(1.0 / strategy.entries.size()).epsilon(1e-15));
    }
    CHECK(s_standard(strategy, set) == doctest::Approx(bound.c_n).epsilon(1e-12));
    CHECK(s_prime(exact_probabilities(strategy, set)) ==
          doctest::Approx(bound.c_prime_n).epsilon(1e-12));
  }
  CHECK_THROWS_AS(saturating_strategy(continuum_set(), lhs_bound(continuum_set())),
                  std::invalid_argument);
}

TEST_CASE("no hidden-state strategy exceeds the bound") {
  for (SetLabel label :
       {SetLabel::octahedron, SetLabel::custom5, SetLabel::icosahedron}) {
    const MeasurementSet set = make_set(label);
    const SteeringBound bound = lhs_bound(set);
    auto rng = test_rng(33 + static_cast<int>(label));
    for (int trial = 0; trial < 10000; ++trial) {
      const LHSStrategy strategy = random_strategy(rng, set.n());
      CHECK(s_standard(strategy, set) <= bound.c_n + 1e-9);
      CHECK(s_prime(exact_probabilities(strategy, set)) <= bound.c_prime_n + 1e-9);
    }
  }
}

TEST_CASE("validate_strategy rejects malformed strategies") {
  const int n = 3;
  LHSStrategy good;
  LHSEntry entry;
  entry.probability = 1.0;
  entry.response = {1, -1, 1};
  entry.hidden_state = QubitKet{1.0, 0.0};
  good.entries.push_back(entry);
  CHECK_NOTHROW(validate_strategy(good, n));

  LHSStrategy empty;
  CHECK_THROWS_AS(validate_strategy(empty, n), std::invalid_argument);

  LHSStrategy negative = good;
  negative.entries[0].probability = -0.1;
  negative.entries.push_back(entry);
  negative.entries[1].probability = 1.1;
  CHECK_THROWS_AS(validate_strategy(negative, n), std::invalid_argument);

  LHSStrategy off_sum = good;
  off_sum.entries[0].probability = 0.7;
  CHECK_THROWS_AS(validate_strategy(off_sum, n), std::invalid_argument);

  LHSStrategy short_response = good;
  short_response.entries[0].response = {1, -1};
  CHECK_THROWS_AS(validate_strategy(short_response, n), std::invalid_argument);

  LHSStrategy bad_sign = good;
  bad_sign.entries[0].response = {1, 0, 1};
  CHECK_THROWS_AS(validate_strategy(bad_sign, n), std::invalid_argument);

  LHSStrategy unnormalized = good;
  unnormalized.entries[0].hidden_state = QubitKet{0.5, 0.0};
  CHECK_THROWS_AS(validate_strategy(unnormalized, n), std::invalid_argument);
}
