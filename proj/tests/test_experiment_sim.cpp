#include "qsteer/experiment_sim.hpp"

#include "qsteer/efficiency.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

using namespace qsteer;
using namespace qsteer::testing;

namespace {

struct Scenario {
  MeasurementSet set;
  TwoQubitState state;
  AliceSettings alice;
  SteeringBound bound;
};

Scenario octahedron_scenario(double theta) {
  Scenario s{align_set(make_set(SetLabel::octahedron)), pure_state(theta), {}, {}};
  s.alice = optimal_alice(theta, s.set);
  s.bound = lhs_bound(s.set);
  return s;
}

bool tallies_equal(const ExperimentTally& a, const ExperimentTally& b) {
  if (a.n != b.n || a.rounds != b.rounds || a.seed != b.seed) return false;
  for (int k = 0; k < a.n; ++k) {
    const PerSettingCounts& x = a.per_setting[k];
    const PerSettingCounts& y = b.per_setting[k];
    if (x.n_joint != y.n_joint || x.n_alice != y.n_alice || x.n_bob != y.n_bob ||
        x.n_rounds != y.n_rounds) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("tallies are reproducible and independent of the worker count") {
  const Scenario s = octahedron_scenario(0.6);
  const ExperimentTally one =
      simulate_quantum(s.state, s.alice, s.set, 0.7, 200000, 42, 1.0, 1);
  const ExperimentTally three =
      simulate_quantum(s.state, s.alice, s.set, 0.7, 200000, 42, 1.0, 3);
  const ExperimentTally eight =
      simulate_quantum(s.state, s.alice, s.set, 0.7, 200000, 42, 1.0, 8);
  CHECK(tallies_equal(one, three));
  CHECK(tallies_equal(one, eight));
  const ExperimentTally other =
      simulate_quantum(s.state, s.alice, s.set, 0.7, 200000, 43, 1.0, 3);
  CHECK(!tallies_equal(one, other));

  const LHSStrategy strategy = saturating_strategy(s.set, s.bound);
  const ExperimentTally l1 = simulate_lhs(strategy, s.set, 150000, 7, 1);
  const ExperimentTally l4 = simulate_lhs(strategy, s.set, 150000, 7, 4);
  CHECK(tallies_equal(l1, l4));
}

TEST_CASE("per-setting counts satisfy the tally accounting") {
  const Scenario s = octahedron_scenario(0.9);
  SUBCASE("ideal Bob keeps every round") {
    const ExperimentTally t =
        simulate_quantum(s.state, s.alice, s.set, 0.5, 100000, 1, 1.0, 2);
    std::uint64_t total = 0;
    for (const PerSettingCounts& c : t.per_setting) {
      CHECK(c.n_joint <= c.n_alice);
      CHECK(c.n_joint <= c.n_bob);
      CHECK(c.n_alice <= c.n_rounds);
      CHECK(c.n_bob <= c.n_rounds);
      total += c.n_rounds;
    }
    CHECK(total == t.rounds);
  }
  SUBCASE("a lossy Bob discards rounds") {
    const double bob_eta = 0.5;
    const ExperimentTally t =
        simulate_quantum(s.state, s.alice, s.set, 1.0, 100000, 2, bob_eta, 2);
    std::uint64_t total = 0;
    for (const PerSettingCounts& c : t.per_setting) total += c.n_rounds;
    CHECK(total < t.rounds);
    // Kept fraction is binomial(rounds, bob_eta): stay within five sigma.
    const double sigma = std::sqrt(100000 * bob_eta * (1 - bob_eta));
    CHECK(std::abs(static_cast<double>(total) - 50000.0) < 5.0 * sigma);
  }
}

TEST_CASE("empirical frequencies converge to the exact probabilities") {
  const Scenario s = octahedron_scenario(0.7);
  const double eta = 0.8;
  for (double bob_eta : {1.0, 0.6}) {
    const ExperimentTally t =
        simulate_quantum(s.state, s.alice, s.set, eta, 300000, 5, bob_eta);
    // Bob's losses are independent of the outcomes, so the per-setting
    // conditional frequencies estimate the same probabilities either way.
    const ScenarioProbabilities probs =
        exact_probabilities(s.state, s.alice, s.set, eta);
    for (int k = 0; k < s.set.n(); ++k) {
      const PerSettingCounts& c = t.per_setting[k];
      const double rounds_k = static_cast<double>(c.n_rounds);
      const auto close = [&](std::uint64_t count, double p) {
        const double sigma = std::sqrt(std::max(p * (1 - p) / rounds_k, 1e-12));
        return std::abs(count / rounds_k - p) < 5.0 * sigma;
      };
      CHECK(close(c.n_joint, probs[k].p_joint));
      CHECK(close(c.n_alice, probs[k].p_alice));
      CHECK(close(c.n_bob, probs[k].p_bob));
    }
  }
}

TEST_CASE("hidden-state simulation tracks its strategy's distribution") {
  const Scenario s = octahedron_scenario(0.5);
  auto rng = test_rng(61);
  const LHSStrategy strategy = random_strategy(rng, s.set.n());
  const ExperimentTally t = simulate_lhs(strategy, s.set, 300000, 9);
  const ScenarioProbabilities probs = exact_probabilities(strategy, s.set);
  for (int k = 0; k < s.set.n(); ++k) {
    const PerSettingCounts& c = t.per_setting[k];
    const double rounds_k = static_cast<double>(c.n_rounds);
    const auto close = [&](std::uint64_t count, double p) {
      const double sigma = std::sqrt(std::max(p * (1 - p) / rounds_k, 1e-12));
      return std::abs(count / rounds_k - p) < 5.0 * sigma;
    };
    CHECK(close(c.n_joint, probs[k].p_joint));
    CHECK(close(c.n_alice, probs[k].p_alice));
    CHECK(close(c.n_bob, probs[k].p_bob));
  }
}

TEST_CASE("a blind Alice never clicks") {
  const Scenario s = octahedron_scenario(0.8);
  const ExperimentTally t =
      simulate_quantum(s.state, s.alice, s.set, 0.0, 50000, 3);
  for (const PerSettingCounts& c : t.per_setting) {
    CHECK(c.n_alice == 0);
    CHECK(c.n_joint == 0);
    CHECK(c.n_bob > 0);
  }
}

TEST_CASE("verdict computes the estimator and its error bar") {
  ExperimentTally tally;
  tally.n = 2;
  tally.rounds = 300;
  tally.seed = 0;
  tally.per_setting = {{0, 30, 50, 60, 100}, {1, 80, 100, 120, 200}};
  SteeringBound bound;
  bound.c_n = 0.5;
  bound.c_prime_n = -0.25;
  const Verdict v = verdict(tally, bound, 1.0);
  // s' = mean of 2 p_j - p_a - p_b = ((-0.5) + (-0.3)) / 2.
  CHECK(v.s_prime_hat == doctest::Approx(-0.4).epsilon(1e-15));
  // Independent-binomial propagation, per setting [4 v_j + v_a + v_b] / m_k.
  const double var0 = (4 * 0.3 * 0.7 + 0.5 * 0.5 + 0.6 * 0.4) / 100.0;
  const double var1 = (4 * 0.4 * 0.6 + 0.5 * 0.5 + 0.6 * 0.4) / 200.0;
  CHECK(v.std_error == doctest::Approx(std::sqrt(var0 + var1) / 2.0).epsilon(1e-15));
  CHECK(v.c_prime_n == -0.25);
  CHECK(v.sigmas ==
        doctest::Approx((-0.4 + 0.25) / (std::sqrt(var0 + var1) / 2.0)).epsilon(1e-13));
  CHECK(!v.steering_claimed);  // sigmas is negative here
}

TEST_CASE("verdict edge cases") {
  SteeringBound bound;
  bound.c_n = 0.5;
  bound.c_prime_n = -0.25;

  ExperimentTally starved;
  starved.n = 2;
  starved.rounds = 10;
  starved.per_setting = {{0, 1, 2, 3, 10}, {1, 0, 0, 0, 0}};
  CHECK_THROWS_AS(verdict(starved, bound), std::runtime_error);

  // Degenerate frequencies: zero variance with a strict exceedance.
  ExperimentTally saturated;
  saturated.n = 1;
  saturated.rounds = 50;
  saturated.per_setting = {{0, 50, 50, 50, 50}};  // p_j = p_a = p_b = 1
  const Verdict v = verdict(saturated, bound, 5.0);
  CHECK(v.std_error == 0.0);
  CHECK(v.s_prime_hat == 0.0);
  CHECK(std::isinf(v.sigmas));
  CHECK(v.sigmas > 0.0);
  CHECK(v.steering_claimed);

  SteeringBound zero_bound;
  zero_bound.c_n = 1.0;
  zero_bound.c_prime_n = 0.0;
  const Verdict tie = verdict(saturated, zero_bound, 5.0);
  CHECK(tie.sigmas == 0.0);
  CHECK(!tie.steering_claimed);

  // The claim threshold is strict.
  ExperimentTally empty_bob;
  empty_bob.n = 1;
  empty_bob.rounds = 50;
  empty_bob.per_setting = {{0, 0, 0, 0, 50}};  // everything at zero
  const Verdict flat = verdict(empty_bob, zero_bound, 5.0);
  CHECK(flat.sigmas == 0.0);
  CHECK(!flat.steering_claimed);
}

TEST_CASE("an honest quantum run is consistent with its expectation") {
  const Scenario s = octahedron_scenario(0.4);
  const double eta_c = critical_efficiency(0.4, s.set);
  const double eta = 0.5 * (eta_c + 1.0);
  const double exact =
      s_prime(exact_probabilities(s.state, s.alice, s.set, eta));
  int within = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ExperimentTally t =
        simulate_quantum(s.state, s.alice, s.set, eta, 100000, seed);
    const Verdict v = verdict(t, s.bound);
    if (std::abs(v.s_prime_hat - exact) <= 5.0 * v.std_error) ++within;
  }
  CHECK(within >= 19);
}

TEST_CASE("the saturating adversary parks on the bound without crossing it") {
  const Scenario s = octahedron_scenario(0.4);
  const LHSStrategy strategy = saturating_strategy(s.set, s.bound);
  const ExperimentTally t = simulate_lhs(strategy, s.set, 1000000, 11);
  const Verdict v = verdict(t, s.bound);
  CHECK(std::abs(v.s_prime_hat - s.bound.c_prime_n) <= 5.0 * v.std_error);
  CHECK(!v.steering_claimed);
}

TEST_CASE("random adversaries never get certified") {
  const Scenario s = octahedron_scenario(0.4);
  auto rng = test_rng(62);
  for (int trial = 0; trial < 200; ++trial) {
    const LHSStrategy strategy = random_strategy(rng, s.set.n());
    const ExperimentTally t =
        simulate_lhs(strategy, s.set, 10000, 1000 + trial, 1);
    CHECK(!verdict(t, s.bound).steering_claimed);
  }
}

TEST_CASE("default_workers honours the environment variable") {
  setenv("QSTEER_WORKERS", "3", 1);
  CHECK(default_workers() == 3);
  setenv("QSTEER_WORKERS", "0", 1);
  CHECK_THROWS_AS(default_workers(), std::invalid_argument);
  setenv("QSTEER_WORKERS", "many", 1);
  CHECK_THROWS_AS(default_workers(), std::invalid_argument);
  setenv("QSTEER_WORKERS", "2x", 1);
  CHECK_THROWS_AS(default_workers(), std::invalid_argument);
  unsetenv("QSTEER_WORKERS");
  CHECK(default_workers() >= 1);
}

TEST_CASE("tally JSON round-trips through the documented schema") {
  const Scenario s = octahedron_scenario(0.5);
  const ExperimentTally t =
      simulate_quantum(s.state, s.alice, s.set, 0.9, 20000, 17);
  const Verdict v = verdict(t, s.bound);
  std::ostringstream out;
  write_tally_json(out, t, v);
  const nlohmann::json j = nlohmann::json::parse(out.str());
  CHECK(j.at("n").get<int>() == 3);
  CHECK(j.at("seed").get<std::uint64_t>() == 17);
  CHECK(j.at("rounds").get<std::uint64_t>() == 20000);
  CHECK(j.at("s_prime_hat").get<double>() == v.s_prime_hat);
  CHECK(j.at("std_error").get<double>() == v.std_error);
  CHECK(j.at("c_prime_n").get<double>() == v.c_prime_n);
  CHECK(j.at("sigmas").get<double>() == v.sigmas);
  CHECK(j.at("steering_claimed").get<bool>() == v.steering_claimed);
  REQUIRE(j.at("per_setting").size() == 3);
  for (int k = 0; k < 3; ++k) {
    const nlohmann::json& row = j.at("per_setting").at(k);
    CHECK(row.at("k").get<int>() == k);
    CHECK(row.at("n_joint").get<std::uint64_t>() == t.per_setting[k].n_joint);
    CHECK(row.at("n_alice").get<std::uint64_t>() == t.per_setting[k].n_alice);
    CHECK(row.at("n_bob").get<std::uint64_t>() == t.per_setting[k].n_bob);
    CHECK(row.at("n_rounds").get<std::uint64_t>() == t.per_setting[k].n_rounds);
  }
}

TEST_CASE("simulation rejects malformed requests") {
  const Scenario s = octahedron_scenario(0.5);
  CHECK_THROWS_AS(
      simulate_quantum(s.state, {}, continuum_set(), 0.5, 100, 0),
      std::invalid_argument);
  CHECK_THROWS_AS(simulate_quantum(s.state, s.alice, s.set, 0.5, 0, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(simulate_quantum(s.state, s.alice, s.set, -0.1, 100, 0),
                  std::domain_error);
  CHECK_THROWS_AS(simulate_quantum(s.state, s.alice, s.set, 1.1, 100, 0),
                  std::domain_error);
  CHECK_THROWS_AS(simulate_quantum(s.state, s.alice, s.set, 0.5, 100, 0, 1.5),
                  std::domain_error);
  AliceSettings two = {{0.1, 0.0}, {0.2, 0.0}};
  CHECK_THROWS_AS(simulate_quantum(s.state, two, s.set, 0.5, 100, 0),
                  std::invalid_argument);

  const LHSStrategy strategy = saturating_strategy(s.set, s.bound);
  CHECK_THROWS_AS(simulate_lhs(strategy, continuum_set(), 100, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(simulate_lhs(strategy, s.set, 0, 0), std::invalid_argument);
  LHSStrategy bad = strategy;
  bad.entries[0].probability += 0.5;
  CHECK_THROWS_AS(simulate_lhs(bad, s.set, 100, 0), std::invalid_argument);
}
