#include "qsteer/experiment_sim.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

namespace qsteer {

namespace {

constexpr std::uint64_t kChunkRounds = 65536;

// SplitMix64: decorrelates the per-chunk seeds derived from (seed, chunk).
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t chunk) {
  return splitmix64(seed ^ splitmix64(chunk));
}

// Accumulate `fn(chunk_index, first_round, round_count, rng)` over all chunks,
// distributing chunks across workers; the per-setting counts merge by
// addition, so the result does not depend on the distribution.
template <typename PerChunk>
std::vector<PerSettingCounts> run_chunks(int n, std::uint64_t rounds,
                                         std::uint64_t seed, int workers,
                                         const PerChunk& fn) {
  const std::uint64_t num_chunks = (rounds + kChunkRounds - 1) / kChunkRounds;
  const int thread_count =
      static_cast<int>(std::min<std::uint64_t>(workers, num_chunks));

  const auto make_counts = [n] {
    std::vector<PerSettingCounts> counts(n);
    for (int k = 0; k < n; ++k) counts[k].k = k;
    return counts;
  };

  std::vector<std::vector<PerSettingCounts>> partial(thread_count, make_counts());
  const auto work = [&](int t) {
    for (std::uint64_t chunk = t; chunk < num_chunks; chunk += thread_count) {
      const std::uint64_t first = chunk * kChunkRounds;
      const std::uint64_t count = std::min(kChunkRounds, rounds - first);
      std::mt19937_64 rng(chunk_seed(seed, chunk));
      fn(count, rng, partial[t]);
    }
  };
  if (thread_count <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (int t = 0; t < thread_count; ++t) pool.emplace_back(work, t);
    for (std::thread& th : pool) th.join();
  }

  std::vector<PerSettingCounts> total = make_counts();
  for (const auto& counts : partial) {
    for (int k = 0; k < n; ++k) {
      total[k].n_joint += counts[k].n_joint;
      total[k].n_alice += counts[k].n_alice;
      total[k].n_bob += counts[k].n_bob;
      total[k].n_rounds += counts[k].n_rounds;
    }
  }
  return total;
}

int resolve_workers(int workers) {
  return workers > 0 ? workers : default_workers();
}

}  // namespace

int default_workers() {
  if (const char* env = std::getenv("QSTEER_WORKERS")) {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || parsed < 1) {
      throw std::invalid_argument("QSTEER_WORKERS must be a positive integer");
    }
    return static_cast<int>(parsed);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

ExperimentTally simulate_quantum(const TwoQubitState& state,
                                 const AliceSettings& alice,
                                 const MeasurementSet& set, double eta,
                                 std::uint64_t rounds, std::uint64_t seed,
                                 double bob_eta, int workers) {
  if (set.is_continuum()) {
    throw std::invalid_argument("simulate_quantum: continuum set unsupported");
  }
  if (rounds == 0) throw std::invalid_argument("simulate_quantum: rounds must be >= 1");
  if (!(eta >= 0.0 && eta <= 1.0) || !(bob_eta >= 0.0 && bob_eta <= 1.0)) {
    throw std::domain_error("simulate_quantum: efficiencies must lie in [0, 1]");
  }
  const int n = set.n();

  // Cumulative distribution of the four outcome pairs (++, +-, -+, --) per
  // setting, before the detectors.
  const ScenarioProbabilities probs = exact_probabilities(state, alice, set, 1.0);
  std::vector<std::array<double, 3>> cdf(n);
  for (int k = 0; k < n; ++k) {
    const double pp = probs[k].p_joint;
    const double pm = probs[k].p_alice - probs[k].p_joint;
    const double mp = probs[k].p_bob - probs[k].p_joint;
    cdf[k] = {pp, pp + pm, pp + pm + mp};
  }

  const bool alice_lossy = eta < 1.0;
  const bool bob_lossy = bob_eta < 1.0;
  ExperimentTally tally;
  tally.n = n;
  tally.rounds = rounds;
  tally.seed = seed;
  tally.per_setting = run_chunks(
      n, rounds, seed, resolve_workers(workers),
      [&](std::uint64_t count, std::mt19937_64& rng,
          std::vector<PerSettingCounts>& counts) {
        std::uniform_int_distribution<int> pick(0, n - 1);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (std::uint64_t r = 0; r < count; ++r) {
          const int k = pick(rng);
          const double u = unit(rng);
          const bool a_plus = u < cdf[k][1];
          const bool b_plus = u < cdf[k][0] || (u >= cdf[k][1] && u < cdf[k][2]);
          const bool a_detected = !alice_lossy || unit(rng) < eta;
          if (bob_lossy && unit(rng) >= bob_eta) continue;  // Bob null: discard
          counts[k].n_rounds += 1;
          counts[k].n_bob += b_plus;
          if (a_plus && a_detected) {
            counts[k].n_alice += 1;
            counts[k].n_joint += b_plus;
          }
        }
      });
  return tally;
}

ExperimentTally simulate_lhs(const LHSStrategy& strategy, const MeasurementSet& set,
                             std::uint64_t rounds, std::uint64_t seed, int workers) {
  if (set.is_continuum()) {
    throw std::invalid_argument("simulate_lhs: continuum set unsupported");
  }
  if (rounds == 0) throw std::invalid_argument("simulate_lhs: rounds must be >= 1");
  const int n = set.n();
  validate_strategy(strategy, n);
  const size_t entries = strategy.entries.size();

  std::vector<double> lambda_cdf(entries);
  std::vector<std::vector<double>> bob_prob(entries, std::vector<double>(n));
  std::vector<std::vector<bool>> alice_plus(entries, std::vector<bool>(n));
  double acc = 0.0;
  for (size_t l = 0; l < entries; ++l) {
    const LHSEntry& entry = strategy.entries[l];
    acc += entry.probability;
    lambda_cdf[l] = acc;
    const Vec3 bloch = entry.hidden_state.bloch();
    for (int k = 0; k < n; ++k) {
      bob_prob[l][k] = 0.5 * (1.0 + set.directions[k].dot(bloch));
      alice_plus[l][k] = entry.response[k] > 0;
    }
  }
  lambda_cdf.back() = 1.0;

  ExperimentTally tally;
  tally.n = n;
  tally.rounds = rounds;
  tally.seed = seed;
  tally.per_setting = run_chunks(
      n, rounds, seed, resolve_workers(workers),
      [&](std::uint64_t count, std::mt19937_64& rng,
          std::vector<PerSettingCounts>& counts) {
        std::uniform_int_distribution<int> pick(0, n - 1);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (std::uint64_t r = 0; r < count; ++r) {
          const int k = pick(rng);
          const double u = unit(rng);
          size_t l = 0;
          while (l + 1 < entries && u >= lambda_cdf[l]) ++l;
          const bool b_plus = unit(rng) < bob_prob[l][k];
          counts[k].n_rounds += 1;
          counts[k].n_bob += b_plus;
          if (alice_plus[l][k]) {
            counts[k].n_alice += 1;
            counts[k].n_joint += b_plus;
          }
        }
      });
  return tally;
}

Verdict verdict(const ExperimentTally& tally, const SteeringBound& bound,
                double sigma_threshold) {
  if (tally.per_setting.empty()) {
    throw std::runtime_error("verdict: tally has no settings");
  }
  double mean = 0.0;
  double variance = 0.0;
  for (const PerSettingCounts& c : tally.per_setting) {
    if (c.n_rounds == 0) {
      throw std::runtime_error("verdict: insufficient data, setting " +
                               std::to_string(c.k) + " has no rounds");
    }
    const double rounds_k = static_cast<double>(c.n_rounds);
    const double pj = static_cast<double>(c.n_joint) / rounds_k;
    const double pa = static_cast<double>(c.n_alice) / rounds_k;
    const double pb = static_cast<double>(c.n_bob) / rounds_k;
    mean += 2.0 * pj - pa - pb;
    variance +=
        (4.0 * pj * (1.0 - pj) + pa * (1.0 - pa) + pb * (1.0 - pb)) / rounds_k;
  }
  const double n = static_cast<double>(tally.per_setting.size());
  Verdict v;
  v.s_prime_hat = mean / n;
  v.std_error = std::sqrt(variance) / n;
  v.c_prime_n = bound.c_prime_n;
  if (v.std_error > 0.0) {
    v.sigmas = (v.s_prime_hat - v.c_prime_n) / v.std_error;
  } else if (v.s_prime_hat == v.c_prime_n) {
    v.sigmas = 0.0;
  } else {
    v.sigmas = v.s_prime_hat > v.c_prime_n
                   ? std::numeric_limits<double>::infinity()
                   : -std::numeric_limits<double>::infinity();
  }
  v.steering_claimed = v.sigmas > sigma_threshold;
  return v;
}

void write_tally_json(std::ostream& out, const ExperimentTally& tally,
                      const Verdict& verdict) {
  nlohmann::json per_setting = nlohmann::json::array();
  for (const PerSettingCounts& c : tally.per_setting) {
    per_setting.push_back({{"k", c.k},
                           {"n_joint", c.n_joint},
                           {"n_alice", c.n_alice},
                           {"n_bob", c.n_bob},
                           {"n_rounds", c.n_rounds}});
  }
  const nlohmann::json j = {{"n", tally.n},
                            {"seed", tally.seed},
                            {"rounds", tally.rounds},
                            {"per_setting", per_setting},
                            {"s_prime_hat", verdict.s_prime_hat},
                            {"std_error", verdict.std_error},
                            {"c_prime_n", verdict.c_prime_n},
                            {"sigmas", verdict.sigmas},
                            {"steering_claimed", verdict.steering_claimed}};
  out << j.dump(2) << '\n';
}

}  // namespace qsteer
