// Shared test utilities: seeded RNG, random geometric/quantum objects, and a
// naive recursive enumeration of the sign-pattern maximum used as an oracle
// against the production bound computation.
#pragma once

#include "qsteer/lhs_bound.hpp"
#include "qsteer/measurement_sets.hpp"
#include "qsteer/qubit_algebra.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace qsteer::testing {

inline std::mt19937_64 test_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Vec3 random_unit_vec(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> z(-1.0, 1.0);
  std::uniform_real_distribution<double> az(0.0, 2.0 * std::numbers::pi);
  const double w = z(rng);
  const double phi = az(rng);
  const double r = std::sqrt(std::max(0.0, 1.0 - w * w));
  return {r * std::cos(phi), r * std::sin(phi), w};
}

inline Mat2 random_hermitian2(std::mt19937_64& rng, double scale = 2.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Mat2 m;
  m(0, 0) = complexd(u(rng), 0.0);
  m(1, 1) = complexd(u(rng), 0.0);
  m(0, 1) = complexd(u(rng), u(rng));
  m(1, 0) = std::conj(m(0, 1));
  return m;
}

inline QubitKet random_ket(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  complexd a0(g(rng), g(rng));
  complexd a1(g(rng), g(rng));
  const double norm = std::sqrt(std::norm(a0) + std::norm(a1));
  return {a0 / norm, a1 / norm};
}

inline MeasurementSet random_user_set(std::mt19937_64& rng, int n) {
  MeasurementSet set;
  set.label = SetLabel::user;
  set.name = "random";
  for (int k = 0; k < n; ++k) set.directions.push_back(random_unit_vec(rng));
  return set;
}

inline LHSStrategy random_strategy(std::mt19937_64& rng, int n, int max_entries = 8) {
  std::uniform_int_distribution<int> count(1, max_entries);
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  std::uniform_int_distribution<int> sign(0, 1);
  LHSStrategy strategy;
  const int entries = count(rng);
  double total = 0.0;
  for (int l = 0; l < entries; ++l) {
    LHSEntry entry;
    entry.probability = weight(rng) + 1e-6;
    total += entry.probability;
    for (int k = 0; k < n; ++k) entry.response.push_back(sign(rng) ? 1 : -1);
    entry.hidden_state = random_ket(rng);
    strategy.entries.push_back(entry);
  }
  for (LHSEntry& entry : strategy.entries) entry.probability /= total;
  return strategy;
}

// Oracle: max over sign assignments of |sum_k s_k b_k| / n by plain recursion,
// structured differently from the production bit-mask enumeration.
inline double naive_signed_max(const std::vector<Vec3>& dirs, std::size_t k,
                               const Vec3& acc) {
  if (k == dirs.size()) return acc.norm();
  return std::max(naive_signed_max(dirs, k + 1, acc + dirs[k]),
                  naive_signed_max(dirs, k + 1, acc - dirs[k]));
}

inline double naive_c_n(const std::vector<Vec3>& dirs) {
  return naive_signed_max(dirs, 0, Vec3::Zero()) / static_cast<double>(dirs.size());
}

}  // namespace qsteer::testing
