#include "qsteer/lhs_bound.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qsteer {

SteeringBound lhs_bound(const MeasurementSet& set) {
  if (set.is_continuum()) {
    SteeringBound bound;
    bound.c_n = 0.5;
    bound.c_prime_n = (bound.c_n - 1.0) / 2.0;
    return bound;
  }
  const int n = set.n();
  if (n == 0) throw std::domain_error("lhs_bound: empty measurement set");
  if (n > 20) throw std::length_error("lhs_bound: exhaustive enumeration capped at n = 20");

  const auto resultant_norm = [&](uint32_t mask) {
    Vec3 sum = Vec3::Zero();
    for (int k = 0; k < n; ++k) {
      sum += ((mask >> k) & 1u) ? -set.directions[k] : set.directions[k];
    }
    return sum.norm();
  };

  const uint32_t count = 1u << n;
  double max_norm = 0.0;
  for (uint32_t mask = 0; mask < count; ++mask) {
    max_norm = std::max(max_norm, resultant_norm(mask));
  }

  // Collect every pattern within 1e-12 of the maximum, modulo global flips.
  std::vector<std::vector<int>> patterns;
  const double retain = max_norm - 1e-12 * std::max(1.0, max_norm);
  for (uint32_t mask = 0; mask < count; ++mask) {
    if (resultant_norm(mask) < retain) continue;
    std::vector<int> signs(n);
    for (int k = 0; k < n; ++k) signs[k] = ((mask >> k) & 1u) ? -1 : 1;
    if (signs[0] < 0) {
      for (int& s : signs) s = -s;
    }
    patterns.push_back(std::move(signs));
  }
  std::sort(patterns.begin(), patterns.end());
  patterns.erase(std::unique(patterns.begin(), patterns.end()), patterns.end());

  SteeringBound bound;
  bound.c_n = max_norm / n;
  bound.c_prime_n = (bound.c_n - 1.0) / 2.0;
  bound.maximizing_patterns = std::move(patterns);
  bound.saturating_states.reserve(bound.maximizing_patterns.size());
  for (const auto& signs : bound.maximizing_patterns) {
    Vec3 sum = Vec3::Zero();
    for (int k = 0; k < n; ++k) sum += signs[k] * set.directions[k];
    bound.saturating_states.push_back(hermitian2_eigen(pauli_dot(sum / n)).kets[0]);
  }
  return bound;
}

void validate_strategy(const LHSStrategy& strategy, int n) {
  if (strategy.entries.empty()) {
    throw std::invalid_argument("LHSStrategy: no entries");
  }
  double total = 0.0;
  for (const LHSEntry& entry : strategy.entries) {
    if (entry.probability < 0.0) {
      throw std::invalid_argument("LHSStrategy: negative probability");
    }
    total += entry.probability;
    if (static_cast<int>(entry.response.size()) != n) {
      throw std::invalid_argument("LHSStrategy: response length does not match set");
    }
    for (int s : entry.response) {
      if (s != 1 && s != -1) {
        throw std::invalid_argument("LHSStrategy: responses must be +1 or -1");
      }
    }
    if (std::abs(entry.hidden_state.vector().squaredNorm() - 1.0) > 1e-9) {
      throw std::invalid_argument("LHSStrategy: hidden state is not normalized");
    }
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("LHSStrategy: probabilities do not sum to 1");
  }
}

LHSStrategy saturating_strategy(const MeasurementSet& set, const SteeringBound& bound) {
  if (set.is_continuum() || bound.maximizing_patterns.empty()) {
    throw std::invalid_argument("saturating_strategy: needs a finite set with patterns");
  }
  LHSStrategy strategy;
  const double p = 1.0 / static_cast<double>(bound.maximizing_patterns.size());
  for (size_t i = 0; i < bound.maximizing_patterns.size(); ++i) {
    strategy.entries.push_back(
        {p, bound.maximizing_patterns[i], bound.saturating_states[i]});
  }
  validate_strategy(strategy, set.n());
  return strategy;
}

}  // namespace qsteer
