// The local-hidden-state bound C_n of the steering inequality: exhaustive
// maximization of (1/n) |sum_k s_k b_k| over all sign assignments s in
// {-1,+1}^n (the Pauli identity lambda_max(v.sigma) = |v| reduces the
// operator norm to a vector norm), plus the hidden-state strategy that
// saturates the bound.
#pragma once

#include "qsteer/measurement_sets.hpp"
#include "qsteer/qubit_algebra.hpp"

#include <vector>

namespace qsteer {

struct SteeringBound {
  double c_n = 0.0;
  double c_prime_n = 0.0;  // (c_n - 1)/2, the single-outcome form of the bound
  // All sign patterns attaining the maximum within 1e-12, canonicalized to
  // first coordinate +1 (global flips are redundant) and sorted; the first
  // entry is the reporting representative.
  std::vector<std::vector<int>> maximizing_patterns;
  // Top eigenvector of (1/n) sum_k s_k b_k.sigma for each pattern.
  std::vector<QubitKet> saturating_states;
};

// Computes the bound by enumerating all 2^n sign vectors.  The continuum
// marker returns the analytic C = 1/2 with no patterns.  Throws
// std::domain_error for an empty finite set and std::length_error for n > 20.
SteeringBound lhs_bound(const MeasurementSet& set);

struct LHSEntry {
  double probability = 0.0;
  std::vector<int> response;  // Alice's deterministic outcome per setting, +/-1
  QubitKet hidden_state;      // Bob's pure state for this hidden variable
};

struct LHSStrategy {
  std::vector<LHSEntry> entries;
};

// Probabilities nonnegative and summing to 1 within 1e-12; responses of
// length n with entries +/-1.  Throws std::invalid_argument.
void validate_strategy(const LHSStrategy& strategy, int n);

// Uniform mixture over the maximizing patterns, each answering with its
// pattern and holding the matching top eigenvector; achieves S_n = C_n
// exactly.  Throws std::invalid_argument for the continuum marker.
LHSStrategy saturating_strategy(const MeasurementSet& set, const SteeringBound& bound);

}  // namespace qsteer
