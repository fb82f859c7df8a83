// Exact evaluation of the steering parameters: the two-outcome average
// S = (1/n) sum_k <A_k x b_k.sigma> and the single-outcome form
// S' = (1/n) sum_k [2 p(A_k, P_k) - p(A_k) - p(P_k)], including the
// detection-efficiency channel on Alice's side (her null outcomes fold
// into -1, so p(A_k) and the joint probability each pick up a factor eta).
#pragma once

#include "qsteer/lhs_bound.hpp"
#include "qsteer/measurement_sets.hpp"
#include "qsteer/qubit_algebra.hpp"

#include <vector>

namespace qsteer {

struct AliceSetting {
  double alpha = 0.0;  // polar angle of Alice's projector ket, in [0, pi]
  double phi = 0.0;    // azimuth in [0, 2*pi]
};
using AliceSettings = std::vector<AliceSetting>;

struct SettingProbabilities {
  double p_joint = 0.0;  // p(Alice +1 detected, Bob outcome 1)
  double p_alice = 0.0;  // p(Alice +1 detected)
  double p_bob = 0.0;    // p(Bob outcome 1); Bob's device is trusted
};
using ScenarioProbabilities = std::vector<SettingProbabilities>;

// Density-matrix route: p_joint = eta Tr[(Pi_a x Pi_b) rho], p_alice =
// eta Tr[Pi_a rho_A], p_bob = Tr[Pi_b rho_B].  Throws std::invalid_argument
// for the continuum marker or mismatched settings, std::domain_error for eta
// outside [0, 1].
ScenarioProbabilities exact_probabilities(const TwoQubitState& state,
                                          const AliceSettings& alice,
                                          const MeasurementSet& set,
                                          double eta = 1.0);

// Hidden-state route: Alice answers deterministically per entry, Bob's
// outcome probability is Tr[Pi_b rho_lambda].
ScenarioProbabilities exact_probabilities(const LHSStrategy& strategy,
                                          const MeasurementSet& set);

// S' = (1/n) sum_k [2 p_joint - p_alice - p_bob], in [-1, 1/2].
double s_prime(const ScenarioProbabilities& probs);

// The two-outcome steering parameter S (eta = 1 context).
double s_standard(const TwoQubitState& state, const AliceSettings& alice,
                  const MeasurementSet& set);
double s_standard(const LHSStrategy& strategy, const MeasurementSet& set);

}  // namespace qsteer
