#include "qsteer/steering_eval.hpp"

#include <stdexcept>
#include <string>

namespace qsteer {

namespace {

void check_finite_set(const MeasurementSet& set, const char* who) {
  if (set.is_continuum()) {
    throw std::invalid_argument(std::string(who) +
                                ": the continuum limit is handled analytically");
  }
  validate_set(set);
}

}  // namespace

ScenarioProbabilities exact_probabilities(const TwoQubitState& state,
                                          const AliceSettings& alice,
                                          const MeasurementSet& set, double eta) {
  check_finite_set(set, "exact_probabilities");
  if (alice.size() != set.directions.size()) {
    throw std::invalid_argument("exact_probabilities: settings/set size mismatch");
  }
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::domain_error("exact_probabilities: eta outside [0, 1]");
  }
  const Mat4 rho = build_state(state);
  const Mat2 rho_a = partial_trace_b(rho);
  const Mat2 rho_b = partial_trace_a(rho);
  ScenarioProbabilities probs(set.directions.size());
  for (size_t k = 0; k < set.directions.size(); ++k) {
    const Mat2 pi_a = alice_ket(alice[k].alpha, alice[k].phi).projector();
    const Mat2 pi_b = bloch_to_projector(set.directions[k]);
    probs[k].p_joint = eta * (kron(pi_a, pi_b) * rho).trace().real();
    probs[k].p_alice = eta * (pi_a * rho_a).trace().real();
    probs[k].p_bob = (pi_b * rho_b).trace().real();
  }
  return probs;
}

ScenarioProbabilities exact_probabilities(const LHSStrategy& strategy,
                                          const MeasurementSet& set) {
  check_finite_set(set, "exact_probabilities");
  validate_strategy(strategy, set.n());
  ScenarioProbabilities probs(set.directions.size());
  for (size_t k = 0; k < set.directions.size(); ++k) {
    for (const LHSEntry& entry : strategy.entries) {
      const double bob = 0.5 * (1.0 + set.directions[k].dot(entry.hidden_state.bloch()));
      const bool plus = entry.response[k] > 0;
      probs[k].p_bob += entry.probability * bob;
      if (plus) {
        probs[k].p_alice += entry.probability;
        probs[k].p_joint += entry.probability * bob;
      }
    }
  }
  return probs;
}

double s_prime(const ScenarioProbabilities& probs) {
  if (probs.empty()) throw std::invalid_argument("s_prime: no settings");
  double sum = 0.0;
  for (const SettingProbabilities& p : probs) {
    sum += 2.0 * p.p_joint - p.p_alice - p.p_bob;
  }
  return sum / static_cast<double>(probs.size());
}

double s_standard(const TwoQubitState& state, const AliceSettings& alice,
                  const MeasurementSet& set) {
  check_finite_set(set, "s_standard");
  if (alice.size() != set.directions.size()) {
    throw std::invalid_argument("s_standard: settings/set size mismatch");
  }
  const Mat4 rho = build_state(state);
  double sum = 0.0;
  for (size_t k = 0; k < set.directions.size(); ++k) {
    // A_k = 2 Pi_a - I, Alice's +/-1 observable.
    const Mat2 a_obs =
        2.0 * alice_ket(alice[k].alpha, alice[k].phi).projector() - Mat2::Identity();
    sum += (kron(a_obs, pauli_dot(set.directions[k])) * rho).trace().real();
  }
  return sum / static_cast<double>(set.directions.size());
}

double s_standard(const LHSStrategy& strategy, const MeasurementSet& set) {
  check_finite_set(set, "s_standard");
  validate_strategy(strategy, set.n());
  double sum = 0.0;
  for (size_t k = 0; k < set.directions.size(); ++k) {
    for (const LHSEntry& entry : strategy.entries) {
      sum += entry.probability * entry.response[k] *
             set.directions[k].dot(entry.hidden_state.bloch());
    }
  }
  return sum / static_cast<double>(set.directions.size());
}

}  // namespace qsteer
