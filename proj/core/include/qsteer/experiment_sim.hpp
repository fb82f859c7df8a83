// Monte Carlo simulation of the finite-sample steering test.  Each round
// picks a setting uniformly, samples the joint outcome pair from the exact
// distribution, applies Alice's detector (null folded to -1) and optionally
// Bob's (his null rounds are discarded: trusted-device postselection), and
// tallies counts per setting.  Rounds are generated in fixed-size chunks with
// per-chunk RNG substreams, so tallies are reproducible for a given seed no
// matter how many workers run.
#pragma once

#include "qsteer/lhs_bound.hpp"
#include "qsteer/measurement_sets.hpp"
#include "qsteer/steering_eval.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace qsteer {

struct PerSettingCounts {
  int k = 0;
  std::uint64_t n_joint = 0;   // Alice +1 detected and Bob outcome 1
  std::uint64_t n_alice = 0;   // Alice +1 detected
  std::uint64_t n_bob = 0;     // Bob outcome 1
  std::uint64_t n_rounds = 0;  // rounds with this setting where Bob detected
};

struct ExperimentTally {
  int n = 0;
  std::uint64_t rounds = 0;  // requested rounds, including any Bob-discarded ones
  std::uint64_t seed = 0;
  std::vector<PerSettingCounts> per_setting;
};

struct Verdict {
  double s_prime_hat = 0.0;
  double std_error = 0.0;
  double c_prime_n = 0.0;
  double sigmas = 0.0;
  bool steering_claimed = false;
};

// Worker count used when a simulate call passes workers = 0: the
// QSTEER_WORKERS environment variable if set (must parse as a positive
// integer), otherwise the hardware concurrency.
int default_workers();

// Honest quantum source measured with detection efficiency eta on Alice's
// side and bob_eta on Bob's (1 = ideal).  Throws std::invalid_argument for
// the continuum marker, mismatched settings or rounds = 0, std::domain_error
// for efficiencies outside [0, 1].
ExperimentTally simulate_quantum(const TwoQubitState& state,
                                 const AliceSettings& alice,
                                 const MeasurementSet& set, double eta,
                                 std::uint64_t rounds, std::uint64_t seed,
                                 double bob_eta = 1.0, int workers = 0);

// LHS adversary: per round a hidden variable is drawn, Alice answers
// deterministically, Bob's qubit is measured.
ExperimentTally simulate_lhs(const LHSStrategy& strategy, const MeasurementSet& set,
                             std::uint64_t rounds, std::uint64_t seed,
                             int workers = 0);

// Plug-in estimate of S' with independent-binomial error propagation per
// setting (intra-setting correlations are deliberately ignored, which makes
// the error bar conservative).  sigmas = (s_prime_hat - c_prime_n)/std_error;
// a zero standard error maps to +/-infinity (or 0 on exact equality).
// Throws std::runtime_error if any setting has no rounds.
Verdict verdict(const ExperimentTally& tally, const SteeringBound& bound,
                double sigma_threshold = 5.0);

// JSON export: {n, seed, rounds, per_setting: [{k, n_joint, n_alice, n_bob,
// n_rounds}], s_prime_hat, std_error, c_prime_n, sigmas, steering_claimed}.
void write_tally_json(std::ostream& out, const ExperimentTally& tally,
                      const Verdict& verdict);

}  // namespace qsteer
