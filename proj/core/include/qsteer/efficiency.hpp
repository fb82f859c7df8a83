// Critical detection efficiency eta_c on Alice's side: the generic evaluator
// (correlator form and probability form, which must agree), the optimal Alice
// settings tan(alpha_k) = sin(theta) tan(beta_k), closed forms for n = 2, 3
// and the continuum, the zero-entanglement limits, and theta-sweep curves.
#pragma once

#include "qsteer/lhs_bound.hpp"
#include "qsteer/measurement_sets.hpp"
#include "qsteer/steering_eval.hpp"

#include <string>
#include <vector>

namespace qsteer {

// Alice's optimal projector angles for the pure state at `theta`: for each
// direction with polar angle beta_k and azimuth phi_k, alpha_k solves
// tan(alpha_k) = sin(theta) tan(beta_k) in [0, pi] with the same azimuth,
// maximizing the correlation to sqrt(cos^2 beta + sin^2 theta sin^2 beta).
// Requires an aligned finite set (std::invalid_argument) and theta in
// (0, pi/2] (std::domain_error).
AliceSettings optimal_alice(double theta, const MeasurementSet& set);

struct EfficiencyForms {
  double pauli_form = 0.0;      // [C_n + mean <b.sigma>] / mean(corr + <b.sigma>)
  double projector_form = 0.0;  // [C'_n + mean p_bob] / mean(2 p_joint - p_alice)
};

// Evaluate the critical efficiency in both forms for the given state and
// settings.  The correlator form uses the analytic expectation values of the
// state family; the probability form goes through the density matrix.  The
// two are algebraically identical and serve as mutual cross-checks.
EfficiencyForms critical_efficiency_forms(const TwoQubitState& state,
                                          const AliceSettings& alice,
                                          const MeasurementSet& aligned_set,
                                          const SteeringBound& bound);

// Critical efficiency of the pure state at `theta` with optimal settings.
// Finite sets are aligned internally if needed; the continuum marker routes
// to eta_infinity.  Both forms are evaluated and must agree to 1e-12.
// theta outside (0, pi/2] throws std::domain_error (use
// limit_zero_entanglement for the theta -> 0 limit).
double critical_efficiency(double theta, const MeasurementSet& set);

// Closed form for the continuum of measurement directions:
//   1 / [1 + (1 + sec theta) arccosh(csc theta)],
// evaluated in a cancellation-safe arrangement; theta in (0, pi/2].
double eta_infinity(double theta);

// The same quantity from Gauss-Legendre quadrature of the hemispheric
// numerator/denominator integrals; agrees with the closed form to 1e-8.
double eta_infinity_quadrature(double theta);

// The theta -> 0 limit (sum_k cos beta_k)/(sum_k sec beta_k) on the aligned
// set; 0 for the continuum.  A direction on the equator makes the secant sum
// diverge (std::domain_error).
double limit_zero_entanglement(const MeasurementSet& set);

struct ThetaGrid {
  double start = 1e-3;
  double stop = 1.5707963267948966;  // pi/2
  int count = 200;
};

// Inclusive linear grid; validates 0 < start <= stop <= pi/2, count >= 1.
std::vector<double> theta_grid_points(const ThetaGrid& grid);

struct CurvePoint {
  double theta = 0.0;
  double eta = 0.0;
};

struct EfficiencyCurve {
  std::string set_name;
  int n = 0;  // 0 for the continuum
  std::vector<CurvePoint> samples;
};

EfficiencyCurve efficiency_curve(const MeasurementSet& set, const ThetaGrid& grid = {});

}  // namespace qsteer
