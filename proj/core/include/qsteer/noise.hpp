// Critical efficiency under the two noise models: colored noise (mixing in
// the diagonal part of the state, which preserves the reduced states) via the
// reciprocal formula, white noise via its multiplicative correction, minima
// over theta, and the epsilon crossover where noisy partially-entangled
// states stop beating the noiseless maximally-entangled threshold C_n.
#pragma once

#include "qsteer/efficiency.hpp"
#include "qsteer/measurement_sets.hpp"

#include <string>
#include <vector>

namespace qsteer {

// 1/eta = (1 - eps)/eta_c + eps [M - C_n cos theta]/[C_n (1 - cos theta)]
// with M the mean of cos(alpha_k) cos(beta_k) at the noiseless-optimal Alice
// settings.  Values above 1 (or non-positive, at extreme eps) mean the
// inequality cannot be violated at that theta.  The continuum variant uses
// hemispheric quadrature for M.
double eta_colored(double theta, const MeasurementSet& set, double epsilon);

// Cross-check route for finite sets: build the colored-noise density matrix
// and evaluate the generic correlator form on it directly.
double eta_colored_direct(double theta, const MeasurementSet& set, double epsilon);

// eta_white = [1 + eps/(2 (1 - eps) sin^2(theta/2))] eta_c; diverges as
// theta -> 0 for any eps > 0.  Values above 1 are returned as-is.
double eta_white(double theta, const MeasurementSet& set, double epsilon);

struct NoiseMinimum {
  double theta_star = 0.0;
  double eta_star = 0.0;
};

// Golden-section minimum of the (possibly noisy) efficiency curve over
// theta in [1e-3, pi/2], refined to |delta theta| < 1e-6 after a coarse
// bracketing scan.  Unattainable values (eta <= 0) are treated as +infinity.
NoiseMinimum min_over_theta(const MeasurementSet& set, double epsilon,
                            NoiseKind kind);

// Largest epsilon (bisection to 1e-4) for which the colored-noise curve
// still dips below C_n somewhere; 0 if it never does.
double crossover_epsilon(const MeasurementSet& set);

struct NoiseCurve {
  std::string set_name;
  int n = 0;  // 0 for the continuum
  double epsilon = 0.0;
  NoiseKind kind = NoiseKind::colored;
  std::vector<CurvePoint> samples;
};

NoiseCurve noise_curve(const MeasurementSet& set, double epsilon, NoiseKind kind,
                       const ThetaGrid& grid = {});

}  // namespace qsteer
