#include "qsteer/efficiency.hpp"

#include "qsteer/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qsteer {

namespace {

constexpr double kPi = std::numbers::pi;

void check_theta(double theta, const char* who) {
  if (!(theta > 0.0 && theta <= kPi / 2.0 + 1e-12)) {
    throw std::domain_error(std::string(who) +
                            ": theta must lie in (0, pi/2]; the theta -> 0 "
                            "boundary is served by limit_zero_entanglement");
  }
}

// Polar angle/azimuth of a direction; azimuth wrapped into [0, 2*pi).
struct Polar {
  double beta;
  double phi;
};

Polar to_polar(const Vec3& d) {
  const double beta = std::acos(std::clamp(d.z(), -1.0, 1.0));
  double phi = std::atan2(d.y(), d.x());
  if (phi < 0.0) phi += 2.0 * kPi;
  return {beta, phi};
}

// Analytic single-side Bloch vectors and correlator of the state family.
// The pure state has T = diag(-sin theta, -sin theta, -1), r_A = cos(theta) z,
// r_B = -cos(theta) z; colored noise scales only the transverse T entries by
// (1 - eps), white noise scales T and both r's by (1 - eps).
struct StateMoments {
  double t_perp;  // T_xx = T_yy
  double t_zz;
  double r_z;     // r_A = +r_z z, r_B = -r_z z
};

StateMoments moments(const TwoQubitState& s) {
  validate(s);
  const double st = std::sin(s.theta);
  const double ct = std::cos(s.theta);
  switch (s.noise_kind) {
    case NoiseKind::colored:
      return {-(1.0 - s.epsilon) * st, -1.0, ct};
    case NoiseKind::white:
      return {-(1.0 - s.epsilon) * st, -(1.0 - s.epsilon), (1.0 - s.epsilon) * ct};
    case NoiseKind::none:
    default:
      return {-st, -1.0, ct};
  }
}

}  // namespace

AliceSettings optimal_alice(double theta, const MeasurementSet& set) {
  check_theta(theta, "optimal_alice");
  if (set.is_continuum() || !set.aligned) {
    throw std::invalid_argument("optimal_alice: requires an aligned finite set");
  }
  AliceSettings settings;
  settings.reserve(set.directions.size());
  const double st = std::sin(theta);
  for (const Vec3& d : set.directions) {
    const Polar p = to_polar(d);
    // atan2 resolves tan(alpha) = sin(theta) tan(beta) in [0, pi].
    settings.push_back({std::atan2(st * std::sin(p.beta), std::cos(p.beta)), p.phi});
  }
  return settings;
}

EfficiencyForms critical_efficiency_forms(const TwoQubitState& state,
                                          const AliceSettings& alice,
                                          const MeasurementSet& aligned_set,
                                          const SteeringBound& bound) {
  if (aligned_set.is_continuum()) {
    throw std::invalid_argument("critical_efficiency_forms: finite sets only");
  }
  if (alice.size() != aligned_set.directions.size()) {
    throw std::invalid_argument("critical_efficiency_forms: settings/set mismatch");
  }
  const size_t n = aligned_set.directions.size();

  // Correlator form, from the analytic moments: the Alice ket has Bloch
  // vector (-sin a cos p, -sin a sin p, -cos a), so
  //   <a.sigma x b.sigma> = -t_perp sin a sin b cos(phi_a - phi_b) + (-t_zz) cos a cos b
  // against b = (sin b cos p, sin b sin p, cos b).
  double mean_corr = 0.0;
  double mean_bob = 0.0;
  const StateMoments m = moments(state);
  for (size_t k = 0; k < n; ++k) {
    const Polar p = to_polar(aligned_set.directions[k]);
    const double sa = std::sin(alice[k].alpha);
    const double ca = std::cos(alice[k].alpha);
    const double corr = -m.t_perp * sa * std::sin(p.beta) * std::cos(alice[k].phi - p.phi) -
                        m.t_zz * ca * std::cos(p.beta);
    mean_corr += corr;
    mean_bob += -m.r_z * std::cos(p.beta);  // <b.sigma> on rho_B
  }
  mean_corr /= static_cast<double>(n);
  mean_bob /= static_cast<double>(n);

  EfficiencyForms forms;
  forms.pauli_form = (bound.c_n + mean_bob) / (mean_corr + mean_bob);

  // Probability form, via the density matrix.
  const ScenarioProbabilities probs = exact_probabilities(state, alice, aligned_set, 1.0);
  double mean_pb = 0.0;
  double mean_den = 0.0;
  for (const SettingProbabilities& p : probs) {
    mean_pb += p.p_bob;
    mean_den += 2.0 * p.p_joint - p.p_alice;
  }
  mean_pb /= static_cast<double>(n);
  mean_den /= static_cast<double>(n);
  forms.projector_form = (bound.c_prime_n + mean_pb) / mean_den;
  return forms;
}

double critical_efficiency(double theta, const MeasurementSet& set) {
  check_theta(theta, "critical_efficiency");
  if (set.is_continuum()) return eta_infinity(theta);
  const MeasurementSet aligned = set.aligned ? set : align_set(set);
  const SteeringBound bound = lhs_bound(aligned);
  const AliceSettings alice = optimal_alice(theta, aligned);
  const EfficiencyForms forms =
      critical_efficiency_forms(pure_state(theta), alice, aligned, bound);
  // Both forms have numerator and denominator proportional to (1 - cos theta),
  // so roundoff is amplified by its reciprocal as theta -> 0; the mismatch
  // budget scales with that condition number and is 1e-12 where it is benign.
  const double amplification = std::max(1.0, 1e-3 / (1.0 - std::cos(theta)));
  if (std::abs(forms.pauli_form - forms.projector_form) >
      1e-12 * amplification * std::max(1.0, std::abs(forms.pauli_form))) {
    throw std::runtime_error("critical_efficiency: dual forms disagree");
  }
  return forms.pauli_form;
}

double eta_infinity(double theta) {
  check_theta(theta, "eta_infinity");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  // arccosh(csc t) = log((1 + cos t)/sin t); grouping c + (1 - s) keeps the
  // argument accurate for theta near pi/2, where 1 + c - s would cancel.
  const double arccosh_csc = std::log1p((c + (1.0 - s)) / s);
  return 1.0 / (1.0 + (1.0 + 1.0 / c) * arccosh_csc);
}

double eta_infinity_quadrature(double theta) {
  check_theta(theta, "eta_infinity_quadrature");
  const double c = std::cos(theta);
  const double s2 = std::sin(theta) * std::sin(theta);
  // Hemispheric averages with u = cos beta uniform on [0, 1]: the numerator
  // is C(1 - cos theta) with C = mean u = 1/2, the denominator is
  // mean[sqrt(u^2 + sin^2 theta (1 - u^2)) - u cos theta].
  const double den = integrate(
      [&](double u) { return std::sqrt(u * u + s2 * (1.0 - u * u)) - c * u; }, 0.0,
      1.0);
  return 0.5 * (1.0 - c) / den;
}

double limit_zero_entanglement(const MeasurementSet& set) {
  if (set.is_continuum()) return 0.0;
  const MeasurementSet aligned = set.aligned ? set : align_set(set);
  double sum_cos = 0.0;
  double sum_sec = 0.0;
  for (const Vec3& d : aligned.directions) {
    const double cb = d.z();
    if (cb <= 1e-9) {
      throw std::domain_error(
          "limit_zero_entanglement: direction on or below the equator makes the "
          "secant sum diverge");
    }
    sum_cos += cb;
    sum_sec += 1.0 / cb;
  }
  return sum_cos / sum_sec;
}

std::vector<double> theta_grid_points(const ThetaGrid& grid) {
  // A stop like 1.5708 is pi/2 rounded by hand; snap it rather than reject it.
  const double stop =
      (grid.stop > kPi / 2.0 && grid.stop <= kPi / 2.0 + 1e-3) ? kPi / 2.0
                                                               : grid.stop;
  if (!(grid.start > 0.0) || !(stop <= kPi / 2.0) || !(grid.start <= stop) ||
      grid.count < 1) {
    throw std::invalid_argument("theta grid must satisfy 0 < start <= stop <= pi/2");
  }
  std::vector<double> points(grid.count);
  if (grid.count == 1) {
    points[0] = grid.start;
    return points;
  }
  const double step = (stop - grid.start) / (grid.count - 1);
  for (int j = 0; j < grid.count; ++j) points[j] = grid.start + j * step;
  points.back() = stop;  // exact endpoint
  return points;
}

EfficiencyCurve efficiency_curve(const MeasurementSet& set, const ThetaGrid& grid) {
  EfficiencyCurve curve;
  curve.set_name = set.name;
  curve.n = set.n();
  const std::vector<double> thetas = theta_grid_points(grid);
  curve.samples.reserve(thetas.size());
  if (set.is_continuum()) {
    for (double t : thetas) curve.samples.push_back({t, eta_infinity(t)});
    return curve;
  }
  const MeasurementSet aligned = set.aligned ? set : align_set(set);
  const SteeringBound bound = lhs_bound(aligned);
  for (double t : thetas) {
    const EfficiencyForms forms = critical_efficiency_forms(
        pure_state(t), optimal_alice(t, aligned), aligned, bound);
    curve.samples.push_back({t, forms.pauli_form});
  }
  return curve;
}

}  // namespace qsteer
