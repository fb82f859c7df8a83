#include "qsteer/noise.hpp"

#include "qsteer/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qsteer {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kThetaMin = 1e-3;

void check_theta_range(double theta, const char* who) {
  if (!(theta > 0.0 && theta <= kPi / 2.0 + 1e-12)) {
    throw std::domain_error(std::string(who) + ": theta must lie in (0, pi/2]");
  }
}

void check_epsilon(double epsilon, const char* who) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw std::domain_error(std::string(who) + ": epsilon must lie in [0, 1)");
  }
}

// Pre-resolved geometry so that theta/epsilon sweeps do not redo the
// alignment and bound enumeration at every evaluation.
struct SetContext {
  bool continuum = false;
  double c_n = 0.0;
  std::vector<double> cos_beta;
  std::vector<double> sin_beta;
};

SetContext make_context(const MeasurementSet& set) {
  SetContext ctx;
  if (set.is_continuum()) {
    ctx.continuum = true;
    ctx.c_n = 0.5;
    return ctx;
  }
  const MeasurementSet aligned = set.aligned ? set : align_set(set);
  ctx.c_n = lhs_bound(aligned).c_n;
  ctx.cos_beta.reserve(aligned.directions.size());
  ctx.sin_beta.reserve(aligned.directions.size());
  for (const Vec3& d : aligned.directions) {
    const double cb = std::clamp(d.z(), -1.0, 1.0);
    ctx.cos_beta.push_back(cb);
    ctx.sin_beta.push_back(std::sqrt(1.0 - cb * cb));
  }
  return ctx;
}

// Noiseless eta_c from the aligned geometry: C_n(1 - cos t) over the mean of
// sqrt(cos^2 b + sin^2 t sin^2 b) - cos t cos b.
double eta_c_ctx(const SetContext& ctx, double theta) {
  const double ct = std::cos(theta);
  if (ctx.continuum) return eta_infinity(theta);
  const double st2 = std::sin(theta) * std::sin(theta);
  double mean = 0.0;
  for (size_t k = 0; k < ctx.cos_beta.size(); ++k) {
    const double cb = ctx.cos_beta[k];
    const double sb = ctx.sin_beta[k];
    mean += std::sqrt(cb * cb + st2 * sb * sb) - ct * cb;
  }
  mean /= static_cast<double>(ctx.cos_beta.size());
  return ctx.c_n * (1.0 - ct) / mean;
}

// Mean of cos(alpha_k) cos(beta_k) at the optimal settings, where
// cos(alpha) = cos(beta)/sqrt(cos^2 beta + sin^2 theta sin^2 beta).
double colored_m_ctx(const SetContext& ctx, double theta) {
  const double st2 = std::sin(theta) * std::sin(theta);
  if (ctx.continuum) {
    return integrate(
        [&](double u) { return u * u / std::sqrt(u * u + st2 * (1.0 - u * u)); }, 0.0,
        1.0);
  }
  double mean = 0.0;
  for (size_t k = 0; k < ctx.cos_beta.size(); ++k) {
    const double cb = ctx.cos_beta[k];
    const double sb = ctx.sin_beta[k];
    mean += cb * cb / std::sqrt(cb * cb + st2 * sb * sb);
  }
  return mean / static_cast<double>(ctx.cos_beta.size());
}

double eta_colored_ctx(const SetContext& ctx, double theta, double epsilon) {
  const double ct = std::cos(theta);
  const double term =
      (colored_m_ctx(ctx, theta) - ctx.c_n * ct) / (ctx.c_n * (1.0 - ct));
  return 1.0 / ((1.0 - epsilon) / eta_c_ctx(ctx, theta) + epsilon * term);
}

double eta_white_ctx(const SetContext& ctx, double theta, double epsilon) {
  const double half = std::sin(theta / 2.0);
  return (1.0 + epsilon / (2.0 * (1.0 - epsilon) * half * half)) *
         eta_c_ctx(ctx, theta);
}

double eta_ctx(const SetContext& ctx, double theta, double epsilon, NoiseKind kind) {
  switch (kind) {
    case NoiseKind::colored: return eta_colored_ctx(ctx, theta, epsilon);
    case NoiseKind::white: return eta_white_ctx(ctx, theta, epsilon);
    case NoiseKind::none:
    default: return eta_c_ctx(ctx, theta);
  }
}

NoiseMinimum min_over_theta_ctx(const SetContext& ctx, double epsilon,
                                NoiseKind kind) {
  // Non-positive values signal an unattainable (sign-flipped) regime; treat
  // them as +infinity so the search stays on the physical branch.
  const auto value = [&](double theta) {
    const double eta = eta_ctx(ctx, theta, epsilon, kind);
    return eta > 0.0 ? eta : std::numeric_limits<double>::infinity();
  };

  // Coarse scan to bracket, then golden-section on the bracket.
  constexpr int kScan = 256;
  double best_theta = kThetaMin;
  double best_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kScan; ++i) {
    const double theta = kThetaMin + (kPi / 2.0 - kThetaMin) * i / kScan;
    const double v = value(theta);
    if (v < best_value) {
      best_value = v;
      best_theta = theta;
    }
  }
  const double h = (kPi / 2.0 - kThetaMin) / kScan;
  double lo = std::max(kThetaMin, best_theta - h);
  double hi = std::min(kPi / 2.0, best_theta + h);

  constexpr double kInvPhi = 0.6180339887498949;  // 1/golden ratio
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = value(x1);
  double f2 = value(x2);
  while (hi - lo > 1e-6) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = value(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = value(x2);
    }
  }
  const double theta_star = 0.5 * (lo + hi);
  double eta_star = value(theta_star);
  // Keep the scan winner if the bracket refinement did not improve on it
  // (possible when the minimum sits at the domain edge).
  if (best_value < eta_star) {
    return {best_theta, best_value};
  }
  return {theta_star, eta_star};
}

}  // namespace

double eta_colored(double theta, const MeasurementSet& set, double epsilon) {
  check_theta_range(theta, "eta_colored");
  check_epsilon(epsilon, "eta_colored");
  return eta_colored_ctx(make_context(set), theta, epsilon);
}

double eta_colored_direct(double theta, const MeasurementSet& set, double epsilon) {
  check_theta_range(theta, "eta_colored_direct");
  check_epsilon(epsilon, "eta_colored_direct");
  if (set.is_continuum()) {
    throw std::invalid_argument(
        "eta_colored_direct: density-matrix route needs a finite set");
  }
  const MeasurementSet aligned = set.aligned ? set : align_set(set);
  const SteeringBound bound = lhs_bound(aligned);
  const AliceSettings alice = optimal_alice(theta, aligned);
  return critical_efficiency_forms(colored_state(theta, epsilon), alice, aligned, bound)
      .projector_form;
}

double eta_white(double theta, const MeasurementSet& set, double epsilon) {
  check_theta_range(theta, "eta_white");
  check_epsilon(epsilon, "eta_white");
  return eta_white_ctx(make_context(set), theta, epsilon);
}

NoiseMinimum min_over_theta(const MeasurementSet& set, double epsilon,
                            NoiseKind kind) {
  check_epsilon(epsilon, "min_over_theta");
  return min_over_theta_ctx(make_context(set), epsilon, kind);
}

double crossover_epsilon(const MeasurementSet& set) {
  if (set.is_continuum()) {
    throw std::invalid_argument("crossover_epsilon: finite aligned sets only");
  }
  const SetContext ctx = make_context(set);
  const auto beats_mes = [&](double epsilon) {
    return min_over_theta_ctx(ctx, epsilon, NoiseKind::colored).eta_star < ctx.c_n;
  };
  double lo = 0.0;
  double hi = 1.0 - 1e-9;
  if (!beats_mes(lo)) return 0.0;
  if (beats_mes(hi)) return hi;
  while (hi - lo > 1e-4) {
    const double mid = 0.5 * (lo + hi);
    if (beats_mes(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

NoiseCurve noise_curve(const MeasurementSet& set, double epsilon, NoiseKind kind,
                       const ThetaGrid& grid) {
  check_epsilon(epsilon, "noise_curve");
  NoiseCurve curve;
  curve.set_name = set.name;
  curve.n = set.n();
  curve.epsilon = epsilon;
  curve.kind = kind;
  const SetContext ctx = make_context(set);
  for (double t : theta_grid_points(grid)) {
    curve.samples.push_back({t, eta_ctx(ctx, t, epsilon, kind)});
  }
  return curve;
}

}  // namespace qsteer
