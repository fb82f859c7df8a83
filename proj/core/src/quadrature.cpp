#include "qsteer/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace qsteer {

namespace {

GaussLegendre compute_rule(int n) {
  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Roots of P_n come in +/- pairs; solve for the upper half from the
  // Chebyshev-like initial guess and mirror.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Legendre recurrence: (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}.
      double p0 = 1.0, p1 = x;
      for (int k = 1; k < n; ++k) {
        const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-15) break;
    }
    rule.nodes[n - 1 - i] = x;
    rule.nodes[i] = -x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[n - 1 - i] = w;
    rule.weights[i] = w;
  }
  return rule;
}

}  // namespace

const GaussLegendre& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  static std::map<int, GaussLegendre> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
  return it->second;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double previous = 0.0;
  bool have_previous = false;
  for (int n = 64; n <= 4096; n *= 2) {
    const GaussLegendre& rule = gauss_legendre(n);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    const double estimate = half * sum;
    if (have_previous &&
        std::abs(estimate - previous) <= rel_tol * std::max(1.0, std::abs(estimate))) {
      return estimate;
    }
    previous = estimate;
    have_previous = true;
  }
  throw std::runtime_error("integrate: quadrature did not converge");
}

}  // namespace qsteer
