// Gauss-Legendre quadrature used for the continuum (n -> infinity) limits,
// where the average over measurement directions becomes an integral over the
// upper hemisphere.
#pragma once

#include <functional>
#include <vector>

namespace qsteer {

struct GaussLegendre {
  std::vector<double> nodes;    // on (-1, 1), ascending
  std::vector<double> weights;  // positive, summing to 2
};

// Nodes and weights of the n-point rule, computed by Newton iteration on the
// Legendre recurrence and cached per n.  Throws std::invalid_argument for
// n < 1.
const GaussLegendre& gauss_legendre(int n);

// Integrate f over [a, b], starting from 64 nodes and doubling until two
// successive estimates agree to rel_tol (relative to max(1, |integral|)).
// Throws std::runtime_error if 4096 nodes are not enough.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10);

}  // namespace qsteer
