#include "qsteer/qubit_algebra.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qsteer {

namespace {

constexpr complexd kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

// Guard tolerance for "is this a unit vector / valid angle" checks.  Looser
// than machine precision so that vectors coming out of rotations pass, but
// tight enough to catch genuine misuse.
constexpr double kUnitTol = 1e-9;

}  // namespace

const std::array<Mat2, 3>& paulis() {
  static const std::array<Mat2, 3> sigma = [] {
    std::array<Mat2, 3> s;
    s[0] << 0, 1, 1, 0;
    s[1] << 0, -kI, kI, 0;
    s[2] << 1, 0, 0, -1;
    return s;
  }();
  return sigma;
}

Mat2 pauli_dot(const Vec3& v) {
  const auto& s = paulis();
  return v.x() * s[0] + v.y() * s[1] + v.z() * s[2];
}

Mat2 bloch_to_projector(const Vec3& v) {
  if (std::abs(v.squaredNorm() - 1.0) > kUnitTol) {
    throw std::domain_error("bloch_to_projector: direction is not unit length");
  }
  return 0.5 * (Mat2::Identity() + pauli_dot(v));
}

Mat2 QubitKet::projector() const {
  Eigen::Vector2cd k = vector();
  return k * k.adjoint();
}

Vec3 QubitKet::bloch() const {
  const complexd cross = std::conj(amplitude0) * amplitude1;
  return {2.0 * cross.real(), 2.0 * cross.imag(),
          std::norm(amplitude0) - std::norm(amplitude1)};
}

namespace {

void check_angles(double polar, double phi, const char* who) {
  if (!(polar >= -kUnitTol && polar <= kPi + kUnitTol)) {
    throw std::domain_error(std::string(who) + ": polar angle outside [0, pi]");
  }
  if (!(phi >= -kUnitTol && phi <= 2.0 * kPi + kUnitTol)) {
    throw std::domain_error(std::string(who) + ": azimuth outside [0, 2*pi]");
  }
}

}  // namespace

QubitKet alice_ket(double alpha, double phi) {
  check_angles(alpha, phi, "alice_ket");
  return {std::sin(alpha / 2.0), -std::exp(kI * phi) * std::cos(alpha / 2.0)};
}

QubitKet bob_ket(double beta, double phi) {
  check_angles(beta, phi, "bob_ket");
  return {std::cos(beta / 2.0), std::exp(kI * phi) * std::sin(beta / 2.0)};
}

TwoQubitState pure_state(double theta) { return {theta, NoiseKind::none, 0.0}; }

TwoQubitState colored_state(double theta, double epsilon) {
  return {theta, NoiseKind::colored, epsilon};
}

TwoQubitState white_state(double theta, double epsilon) {
  return {theta, NoiseKind::white, epsilon};
}

void validate(const TwoQubitState& s) {
  if (!(s.theta >= 0.0 && s.theta <= kPi / 2.0 + kUnitTol)) {
    throw std::domain_error("TwoQubitState: theta outside [0, pi/2]");
  }
  if (!(s.epsilon >= 0.0 && s.epsilon < 1.0)) {
    throw std::domain_error("TwoQubitState: epsilon outside [0, 1)");
  }
  if (s.noise_kind == NoiseKind::none && s.epsilon != 0.0) {
    throw std::invalid_argument(
        "TwoQubitState: epsilon must be 0 when no noise kind is set");
  }
}

Mat4 build_state(const TwoQubitState& s) {
  validate(s);
  const double c = std::cos(s.theta / 2.0);
  const double sn = std::sin(s.theta / 2.0);
  // |psi> = c|01> - sn|10>; basis order |00>,|01>,|10>,|11>.
  Eigen::Vector4cd psi{0.0, c, -sn, 0.0};
  Mat4 rho = psi * psi.adjoint();
  if (s.noise_kind == NoiseKind::colored) {
    Mat4 diag = Mat4::Zero();
    diag(1, 1) = c * c;
    diag(2, 2) = sn * sn;
    rho = (1.0 - s.epsilon) * rho + s.epsilon * diag;
  } else if (s.noise_kind == NoiseKind::white) {
    rho = (1.0 - s.epsilon) * rho + (s.epsilon / 4.0) * Mat4::Identity();
  }
  return rho;
}

Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    }
  }
  return out;
}

Mat2 partial_trace_a(const Mat4& rho) {
  Mat2 out = Mat2::Zero();
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int bp = 0; bp < 2; ++bp) {
        out(b, bp) += rho(2 * a + b, 2 * a + bp);
      }
    }
  }
  return out;
}

Mat2 partial_trace_b(const Mat4& rho) {
  Mat2 out = Mat2::Zero();
  for (int a = 0; a < 2; ++a) {
    for (int ap = 0; ap < 2; ++ap) {
      for (int b = 0; b < 2; ++b) {
        out(a, ap) += rho(2 * a + b, 2 * ap + b);
      }
    }
  }
  return out;
}

double correlation(const Mat4& rho, const Vec3& a, const Vec3& b) {
  return (kron(pauli_dot(a), pauli_dot(b)) * rho).trace().real();
}

double local_expectation(const Mat4& rho, Side side, const Vec3& v) {
  const Mat2 reduced = (side == Side::A) ? partial_trace_b(rho) : partial_trace_a(rho);
  return (pauli_dot(v) * reduced).trace().real();
}

Eigen2 hermitian2_eigen(const Mat2& m) {
  constexpr double kHermTol = 1e-10;
  if (std::abs(m(0, 0).imag()) > kHermTol || std::abs(m(1, 1).imag()) > kHermTol ||
      std::abs(m(0, 1) - std::conj(m(1, 0))) > kHermTol) {
    throw std::domain_error("hermitian2_eigen: matrix is not Hermitian");
  }
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const complexd b = 0.5 * (m(0, 1) + std::conj(m(1, 0)));  // symmetrized off-diagonal
  const double mean = 0.5 * (a + d);
  const double radius = std::hypot(0.5 * (a - d), std::abs(b));
  Eigen2 out;
  out.values = {mean + radius, mean - radius};
  if (radius < 1e-300) {  // scalar multiple of identity: any orthonormal basis
    out.kets = {QubitKet{1.0, 0.0}, QubitKet{0.0, 1.0}};
    return out;
  }
  // Eigenvector for the top eigenvalue: both (b, lambda - a) and
  // (lambda - d, conj(b)) solve (m - lambda)k = 0; take the better-conditioned
  // one (larger norm) to avoid cancellation when b is small.
  const double lambda = out.values[0];
  const Eigen::Vector2cd cand1{b, complexd(lambda - a, 0.0)};
  const Eigen::Vector2cd cand2{complexd(lambda - d, 0.0), std::conj(b)};
  Eigen::Vector2cd top = (cand1.norm() >= cand2.norm()) ? cand1 : cand2;
  top.normalize();
  out.kets[0] = {top(0), top(1)};
  // The orthogonal complement in C^2 is unique up to phase.
  out.kets[1] = {-std::conj(top(1)), std::conj(top(0))};
  return out;
}

}  // namespace qsteer
