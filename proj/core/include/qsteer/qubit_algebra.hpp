// Small-dimension complex linear algebra for the steering analysis: qubit
// kets and projectors, Pauli operators, two-qubit density matrices in the
// fixed basis |00>,|01>,|10>,|11>, partial traces, expectation values and a
// closed-form 2x2 Hermitian eigendecomposition.  Everything here is the
// brute-force matrix route; the closed forms elsewhere are checked against it.
#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>

namespace qsteer {

using complexd = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2cd;  // single-qubit operators
using Mat4 = Eigen::Matrix4cd;  // two-qubit operators, basis |00>,|01>,|10>,|11>

// Pauli matrices sigma_x, sigma_y, sigma_z.
const std::array<Mat2, 3>& paulis();

// v . sigma for a 3-vector v (not necessarily unit length).
Mat2 pauli_dot(const Vec3& v);

// Rank-1 projector onto the +1 eigenstate of v.sigma, i.e. (I + v.sigma)/2.
// Throws std::domain_error if v is not unit length.
Mat2 bloch_to_projector(const Vec3& v);

struct QubitKet {
  complexd amplitude0{0.0, 0.0};
  complexd amplitude1{0.0, 0.0};

  Eigen::Vector2cd vector() const { return {amplitude0, amplitude1}; }
  Mat2 projector() const;  // |ket><ket|
  Vec3 bloch() const;      // (<sigma_x>, <sigma_y>, <sigma_z>)
};

// Measurement kets, parametrized by polar angle and azimuth:
//   alice: sin(alpha/2)|0> - e^{i phi} cos(alpha/2)|1>
//   bob:   cos(beta/2)|0>  + e^{i phi} sin(beta/2)|1>
// Angles must satisfy 0 <= polar <= pi, 0 <= phi <= 2*pi (domain_error).
QubitKet alice_ket(double alpha, double phi);
QubitKet bob_ket(double beta, double phi);

enum class NoiseKind { none, colored, white };

// The two-qubit family under study: pure state
//   |psi> = cos(theta/2)|01> - sin(theta/2)|10>,
// optionally mixed with colored noise (its diagonal part in {|01>,|10>}) or
// white noise (identity/4) with weight epsilon.
struct TwoQubitState {
  double theta = 0.0;  // entanglement parameter in [0, pi/2]
  NoiseKind noise_kind = NoiseKind::none;
  double epsilon = 0.0;  // noise weight in [0, 1); must be 0 when noise_kind is none
};

TwoQubitState pure_state(double theta);
TwoQubitState colored_state(double theta, double epsilon);
TwoQubitState white_state(double theta, double epsilon);

// Throws std::domain_error (parameter ranges) or std::invalid_argument
// (epsilon != 0 with noise_kind none) when the state is malformed.
void validate(const TwoQubitState& s);

// Density matrix of the (possibly noisy) state.
Mat4 build_state(const TwoQubitState& s);

Mat4 kron(const Mat2& a, const Mat2& b);
Mat2 partial_trace_a(const Mat4& rho);  // trace out the first qubit -> rho_B
Mat2 partial_trace_b(const Mat4& rho);  // trace out the second qubit -> rho_A

enum class Side { A, B };

// <a.sigma x b.sigma> on rho; real by Hermiticity.
double correlation(const Mat4& rho, const Vec3& a, const Vec3& b);

// <v.sigma> on the reduced state of one side.
double local_expectation(const Mat4& rho, Side side, const Vec3& v);

struct Eigen2 {
  std::array<double, 2> values;   // sorted descending
  std::array<QubitKet, 2> kets;   // matching orthonormal eigenvectors
};

// Closed-form (trace/determinant) eigendecomposition of a 2x2 Hermitian
// matrix; throws std::domain_error if the input deviates from Hermitian by
// more than 1e-10.  For m = v.sigma the eigenvalues are +/- |v|.
Eigen2 hermitian2_eigen(const Mat2& m);

}  // namespace qsteer
