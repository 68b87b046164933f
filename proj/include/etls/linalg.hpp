// linalg.hpp: fixed-size operators for the qubit ⊗ ETLS Hilbert space.
//
// Product basis order is (|↑q↑a⟩, |↑q↓a⟩, |↓q↑a⟩, |↓q↓a⟩): index = 2*q + a with
// q, a = 0 for σz = +1 and 1 for σz = −1. Single-system 2×2 matrices use the
// σz order (↑, ↓). The ETLS ground state |0_a⟩ is ↓_a.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>

namespace etls {

using cplx = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;
using Vector2c = Eigen::Vector2cd;
using Vector4c = Eigen::Vector4cd;

/// Four complex amplitudes in the product basis order above.
using JointState = Vector4c;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

/// Linear frequency (GHz) to angular frequency (rad/ns).
constexpr double angular(double ghz) noexcept { return kTwoPi * ghz; }
/// Angular frequency (rad/ns) to linear frequency (GHz).
constexpr double linear(double rad_per_ns) noexcept { return rad_per_ns / kTwoPi; }

// Single-system σz indices.
inline constexpr int kUp = 0;
inline constexpr int kDown = 1;
// ETLS labels in that order: |1_a⟩ = ↑_a, |0_a⟩ = ↓_a.
inline constexpr int kEtlsExcited = kUp;
inline constexpr int kEtlsGround = kDown;

namespace pauli {
Matrix2c identity();
Matrix2c x();
Matrix2c y();
Matrix2c z();
}  // namespace pauli

/// Kronecker product qubit ⊗ etls.
Matrix4c kron(const Matrix2c& qubit, const Matrix2c& etls);
Vector4c kron(const Vector2c& qubit, const Vector2c& etls);

/// exp(−i·H·t) for Hermitian H, via eigendecomposition (unitary to rounding).
Matrix4c unitary_step(const Matrix4c& hamiltonian, double t);
Matrix2c unitary_step(const Matrix2c& hamiltonian, double t);

Matrix2c partial_trace_qubit(const Matrix4c& rho);  // returns ETLS state
Matrix2c partial_trace_etls(const Matrix4c& rho);   // returns qubit state

Matrix4c projector(const Vector4c& psi);

/// ½‖a − b‖₁ for Hermitian a, b.
double trace_distance(const Matrix2c& a, const Matrix2c& b);

/// |⟨a|b⟩|², i.e. fidelity with the global phase removed.
double overlap_fidelity(const Vector4c& a, const Vector4c& b);

double hermiticity_error(const Eigen::Ref<const Eigen::MatrixXcd>& m);
double min_eigenvalue(const Eigen::Ref<const Eigen::MatrixXcd>& hermitian);

}  // namespace etls
