// model.hpp: coupled qubit/ETLS Hamiltonian and its closed-form dressed spectrum.
//
// All energies in this module are linear frequencies in GHz (ħ = 1, h·GHz).
// Integrators convert to rad/ns with etls::angular().

#pragma once

#include "etls/linalg.hpp"

#include <array>

namespace etls {

/// Energy scales of the storage/measurement Hamiltonian
///   H0 = ε0/2 σz^q + t0/2 σx^q + ωa/2 σz^a + t0a/2 σx^a + ωΔ/2 σz^q σz^a.
struct SystemParams {
    double epsilon0 = 13.0;    // qubit bias (GHz), any sign
    double t0 = 1.0;           // qubit tunneling (GHz)
    double omega_a = 11.0;     // ETLS splitting (GHz)
    double t0a = 0.0;          // ETLS tunneling (GHz), 0 during storage
    double omega_delta = 3.0;  // σz^q σz^a coupling (GHz)

    /// Throws std::invalid_argument if any invariant is violated.
    void validate() const;
};

/// Conditional qubit splittings, mixing angles, the four dressed levels and
/// the two conditional ETLS transition frequencies (all GHz / radians).
struct DressedSpectrum {
    double omega_q = 0.0;      // qubit splitting with the ETLS in |0_a⟩
    double omega_q_bar = 0.0;  // qubit splitting with the ETLS in |1_a⟩
    double theta = 0.0;
    double theta_bar = 0.0;
    double e_0q0a = 0.0;
    double e_1q0a = 0.0;
    double e_0bq1a = 0.0;
    double e_1bq1a = 0.0;
    double f_cond_q0 = 0.0;  // E(0̄q1a) − E(0q0a)
    double f_cond_q1 = 0.0;  // E(1̄q1a) − E(1q0a)

    /// Level energies in dressed order (0q0a, 1q0a, 0̄q1a, 1̄q1a).
    std::array<double, 4> levels() const { return {e_0q0a, e_1q0a, e_0bq1a, e_1bq1a}; }
};

/// Dressed eigenvectors of H0 (t0a = 0), in the product basis.
struct DressedStates {
    JointState g0;  // |0_q 0_a⟩
    JointState g1;  // |1_q 0_a⟩
    JointState e0;  // |0̄_q 1_a⟩
    JointState e1;  // |1̄_q 1_a⟩

    /// Unitary whose columns are (g0, g1, e0, e1).
    Matrix4c basis() const;
};

/// Qubit eigenvectors for mixing angle θ in the (↑q, ↓q) basis:
/// |0⟩ = [−sin θ/2, cos θ/2]ᵀ, |1⟩ = [cos θ/2, sin θ/2]ᵀ.
Vector2c qubit_ground(double theta);
Vector2c qubit_excited(double theta);

Matrix4c build_hamiltonian(const SystemParams& params);

/// Requires t0a == 0; throws std::invalid_argument otherwise.
DressedSpectrum dressed_spectrum(const SystemParams& params);
DressedStates dressed_states(const SystemParams& params);

/// ⟨0_q|1̄_q⟩ = sin((θ̄ − θ)/2).
double qubit_overlap(const DressedSpectrum& spectrum);

/// Largest difference between any two eigenvalues of H0 (GHz).
double max_level_splitting(const SystemParams& params);

/// The ETLS-ground qubit state c0|0_q⟩ + c1|1_q⟩ tensored with |0_a⟩.
JointState storage_state(cplx c0, cplx c1, const SystemParams& params);

}  // namespace etls
