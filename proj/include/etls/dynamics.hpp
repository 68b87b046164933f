// dynamics.hpp: unitary time evolution of the qubit/ETLS pair under H0 plus a
// resonant drive Ω cos(ωd t + φ)·σx^a on the ETLS.
//
// Time is in ns. SystemParams and carriers are linear GHz; Rabi amplitudes are
// angular (rad/ns), so a resonant two-level system flips after π/Ω.

#pragma once

#include "etls/model.hpp"
#include "etls/noise_process.hpp"

#include <optional>
#include <vector>

namespace etls {

enum class Envelope { rectangular };

struct PulseSpec {
    double carrier = 0.0;   // drive frequency (GHz)
    double rabi = 0.0;      // Ω (rad/ns)
    double duration = 0.0;  // ns
    double phase = 0.0;     // carrier phase φ (rad)
    Envelope envelope = Envelope::rectangular;

    void validate() const;
    /// Drive amplitude at time t (rad/ns); zero outside [0, duration).
    double amplitude(double t) const;
};

/// Which conditional transition a pulse addresses.
enum class Branch { q0, q1 };

struct Trajectory {
    std::vector<double> times;       // ns, strictly increasing, times[0] = 0
    std::vector<JointState> states;  // lab frame, product basis
};

/// Largest step accepted by propagate(): 1/(20·max(carrier, level spread)).
double resolution_dt(const SystemParams& params, const std::optional<PulseSpec>& pulse);

/// Midpoint-exponential stepper for H(t) = H0 + drive(t) + f·σz^a, in rad/ns.
class LabPropagator {
public:
    LabPropagator(const SystemParams& params, std::optional<PulseSpec> pulse);

    Matrix4c hamiltonian(double t, double noise_ghz = 0.0) const;
    /// Fourth-order commutator-free Magnus step (two exponentials at the Gauss nodes);
    /// noise held constant over the step.
    Matrix4c step(double t, double dt, double noise_ghz = 0.0) const;

private:
    Matrix4c h0_;
    Matrix4c drive_op_;
    Matrix4c noise_op_;
    std::optional<PulseSpec> pulse_;
};

/// Integrates from 0 to T with ceil(T/dt) equal steps (the last time is exactly T).
/// Throws std::invalid_argument if dt > resolution_dt or the state is not normalized.
Trajectory propagate(const JointState& initial, const SystemParams& params,
                     const std::optional<PulseSpec>& pulse, double dt, double T,
                     const NoiseTrajectory* noise = nullptr);

/// π pulse on the chosen conditional transition. The carrier phase is π so the
/// flip acts as exp(+iπ/2 σx^a), i.e. |0_a⟩ → +i|1_a⟩ in the rotating frame.
PulseSpec pi_pulse(const SystemParams& params, Branch target, double rabi);

/// Maps a lab-frame state at time t into the frame rotating with H0
/// (removes the dressed-level phases e^{−iE_k t}).
JointState to_rotating_frame(const JointState& lab, const SystemParams& params, double t);
Matrix4c to_rotating_frame(const Matrix4c& lab_rho, const SystemParams& params, double t);

struct EntangleResult {
    JointState final_state;  // lab frame at t = pulse.duration
    JointState rotating;     // same state in the H0 rotating frame
    JointState target;       // c0|0q0a⟩ + i c1|1̄q1a⟩ (or the unconditional target)
    double fidelity = 0.0;   // |⟨target|rotating⟩|²
    bool conditional = true;  // false when ωΔ = 0: both branches flip
};

/// Full-carrier simulation of (c0|0_q⟩ + c1|1_q⟩)|0_a⟩ under `pulse`.
/// dt <= 0 selects resolution_dt().
EntangleResult entangle(cplx c0, cplx c1, const SystemParams& params, const PulseSpec& pulse,
                        double dt = 0.0);

/// (rabi/detuning)², both in the same angular units.
double leakage_probability(double rabi, double detuning);

/// Largest step accepted by rotating_frame_propagate(): 1/(20·Ω/2π).
double rotating_resolution_dt(double rabi);

/// Evolves under H_rot = P1 ⊗ (Ω/2)σx^a + 2π f(t) σz^a with P1 = (1 + σz^q)/2.
/// Here the qubit slots are the dressed |1_q⟩ (↑) and |0_q⟩ (↓).
Trajectory rotating_frame_propagate(const JointState& initial, double rabi,
                                    const NoiseTrajectory* noise, double dt, double T);

}  // namespace etls
