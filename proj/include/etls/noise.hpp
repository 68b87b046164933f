// noise.hpp: ensemble effects of the classical flux noise on the qubit/ETLS pair.

#pragma once

#include "etls/dynamics.hpp"
#include "etls/noise_process.hpp"

#include <cstdint>
#include <vector>

namespace etls {

/// Trace distance between the ensemble-averaged qubit state under H0 + f(t)σz^a
/// and the noiseless qubit state after time T, starting from (c0|0_q⟩ + c1|1_q⟩)|0_a⟩.
/// Requires t0a = 0; with t0a = 0 H0 commutes with σz^a and the result is ~1e−15.
/// dt <= 0 selects tau_c/10.
double idle_immunity_check(cplx c0, cplx c1, const SystemParams& params, const NoiseModel& model,
                           double T, std::size_t n_traj, std::uint64_t seed = 1, double dt = 0.0);

/// Same quantity without the storage guard; accepts t0a != 0 (negative control).
/// The initial ETLS state is |↓_a⟩ tensored with the bare-basis qubit vector.
double noisy_qubit_deviation(const Vector2c& qubit, const SystemParams& params,
                             const NoiseModel& model, double T, std::size_t n_traj,
                             std::uint64_t seed, double dt = 0.0);

struct DephasingOptions {
    double dt = 0.0;       // pulse step; <= 0 selects resolution_dt()
    double hold = 0.0;     // free evolution after the pulse (ns)
    double hold_dt = 0.0;  // hold step; <= 0 selects tau_c/10
};

struct DephasingResult {
    Matrix4c rho;          // lab frame, product basis, at the end of the hold
    Matrix4c rho_dressed;  // H0 rotating frame, dressed order (0q0a, 1q0a, 0̄q1a, 1̄q1a)
    JointState target;     // ideal entangled state (rotating frame)
    double fidelity = 0.0;
    std::vector<double> hold_times;  // ns after the pulse; first entry 0
    std::vector<double> coherence;   // |ρ(0q0a, 1̄q1a)| at each hold time
};

/// Average of pure-state projectors over n_traj independent noise trajectories.
DephasingResult dephasing_ensemble(cplx c0, cplx c1, const SystemParams& params,
                                   const PulseSpec& pulse, const NoiseModel& model,
                                   std::size_t n_traj, std::uint64_t seed,
                                   const DephasingOptions& options = {});

struct T2Options {
    std::size_t n_traj = 200;
    std::uint64_t seed = 7;
    double window = 4000.0;  // probed hold duration (ns)
    double fit_floor = 0.2;  // fit only points with coherence ratio above this
};

struct T2Estimate {
    double t2 = 0.0;           // ns; equals the window when lower_bound is set
    bool lower_bound = false;  // decay < 10% over the window
    double fit_rate = 0.0;     // fitted decay rate (1/ns)
    std::size_t fit_points = 0;
    // Diagnostics only: Gaussian-dephasing rate 8π²·S(0) for OU and S(Ω_X).
    double analytic_rate = 0.0;
    double spectral_density_at_rabi = 0.0;
    std::vector<double> times;
    std::vector<double> coherence_ratio;  // |ρ(t)| / |ρ(0)|
};

/// 1/e time of the post-pulse |0q0a⟩⟨1̄q1a| coherence, from a least-squares fit of
/// ln|ρ(t)| on an equal-weight superposition. Throws NumericalError when too few
/// points lie above fit_floor.
T2Estimate estimate_T2(const NoiseModel& model, const SystemParams& params,
                       const PulseSpec& pulse, const T2Options& options = {});

/// Ratio |ρ(t)|/|ρ(0)| predicted for pure OU dephasing of a σz^a coherence.
double ou_coherence_ratio(const NoiseModel& model, double t);

}  // namespace etls
