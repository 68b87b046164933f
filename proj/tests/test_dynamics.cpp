#include "etls/dynamics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace etls;

namespace {

constexpr double kPi = std::numbers::pi;
const double kRabi = angular(0.05);  // 2π × 50 MHz

SystemParams nominal() { return SystemParams{13.0, 1.0, 11.0, 0.0, 3.0}; }

double etls_excited(const JointState& psi) {
    return partial_trace_qubit(projector(psi))(kEtlsExcited, kEtlsExcited).real();
}

JointState bare(int q, int a) {
    JointState v = JointState::Zero();
    v(2 * q + a) = 1.0;
    return v;
}

}  // namespace

TEST(Propagate, EigenstateIsStationary) {
    const SystemParams p = nominal();
    const DressedStates d = dressed_states(p);
    const double T = 100.0;
    const Trajectory tr = propagate(d.g0, p, std::nullopt, resolution_dt(p, std::nullopt), T);
    const double e = dressed_spectrum(p).e_0q0a;
    for (std::size_t k = 0; k < tr.states.size(); k += 500) {
        EXPECT_NEAR(std::norm(d.g0.dot(tr.states[k])), 1.0, 1e-10);
    }
    const JointState expected = std::exp(-kI * angular(e) * T) * d.g0;
    EXPECT_LE((tr.states.back() - expected).norm(), 1e-8);
    EXPECT_DOUBLE_EQ(tr.times.back(), T);
}

TEST(Propagate, StepIsUnitaryAndNormIsConserved) {
    const SystemParams p = nominal();
    const PulseSpec pulse = pi_pulse(p, Branch::q1, kRabi);
    const LabPropagator prop(p, pulse);
    const double dt = resolution_dt(p, pulse);
    for (double t : {0.0, 1.234, 7.5}) {
        const Matrix4c u = prop.step(t, dt, 0.01);
        EXPECT_LE((u.adjoint() * u - Matrix4c::Identity()).norm(), 1e-12);
    }
    const double T = 1e4 * dt;
    const Trajectory tr = propagate(storage_state(0.6, 0.8, p), p, pulse, dt, T);
    ASSERT_GE(tr.states.size(), 10001u);
    double drift = 0.0;
    for (const auto& s : tr.states) drift = std::max(drift, std::abs(s.norm() - 1.0));
    EXPECT_LE(drift, 1e-8);
    for (std::size_t k = 1; k < tr.times.size(); ++k) ASSERT_GT(tr.times[k], tr.times[k - 1]);
}

TEST(Propagate, RejectsCoarseStepAndUnnormalizedState) {
    const SystemParams p = nominal();
    const PulseSpec pulse = pi_pulse(p, Branch::q1, kRabi);
    const double dt = resolution_dt(p, pulse);
    EXPECT_NEAR(dt, 1.0 / (20.0 * max_level_splitting(p)), 1e-15);
    EXPECT_THROW(propagate(dressed_states(p).g0, p, pulse, 2.0 * dt, 1.0), std::invalid_argument);
    EXPECT_THROW(propagate(2.0 * dressed_states(p).g0, p, pulse, dt, 1.0), std::invalid_argument);
}

TEST(Propagate, ResonantPulseFlipsTheEtlsOnTheQ1Branch) {
    const SystemParams p = nominal();
    const PulseSpec pulse = pi_pulse(p, Branch::q1, kRabi);
    const DressedStates d = dressed_states(p);
    const double dt = resolution_dt(p, pulse);
    EXPECT_GE(etls_excited(propagate(d.g1, p, pulse, dt, pulse.duration).states.back()), 0.999);
    EXPECT_LE(etls_excited(propagate(d.g0, p, pulse, dt, pulse.duration).states.back()), 2e-4);
}

TEST(Propagate, TwoLevelRabiOscillation) {
    // ω_Δ = 0 and t0 = 0: the ETLS decouples into a driven two-level system.
    const SystemParams p{13.0, 0.0, 11.0, 0.0, 0.0};
    PulseSpec pulse = pi_pulse(p, Branch::q1, kRabi);
    pulse.duration = 40.0;
    const double dt = resolution_dt(p, pulse);
    const Trajectory tr = propagate(bare(kDown, kEtlsGround), p, pulse, dt, 40.0);

    // Oracle: RK4 on the 2×2 Schrödinger equation with a much finer step.
    const double w = angular(p.omega_a), wd = angular(pulse.carrier);
    const auto rhs = [&](double t, const Vector2c& a) {
        const double drive = kRabi * std::cos(wd * t + pulse.phase);
        return Vector2c(-kI * (0.5 * w * a(0) + drive * a(1)), -kI * (drive * a(0) - 0.5 * w * a(1)));
    };
    const double h = 1e-4;
    Vector2c a(0.0, 1.0);  // (↑a, ↓a)
    double t = 0.0, worst = 0.0, worst_rwa = 0.0;
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        while (t < tr.times[k] - 1e-12) {
            const double step = std::min(h, tr.times[k] - t);
            const Vector2c k1 = rhs(t, a);
            const Vector2c k2 = rhs(t + step / 2, a + step / 2 * k1);
            const Vector2c k3 = rhs(t + step / 2, a + step / 2 * k2);
            const Vector2c k4 = rhs(t + step, a + step * k3);
            a += step / 6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            t += step;
        }
        worst = std::max(worst, std::abs(etls_excited(tr.states[k]) - std::norm(a(0))));
        const double rwa = std::pow(std::sin(kRabi * t / 2.0), 2);
        worst_rwa = std::max(worst_rwa, std::abs(etls_excited(tr.states[k]) - rwa));
    }
    EXPECT_LE(worst, 1e-4);
    // Counter-rotating micromotion is first order in Ω/ω.
    EXPECT_LE(worst_rwa, 2.0 * kRabi / w);
    EXPECT_GT(worst_rwa, 0.1 * kRabi / w);
}

TEST(Propagate, StepHalvingConverges) {
    const SystemParams p = nominal();
    const PulseSpec pulse = pi_pulse(p, Branch::q1, kRabi);
    const DressedStates d = dressed_states(p);
    const JointState psi = std::sqrt(0.5) * (d.g0 + d.g1);
    const double dt = resolution_dt(p, pulse);
    const auto final_state = [&](double h) { return propagate(psi, p, pulse, h, pulse.duration).states.back(); };
    const JointState fine = final_state(dt / 8.0);
    const double e1 = (final_state(dt) - fine).norm();
    const double e2 = (final_state(dt / 2.0) - fine).norm();
    EXPECT_LE(e1, 1e-5);
    // Fourth-order scheme: halving the step cuts the error by about 16.
    EXPECT_GT(e1 / e2, 10.0);
}

TEST(PiPulse, DurationAndCarrier) {
    const SystemParams p = nominal();
    const PulseSpec a = pi_pulse(p, Branch::q1, angular(0.05));
    EXPECT_NEAR(a.duration, 10.0, 1e-12);
    EXPECT_NEAR(a.carrier, 13.99, 0.05);
    EXPECT_NEAR(a.rabi * a.duration, kPi, 1e-12);
    const PulseSpec b = pi_pulse(p, Branch::q1, angular(0.1));
    EXPECT_NEAR(b.duration, 5.0, 1e-12);
    const PulseSpec c = pi_pulse(p, Branch::q0, angular(0.05));
    EXPECT_NEAR(c.carrier, dressed_spectrum(p).f_cond_q0, 1e-12);
    EXPECT_THROW(pi_pulse(p, Branch::q1, 0.0), std::invalid_argument);
}

TEST(Entangle, SingleBranchInputs) {
    const SystemParams p = nominal();
    const PulseSpec pulse = pi_pulse(p, Branch::q1, kRabi);
    const EntangleResult r0 = entangle(1.0, 0.0, p, pulse);
    EXPECT_GE(overlap_fidelity(dressed_states(p).g0, r0.rotating), 1.0 - 2e-4);
    const EntangleResult r1 = entangle(0.0, 1.0, p, pulse);
    EXPECT_GE(etls_excited(r1.final_state), 0.999);
}

TEST(Entangle, EqualSuperpositionReachesTarget) {
    const SystemParams p = nominal();
    const double c = std::sqrt(0.5);
    const EntangleResult r = entangle(c, c, p, pi_pulse(p, Branch::q1, kRabi));
    EXPECT_TRUE(r.conditional);
    EXPECT_GE(r.fidelity, 0.99);
    EXPECT_NEAR(r.final_state.norm(), 1.0, 1e-10);
}

TEST(Entangle, ZeroCouplingFlipsUnconditionally) {
    SystemParams p = nominal();
    p.omega_delta = 0.0;
    const double c = std::sqrt(0.5);
    const EntangleResult r = entangle(c, c, p, pi_pulse(p, Branch::q1, kRabi));
    EXPECT_FALSE(r.conditional);
    const DressedStates d = dressed_states(p);
    EXPECT_LE((r.target - kI * c * (d.e0 + d.e1)).norm(), 1e-15);
    EXPECT_GE(r.fidelity, 0.99);
}

TEST(Entangle, RejectsUnnormalizedAmplitudes) {
    const SystemParams p = nominal();
    EXPECT_THROW(entangle(1.0, 1.0, p, pi_pulse(p, Branch::q1, kRabi)), std::invalid_argument);
}

TEST(Leakage, NominalBoundAndLimits) {
    EXPECT_NEAR(leakage_probability(angular(0.05), angular(6.0)), 6.944e-5, 1e-8);
    EXPECT_LT(leakage_probability(angular(0.05), angular(6.0)), 1e-4);
    double prev = 1.0;
    for (double d : {1.0, 10.0, 100.0, 1e4, 1e8}) {
        const double v = leakage_probability(angular(0.05), angular(d));
        EXPECT_LT(v, prev);
        prev = v;
    }
    EXPECT_LT(prev, 1e-18);
    EXPECT_THROW(leakage_probability(1.0, 0.0), std::invalid_argument);
}

TEST(Leakage, OffResonantPeakMatchesEstimate) {
    const SystemParams p{13.0, 0.0, 11.0, 0.0, 0.0};
    for (double ratio : {10.0, 20.0}) {
        const double detuning = ratio * kRabi;
        PulseSpec pulse;
        pulse.carrier = p.omega_a + linear(detuning);
        pulse.rabi = kRabi;
        pulse.duration = 3.0 * 2.0 * kPi / detuning;
        const Trajectory tr = propagate(bare(kDown, kEtlsGround), p, pulse, resolution_dt(p, pulse), pulse.duration);
        double peak = 0.0;
        for (const auto& s : tr.states) peak = std::max(peak, etls_excited(s));
        const double generalized = kRabi * kRabi / (kRabi * kRabi + detuning * detuning);
        EXPECT_GT(peak / generalized, 0.5) << ratio;
        EXPECT_LT(peak / generalized, 2.0) << ratio;
        EXPECT_GT(peak / leakage_probability(kRabi, detuning), 0.5) << ratio;
        EXPECT_LT(peak / leakage_probability(kRabi, detuning), 2.0) << ratio;
    }
}

TEST(RotatingFrame, QubitZeroBranchIsUntouched) {
    const JointState psi = bare(kDown, kEtlsGround);
    const Trajectory tr = rotating_frame_propagate(psi, kRabi, nullptr, rotating_resolution_dt(kRabi), 10.0);
    for (const auto& s : tr.states) EXPECT_LE((s - psi).norm(), 1e-15);
}

TEST(RotatingFrame, QubitOneBranchFlipsExactly) {
    const JointState psi = bare(kUp, kEtlsGround);
    const Trajectory tr = rotating_frame_propagate(psi, kRabi, nullptr, rotating_resolution_dt(kRabi), kPi / kRabi);
    EXPECT_NEAR(etls_excited(tr.states.back()), 1.0, 1e-10);
}

TEST(RotatingFrame, AgreesWithFullCarrierPropagation) {
    const SystemParams p = nominal();
    const PulseSpec pulse = pi_pulse(p, Branch::q1, kRabi);
    const DressedStates d = dressed_states(p);
    const double c = std::sqrt(0.5);
    // A step that divides 1 ns so the lab samples land on whole nanoseconds.
    const double dt = 1.0 / std::ceil(1.0 / resolution_dt(p, pulse));
    const Trajectory lab = propagate(c * d.g0 + c * d.g1, p, pulse, dt, pulse.duration);
    // Same amplitudes in the bare labels of the rotating model: |1_q⟩ ↔ ↑_q.
    const JointState rot0 = c * bare(kDown, kEtlsGround) + c * bare(kUp, kEtlsGround);
    const Trajectory rot = rotating_frame_propagate(rot0, kRabi, nullptr, 0.05, pulse.duration);
    const Matrix4c basis = d.basis();
    for (int step = 0; step <= 10; ++step) {
        const double t = step * 1.0;
        const auto li = static_cast<std::size_t>(std::llround(t / lab.times[1]));
        const auto ri = static_cast<std::size_t>(std::llround(t / rot.times[1]));
        ASSERT_NEAR(lab.times[li], t, 1e-9);
        ASSERT_NEAR(rot.times[ri], t, 1e-9);
        const Vector4c dressed = basis.adjoint() * lab.states[li];
        // Rotating model index order maps (↑q↑a, ↑q↓a, ↓q↑a, ↓q↓a) to (1̄1a, 1 0a, 0̄1a, 0 0a).
        const Vector4c& r = rot.states[ri];
        EXPECT_NEAR(std::norm(dressed(3)), std::norm(r(0)), 1e-2) << t;
        EXPECT_NEAR(std::norm(dressed(1)), std::norm(r(1)), 1e-2) << t;
        EXPECT_NEAR(std::norm(dressed(2)), std::norm(r(2)), 1e-2) << t;
        EXPECT_NEAR(std::norm(dressed(0)), std::norm(r(3)), 1e-2) << t;
    }
}

TEST(Propagate, IsDeterministic) {
    const SystemParams p = nominal();
    const PulseSpec pulse = pi_pulse(p, Branch::q1, kRabi);
    const auto a = propagate(storage_state(0.6, 0.8, p), p, pulse, resolution_dt(p, pulse), 2.0);
    const auto b = propagate(storage_state(0.6, 0.8, p), p, pulse, resolution_dt(p, pulse), 2.0);
    ASSERT_EQ(a.states.size(), b.states.size());
    for (std::size_t k = 0; k < a.states.size(); ++k) ASSERT_EQ(a.states[k], b.states[k]);
}
