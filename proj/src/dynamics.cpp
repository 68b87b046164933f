#include "etls/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace etls {

namespace {

constexpr double kNormTolerance = 1e-9;
constexpr double kDtSlack = 1e-9;

void require_normalized(const JointState& psi) {
    if (std::abs(psi.squaredNorm() - 1.0) > kNormTolerance) {
        throw std::invalid_argument("initial state is not normalized (|psi|^2 = " +
                                    std::to_string(psi.squaredNorm()) + ")");
    }
}

std::size_t step_count(double dt, double T) {
    if (!(dt > 0.0) || !(T > 0.0)) throw std::invalid_argument("dt and T must be positive");
    return static_cast<std::size_t>(std::ceil(T / dt - kDtSlack));
}

}  // namespace

void PulseSpec::validate() const {
    if (!(rabi > 0.0)) throw std::invalid_argument("PulseSpec: rabi must be > 0");
    if (!(duration > 0.0)) throw std::invalid_argument("PulseSpec: duration must be > 0");
    if (!(carrier >= 0.0) || !std::isfinite(carrier)) {
        throw std::invalid_argument("PulseSpec: carrier must be finite and >= 0");
    }
}

double PulseSpec::amplitude(double t) const {
    return (t >= 0.0 && t < duration) ? rabi : 0.0;
}

double resolution_dt(const SystemParams& params, const std::optional<PulseSpec>& pulse) {
    double fastest = max_level_splitting(params);
    if (pulse) fastest = std::max(fastest, pulse->carrier);
    if (fastest <= 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / (20.0 * fastest);
}

LabPropagator::LabPropagator(const SystemParams& params, std::optional<PulseSpec> pulse)
    : h0_(kTwoPi * build_hamiltonian(params)),
      drive_op_(kron(pauli::identity(), pauli::x())),
      noise_op_(kTwoPi * kron(pauli::identity(), pauli::z())),
      pulse_(std::move(pulse)) {
    params.validate();
    if (pulse_) pulse_->validate();
}

Matrix4c LabPropagator::hamiltonian(double t, double noise_ghz) const {
    Matrix4c h = h0_;
    if (pulse_) {
        const double amp = pulse_->amplitude(t);
        if (amp != 0.0) h += amp * std::cos(angular(pulse_->carrier) * t + pulse_->phase) * drive_op_;
    }
    if (noise_ghz != 0.0) h += noise_ghz * noise_op_;
    return h;
}

Matrix4c LabPropagator::step(double t, double dt, double noise_ghz) const {
    // Fourth-order commutator-free Magnus step on the two Gauss nodes.
    static const double r = std::sqrt(3.0) / 6.0;
    const Matrix4c h1 = hamiltonian(t + (0.5 - r) * dt, noise_ghz);
    const Matrix4c h2 = hamiltonian(t + (0.5 + r) * dt, noise_ghz);
    const double a1 = 0.25 + r, a2 = 0.25 - r;
    return unitary_step(Matrix4c(a2 * h1 + a1 * h2), dt) * unitary_step(Matrix4c(a1 * h1 + a2 * h2), dt);
}

Trajectory propagate(const JointState& initial, const SystemParams& params,
                     const std::optional<PulseSpec>& pulse, double dt, double T,
                     const NoiseTrajectory* noise) {
    require_normalized(initial);
    const double limit = resolution_dt(params, pulse);
    if (dt > limit * (1.0 + kDtSlack)) {
        throw std::invalid_argument("dt = " + std::to_string(dt) +
                                    " ns does not resolve the fastest scale (max " +
                                    std::to_string(limit) + " ns)");
    }
    const std::size_t n = step_count(dt, T);
    const double h = T / static_cast<double>(n);
    const LabPropagator prop(params, pulse);

    Trajectory traj;
    traj.times.reserve(n + 1);
    traj.states.reserve(n + 1);
    traj.times.push_back(0.0);
    traj.states.push_back(initial);
    JointState psi = initial;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = h * static_cast<double>(k);
        const double f = noise ? noise->at(t) : 0.0;
        psi = prop.step(t, h, f) * psi;
        traj.times.push_back(h * static_cast<double>(k + 1));
        traj.states.push_back(psi);
    }
    return traj;
}

PulseSpec pi_pulse(const SystemParams& params, Branch target, double rabi) {
    if (!(rabi > 0.0)) throw std::invalid_argument("pi_pulse: rabi must be > 0");
    const DressedSpectrum s = dressed_spectrum(params);
    PulseSpec p;
    p.carrier = target == Branch::q1 ? s.f_cond_q1 : s.f_cond_q0;
    p.rabi = rabi;
    p.duration = std::numbers::pi / rabi;
    p.phase = std::numbers::pi;
    return p;
}

namespace {
Matrix4c frame_rotation(const SystemParams& params, double t) {
    const Matrix4c basis = dressed_states(params).basis();
    const auto levels = dressed_spectrum(params).levels();
    Matrix4c phases = Matrix4c::Zero();
    for (int k = 0; k < 4; ++k) phases(k, k) = std::exp(kI * angular(levels[k]) * t);
    return basis * phases * basis.adjoint();
}
}  // namespace

JointState to_rotating_frame(const JointState& lab, const SystemParams& params, double t) {
    return frame_rotation(params, t) * lab;
}

Matrix4c to_rotating_frame(const Matrix4c& lab_rho, const SystemParams& params, double t) {
    const Matrix4c r = frame_rotation(params, t);
    return r * lab_rho * r.adjoint();
}

EntangleResult entangle(cplx c0, cplx c1, const SystemParams& params, const PulseSpec& pulse,
                        double dt) {
    if (std::abs(std::norm(c0) + std::norm(c1) - 1.0) > kNormTolerance) {
        throw std::invalid_argument("entangle: |c0|^2 + |c1|^2 must be 1");
    }
    const DressedStates d = dressed_states(params);
    const JointState initial = c0 * d.g0 + c1 * d.g1;
    if (dt <= 0.0) dt = resolution_dt(params, pulse);
    const Trajectory traj = propagate(initial, params, pulse, dt, pulse.duration);

    EntangleResult r;
    r.final_state = traj.states.back();
    r.rotating = to_rotating_frame(r.final_state, params, pulse.duration);
    r.conditional = params.omega_delta != 0.0;
    r.target = r.conditional ? JointState(c0 * d.g0 + kI * c1 * d.e1)
                             : JointState(kI * (c0 * d.e0 + c1 * d.e1));
    r.fidelity = overlap_fidelity(r.target, r.rotating);
    return r;
}

double leakage_probability(double rabi, double detuning) {
    if (detuning == 0.0) throw std::invalid_argument("leakage_probability: zero detuning");
    const double ratio = rabi / detuning;
    return ratio * ratio;
}

double rotating_resolution_dt(double rabi) {
    if (!(rabi > 0.0)) throw std::invalid_argument("rabi must be > 0");
    return 1.0 / (20.0 * linear(rabi));
}

Trajectory rotating_frame_propagate(const JointState& initial, double rabi,
                                    const NoiseTrajectory* noise, double dt, double T) {
    require_normalized(initial);
    const double limit = rotating_resolution_dt(rabi);
    if (dt > limit * (1.0 + kDtSlack)) {
        throw std::invalid_argument("dt = " + std::to_string(dt) +
                                    " ns does not resolve the Rabi period (max " +
                                    std::to_string(limit) + " ns)");
    }
    const std::size_t n = step_count(dt, T);
    const double h = T / static_cast<double>(n);

    Matrix2c p1 = Matrix2c::Zero();
    p1(kUp, kUp) = 1.0;
    const Matrix4c drive = 0.5 * rabi * kron(p1, pauli::x());
    const Matrix4c noise_op = kTwoPi * kron(pauli::identity(), pauli::z());
    const Matrix4c quiet_step = unitary_step(drive, h);

    Trajectory traj;
    traj.times.reserve(n + 1);
    traj.states.reserve(n + 1);
    traj.times.push_back(0.0);
    traj.states.push_back(initial);
    JointState psi = initial;
    for (std::size_t k = 0; k < n; ++k) {
        const double f = noise ? noise->at(h * static_cast<double>(k)) : 0.0;
        psi = (f == 0.0 ? quiet_step : unitary_step(Matrix4c(drive + f * noise_op), h)) * psi;
        traj.times.push_back(h * static_cast<double>(k + 1));
        traj.states.push_back(psi);
    }
    return traj;
}

}  // namespace etls
