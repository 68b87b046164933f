#include "etls/noise.hpp"

#include "etls/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace etls {

// ---------------------------------------------------------------- process

void NoiseModel::validate() const {
    if (!(sigma_f >= 0.0) || !std::isfinite(sigma_f)) {
        throw std::invalid_argument("NoiseModel: sigma_f must be finite and >= 0");
    }
    if (!(tau_c > 0.0) || !std::isfinite(tau_c)) {
        throw std::invalid_argument("NoiseModel: tau_c must be finite and > 0");
    }
}

double NoiseTrajectory::at(double t) const {
    if (samples.empty()) return 0.0;
    if (t <= 0.0 || dt <= 0.0) return samples.front();
    const auto k = static_cast<std::size_t>(std::floor(t / dt + 1e-9));
    return samples[std::min(k, samples.size() - 1)];
}

std::uint64_t trajectory_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + index + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

OrnsteinUhlenbeck::OrnsteinUhlenbeck(const NoiseModel& model, std::uint64_t seed)
    : sigma_(model.sigma_f), tau_(model.tau_c), rng_(seed) {
    model.validate();
    value_ = sigma_ * normal_(rng_);
}

double OrnsteinUhlenbeck::advance(double dt) {
    const double decay = std::exp(-dt / tau_);
    value_ = decay * value_ + sigma_ * std::sqrt(1.0 - decay * decay) * normal_(rng_);
    return value_;
}

NoiseTrajectory sample_noise(const NoiseModel& model, double dt, double T, std::uint64_t seed) {
    model.validate();
    if (!(dt > 0.0) || !(T > 0.0)) throw std::invalid_argument("sample_noise: dt and T must be > 0");
    if (dt > model.tau_c / 10.0 * (1.0 + 1e-12)) {
        throw std::invalid_argument("sample_noise: dt = " + std::to_string(dt) +
                                    " ns exceeds tau_c/10 = " + std::to_string(model.tau_c / 10.0));
    }
    const auto n = static_cast<std::size_t>(std::llround(T / dt));
    NoiseTrajectory traj;
    traj.dt = dt;
    traj.seed = seed;
    traj.samples.reserve(n + 1);
    OrnsteinUhlenbeck ou(model, seed);
    traj.samples.push_back(ou.value());
    for (std::size_t k = 0; k < n; ++k) traj.samples.push_back(ou.advance(dt));
    return traj;
}

double spectral_density(const NoiseModel& model, double omega) {
    model.validate();
    const double wt = omega * model.tau_c;
    return 2.0 * model.sigma_f * model.sigma_f * model.tau_c / (1.0 + wt * wt);
}

double ou_coherence_ratio(const NoiseModel& model, double t) {
    // Relative phase 4π∫f between |0_a⟩ and |1_a⟩; Gaussian with
    // Var ∫f = 2σ²τ²(t/τ − 1 + e^{−t/τ}).
    const double s = model.sigma_f;
    const double tau = model.tau_c;
    const double var_integral = 2.0 * s * s * tau * tau * (t / tau - 1.0 + std::exp(-t / tau));
    return std::exp(-8.0 * std::numbers::pi * std::numbers::pi * var_integral);
}

// ------------------------------------------------------------ idle checks

namespace {

double default_noise_dt(const NoiseModel& model, double dt) { return dt > 0.0 ? dt : model.tau_c / 10.0; }

}  // namespace

double noisy_qubit_deviation(const Vector2c& qubit, const SystemParams& params,
                             const NoiseModel& model, double T, std::size_t n_traj,
                             std::uint64_t seed, double dt) {
    params.validate();
    model.validate();
    if (n_traj == 0) throw std::invalid_argument("n_traj must be >= 1");
    if (!(T > 0.0)) throw std::invalid_argument("T must be > 0");
    dt = default_noise_dt(model, dt);
    const auto n = static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
    const double h = T / static_cast<double>(n);

    Vector2c ground = Vector2c::Zero();
    ground(kEtlsGround) = 1.0;
    const JointState initial = kron(qubit.normalized(), ground);
    const Matrix4c h0 = kTwoPi * build_hamiltonian(params);
    const Matrix4c noise_op = kTwoPi * kron(pauli::identity(), pauli::z());

    const JointState quiet = unitary_step(h0, T) * initial;
    const Matrix2c reference = partial_trace_etls(projector(quiet));

    Matrix2c average = Matrix2c::Zero();
    for (std::size_t i = 0; i < n_traj; ++i) {
        OrnsteinUhlenbeck ou(model, trajectory_seed(seed, i));
        JointState psi = initial;
        for (std::size_t k = 0; k < n; ++k) {
            psi = unitary_step(Matrix4c(h0 + ou.value() * noise_op), h) * psi;
            ou.advance(h);
        }
        average += partial_trace_etls(projector(psi));
    }
    average /= static_cast<double>(n_traj);
    return trace_distance(average, reference);
}

double idle_immunity_check(cplx c0, cplx c1, const SystemParams& params, const NoiseModel& model,
                           double T, std::size_t n_traj, std::uint64_t seed, double dt) {
    if (params.t0a != 0.0) {
        throw std::invalid_argument("idle immunity requires t0a = 0 (ETLS tunneling breaks [H0, sz_a] = 0)");
    }
    if (std::abs(std::norm(c0) + std::norm(c1) - 1.0) > 1e-9) {
        throw std::invalid_argument("idle_immunity_check: |c0|^2 + |c1|^2 must be 1");
    }
    const DressedSpectrum s = dressed_spectrum(params);
    const Vector2c qubit = c0 * qubit_ground(s.theta) + c1 * qubit_excited(s.theta);
    return noisy_qubit_deviation(qubit, params, model, T, n_traj, seed, dt);
}

std::vector<double> periodogram(const std::vector<double>& samples, double dt,
                                const std::vector<double>& omegas) {
    if (samples.empty() || !(dt > 0.0)) throw std::invalid_argument("periodogram: need samples and dt > 0");
    const double total = dt * static_cast<double>(samples.size());
    std::vector<double> out;
    out.reserve(omegas.size());
    for (double w : omegas) {
        // Rotate by a unit phasor per sample instead of calling cos/sin N times.
        const cplx step = std::exp(kI * w * dt);
        cplx phase{1.0, 0.0};
        cplx sum{0.0, 0.0};
        for (double f : samples) {
            sum += f * phase;
            phase *= step;
        }
        out.push_back(dt * dt / total * std::norm(sum));
    }
    return out;
}

// ---------------------------------------------------------------- dephasing

DephasingResult dephasing_ensemble(cplx c0, cplx c1, const SystemParams& params,
                                   const PulseSpec& pulse, const NoiseModel& model,
                                   std::size_t n_traj, std::uint64_t seed,
                                   const DephasingOptions& options) {
    model.validate();
    if (n_traj == 0) throw std::invalid_argument("dephasing_ensemble: n_traj must be >= 1");
    if (std::abs(std::norm(c0) + std::norm(c1) - 1.0) > 1e-9) {
        throw std::invalid_argument("dephasing_ensemble: |c0|^2 + |c1|^2 must be 1");
    }
    if (options.hold < 0.0) throw std::invalid_argument("dephasing_ensemble: hold must be >= 0");

    const DressedStates d = dressed_states(params);
    const Matrix4c basis = d.basis();
    const JointState initial = c0 * d.g0 + c1 * d.g1;

    const double limit = resolution_dt(params, pulse);
    const double dt = options.dt > 0.0 ? options.dt : limit;
    if (dt > limit * (1.0 + 1e-9)) {
        throw std::invalid_argument("dephasing_ensemble: dt does not resolve the fastest scale");
    }
    const auto n_pulse = static_cast<std::size_t>(std::ceil(pulse.duration / dt - 1e-9));
    const double h = pulse.duration / static_cast<double>(n_pulse);

    const double hold_dt = default_noise_dt(model, options.hold_dt);
    const std::size_t n_hold =
        options.hold > 0.0 ? static_cast<std::size_t>(std::ceil(options.hold / hold_dt - 1e-9)) : 0;
    const double hh = n_hold > 0 ? options.hold / static_cast<double>(n_hold) : 0.0;

    const LabPropagator prop(params, pulse);
    const Matrix4c h0 = kTwoPi * build_hamiltonian(params);
    const Matrix4c noise_op = kTwoPi * kron(pauli::identity(), pauli::z());
    const bool noiseless = model.sigma_f == 0.0;
    const Matrix4c quiet_hold = n_hold > 0 ? unitary_step(h0, hh) : Matrix4c::Identity();

    Matrix4c rho_sum = Matrix4c::Zero();
    std::vector<cplx> coherence_sum(n_hold + 1, cplx{0.0, 0.0});

    for (std::size_t i = 0; i < n_traj; ++i) {
        OrnsteinUhlenbeck ou(model, trajectory_seed(seed, i));
        JointState psi = initial;
        for (std::size_t k = 0; k < n_pulse; ++k) {
            psi = prop.step(h * static_cast<double>(k), h, ou.value()) * psi;
            ou.advance(h);
        }
        auto accumulate = [&](std::size_t slot) {
            const Vector4c amps = basis.adjoint() * psi;
            coherence_sum[slot] += amps(0) * std::conj(amps(3));
        };
        accumulate(0);
        for (std::size_t k = 0; k < n_hold; ++k) {
            psi = (noiseless ? quiet_hold : unitary_step(Matrix4c(h0 + ou.value() * noise_op), hh)) * psi;
            ou.advance(hh);
            accumulate(k + 1);
        }
        rho_sum += projector(psi);
    }

    const double inv = 1.0 / static_cast<double>(n_traj);
    DephasingResult r;
    r.rho = rho_sum * inv;
    const double t_end = pulse.duration + options.hold;
    r.rho_dressed = basis.adjoint() * to_rotating_frame(r.rho, params, t_end) * basis;
    r.target = params.omega_delta != 0.0 ? JointState(c0 * d.g0 + kI * c1 * d.e1)
                                         : JointState(kI * (c0 * d.e0 + c1 * d.e1));
    r.fidelity = std::real(r.target.dot(to_rotating_frame(r.rho, params, t_end) * r.target));
    r.hold_times.reserve(n_hold + 1);
    r.coherence.reserve(n_hold + 1);
    for (std::size_t k = 0; k <= n_hold; ++k) {
        r.hold_times.push_back(hh * static_cast<double>(k));
        r.coherence.push_back(std::abs(coherence_sum[k]) * inv);
    }
    return r;
}

T2Estimate estimate_T2(const NoiseModel& model, const SystemParams& params, const PulseSpec& pulse,
                       const T2Options& options) {
    model.validate();
    if (!(options.window > 0.0)) throw std::invalid_argument("estimate_T2: window must be > 0");
    DephasingOptions dopt;
    dopt.hold = options.window;
    const double c = std::numbers::sqrt2 / 2.0;
    const DephasingResult ens =
        dephasing_ensemble(c, c, params, pulse, model, options.n_traj, options.seed, dopt);

    T2Estimate out;
    out.analytic_rate = 8.0 * std::numbers::pi * std::numbers::pi * spectral_density(model, 0.0);
    out.spectral_density_at_rabi = spectral_density(model, pulse.rabi);
    out.times = ens.hold_times;
    const double c0 = ens.coherence.front();
    if (!(c0 > 0.0)) throw NumericalError("estimate_T2: no coherence at the end of the pulse");
    out.coherence_ratio.reserve(ens.coherence.size());
    for (double v : ens.coherence) out.coherence_ratio.push_back(v / c0);

    if (out.coherence_ratio.back() > 0.9) {
        out.lower_bound = true;
        out.t2 = options.window;
        return out;
    }

    // Least squares on ln(ratio) = a − t/T2 over the leading run above the floor.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < out.times.size(); ++k) {
        const double r = out.coherence_ratio[k];
        if (r < options.fit_floor) break;
        const double x = out.times[k];
        const double y = std::log(r);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 3) {
        throw NumericalError("estimate_T2: only " + std::to_string(n) +
                             " points above the fit floor; decay faster than the probe step");
    }
    const double nn = static_cast<double>(n);
    const double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
    if (!(slope < 0.0)) throw NumericalError("estimate_T2: fitted decay rate is not positive");
    out.fit_rate = -slope;
    out.fit_points = n;
    out.t2 = 1.0 / out.fit_rate;
    return out;
}

}  // namespace etls
