// noise_process.hpp: classical flux noise f(t) coupled as f(t)·σz^a.
//
// The only process kind is Ornstein–Uhlenbeck: stationary, Gaussian, zero mean,
// autocovariance σf² exp(−|Δt|/τc), Lorentzian spectral density.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace etls {

enum class NoiseKind { ornstein_uhlenbeck };

struct NoiseModel {
    double sigma_f = 0.0008;  // rms amplitude of f (GHz)
    double tau_c = 10.0;      // correlation time (ns)
    NoiseKind kind = NoiseKind::ornstein_uhlenbeck;

    void validate() const;
};

/// Zero-order-hold samples of f on a uniform grid: samples[k] = f(k·dt).
struct NoiseTrajectory {
    double dt = 0.0;
    std::vector<double> samples;  // GHz
    std::uint64_t seed = 0;

    /// Value held over [k·dt, (k+1)·dt); clamps past the last sample.
    double at(double t) const;
};

/// Seed for trajectory `index` of an ensemble: splitmix64(base + index).
/// Ensemble results depend only on (base, index), never on execution order.
std::uint64_t trajectory_seed(std::uint64_t base, std::uint64_t index);

/// Exact-discretization OU generator, started from the stationary law.
class OrnsteinUhlenbeck {
public:
    OrnsteinUhlenbeck(const NoiseModel& model, std::uint64_t seed);

    double value() const { return value_; }
    /// Advance by dt (any dt > 0) and return the new value.
    double advance(double dt);

private:
    double sigma_;
    double tau_;
    double value_ = 0.0;
    std::mt19937_64 rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// n = round(T/dt) steps, n + 1 samples. Requires dt <= tau_c/10.
NoiseTrajectory sample_noise(const NoiseModel& model, double dt, double T, std::uint64_t seed);

/// S(ω) = 2σf²τc / (1 + ω²τc²) with ω in rad/ns; units GHz²·ns.
double spectral_density(const NoiseModel& model, double omega);

/// Periodogram (dt²/T)·|Σ f_k e^{iω k dt}|² at each ω (rad/ns), T = N·dt; same
/// two-sided convention as spectral_density.
std::vector<double> periodogram(const std::vector<double>& samples, double dt,
                                const std::vector<double>& omegas);

}  // namespace etls
