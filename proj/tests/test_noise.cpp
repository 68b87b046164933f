#include "etls/noise.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace etls;

namespace {

constexpr double kPi = std::numbers::pi;
const double kRabi = angular(0.05);

SystemParams nominal() { return SystemParams{13.0, 1.0, 11.0, 0.0, 3.0}; }

// OU variance σ² chosen so the analytic coherence reaches 1/e at t (ns).
double sigma_for_decay_time(double tau, double t) {
    const double x = t / tau;
    return std::sqrt(1.0 / (16.0 * kPi * kPi * tau * tau * (x - 1.0 + std::exp(-x))));
}

// 1/e time of the analytic OU coherence, by bisection.
double analytic_t2(const NoiseModel& m) {
    double lo = 0.0, hi = 1e7;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (ou_coherence_ratio(m, mid) > std::exp(-1.0) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST(SampleNoise, ZeroAmplitudeIsSilent) {
    const NoiseTrajectory tr = sample_noise(NoiseModel{0.0, 10.0}, 1.0, 100.0, 3);
    ASSERT_EQ(tr.samples.size(), 101u);
    for (double f : tr.samples) EXPECT_EQ(f, 0.0);
}

TEST(SampleNoise, ReproducibleForSeed) {
    const NoiseModel m{0.01, 10.0};
    const auto a = sample_noise(m, 0.5, 50.0, 17);
    const auto b = sample_noise(m, 0.5, 50.0, 17);
    const auto c = sample_noise(m, 0.5, 50.0, 18);
    EXPECT_EQ(a.samples, b.samples);
    EXPECT_NE(a.samples, c.samples);
    EXPECT_EQ(trajectory_seed(5, 3), trajectory_seed(5, 3));
    EXPECT_NE(trajectory_seed(5, 3), trajectory_seed(5, 4));
}

TEST(SampleNoise, RejectsCoarseStep) {
    EXPECT_THROW(sample_noise(NoiseModel{0.01, 10.0}, 1.5, 100.0, 1), std::invalid_argument);
    EXPECT_THROW(sample_noise(NoiseModel{-0.01, 10.0}, 0.5, 100.0, 1), std::invalid_argument);
    EXPECT_THROW(sample_noise(NoiseModel{0.01, 0.0}, 0.5, 100.0, 1), std::invalid_argument);
}

TEST(SampleNoise, EnsembleVarianceAndAutocovariance) {
    const NoiseModel m{0.02, 10.0};
    const double dt = 1.0;
    const std::size_t n_traj = 10000;
    const std::size_t max_lag = 30;  // 3 τc
    std::vector<double> cov(max_lag + 1, 0.0);
    double end_var = 0.0, mean = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < n_traj; ++i) {
        const auto tr = sample_noise(m, dt, 1000.0, trajectory_seed(101, i));
        const auto& f = tr.samples;
        end_var += f.back() * f.back();
        mean += f.back();
        for (std::size_t k = 0; k + max_lag < f.size(); ++k)
            for (std::size_t lag = 0; lag <= max_lag; ++lag) cov[lag] += f[k] * f[k + lag];
        pairs += f.size() - max_lag;
    }
    const double s2 = m.sigma_f * m.sigma_f;
    end_var /= double(n_traj);
    mean /= double(n_traj);
    EXPECT_NEAR(end_var / s2, 1.0, 0.05);
    EXPECT_NEAR(mean / m.sigma_f, 0.0, 0.05);
    for (std::size_t lag = 0; lag <= max_lag; ++lag) {
        const double expected = std::exp(-double(lag) * dt / m.tau_c);
        EXPECT_NEAR(cov[lag] / double(pairs) / s2 / expected, 1.0, 0.1) << "lag " << lag;
    }
}

TEST(SpectralDensity, LorentzianShape) {
    const NoiseModel m{0.01, 10.0};
    const double peak = 2.0 * m.sigma_f * m.sigma_f * m.tau_c;
    EXPECT_DOUBLE_EQ(spectral_density(m, 0.0), peak);
    EXPECT_NEAR(spectral_density(m, 1.0 / m.tau_c), peak / 2.0, 1e-18);
    for (double w : {0.01, 0.3, 5.0}) {
        EXPECT_DOUBLE_EQ(spectral_density(m, w), spectral_density(m, -w));
        EXPECT_GE(spectral_density(m, w), 0.0);
    }
}

TEST(SpectralDensity, PeriodogramMatchesLorentzian) {
    const NoiseModel m{0.02, 10.0};
    const double dt = 1.0, T = 2000.0;
    std::vector<double> omegas;
    for (int j = 1; 2.0 * kPi * j / T <= 3.0 / m.tau_c; j += 3) omegas.push_back(2.0 * kPi * j / T);
    std::vector<double> avg(omegas.size(), 0.0);
    const std::size_t n_traj = 1000;
    for (std::size_t i = 0; i < n_traj; ++i) {
        const auto tr = sample_noise(m, dt, T, trajectory_seed(7, i));
        const auto p = periodogram(tr.samples, dt, omegas);
        for (std::size_t j = 0; j < omegas.size(); ++j) avg[j] += p[j] / double(n_traj);
    }
    for (std::size_t j = 0; j < omegas.size(); ++j) {
        EXPECT_NEAR(avg[j] / spectral_density(m, omegas[j]), 1.0, 0.2) << "omega " << omegas[j];
    }
}

TEST(IdleImmunity, NoNoiseGivesZeroDistance) {
    EXPECT_LE(idle_immunity_check(0.6, 0.8, nominal(), NoiseModel{0.0, 10.0}, 100.0, 10), 1e-12);  // round-off of 100 steps vs one exponential
}

TEST(IdleImmunity, StrongNoiseLeavesQubitIntact) {
    const double c = std::sqrt(0.5);
    EXPECT_LE(idle_immunity_check(c, c, nominal(), NoiseModel{0.1, 10.0}, 100.0, 100), 1e-9);
    EXPECT_LE(idle_immunity_check(0.6, cplx(0.0, 0.8), nominal(), NoiseModel{}, 100.0, 100), 1e-9);
}

TEST(IdleImmunity, RejectsEtlsTunneling) {
    SystemParams p = nominal();
    p.t0a = 0.5;
    EXPECT_THROW(idle_immunity_check(1.0, 0.0, p, NoiseModel{}, 10.0, 1), std::invalid_argument);
}

TEST(IdleImmunity, NegativeControlWithTunnelingDecoheres) {
    SystemParams p = nominal();
    p.t0a = 0.5;
    const NoiseModel m{0.1, 10.0};
    const Vector2c qubit(std::sqrt(0.5), std::sqrt(0.5));
    const double short_t = noisy_qubit_deviation(qubit, p, m, 10.0, 100, 1);
    const double long_t = noisy_qubit_deviation(qubit, p, m, 100.0, 100, 1);
    EXPECT_GT(long_t, 1e-3);
    EXPECT_GT(long_t, short_t);
}

TEST(Dephasing, SingleNoiselessTrajectoryIsPure) {
    const SystemParams p = nominal();
    const double c = std::sqrt(0.5);
    const auto r = dephasing_ensemble(c, c, p, pi_pulse(p, Branch::q1, kRabi), NoiseModel{0.0, 10.0}, 1, 1);
    EXPECT_NEAR((r.rho * r.rho).trace().real(), 1.0, 1e-10);  // round-off over ~10^4 steps
    EXPECT_GE(r.fidelity, 0.99);
}

TEST(Dephasing, EnsembleIsAValidDensityMatrix) {
    const SystemParams p = nominal();
    const auto r = dephasing_ensemble(0.6, 0.8, p, pi_pulse(p, Branch::q1, kRabi), NoiseModel{0.005, 10.0}, 20, 9,
                                      DephasingOptions{0.0, 50.0, 0.0});
    EXPECT_LE(hermiticity_error(r.rho), 1e-12);
    EXPECT_NEAR(r.rho.trace().real(), 1.0, 1e-10);
    EXPECT_GE(min_eigenvalue(r.rho), -1e-10);
    EXPECT_LE(hermiticity_error(r.rho_dressed), 1e-12);
    EXPECT_GE(min_eigenvalue(r.rho_dressed), -1e-10);
}

TEST(Dephasing, WeakNoiseKeepsFidelity) {
    const NoiseModel m{0.0004, 10.0};
    ASSERT_GE(analytic_t2(m), 100.0 * 10.0);
    const SystemParams p = nominal();
    const double c = std::sqrt(0.5);
    const auto r = dephasing_ensemble(c, c, p, pi_pulse(p, Branch::q1, kRabi), m, 50, 4);
    EXPECT_GE(r.fidelity, 0.99);
}

TEST(Dephasing, StrongNoiseSuppressesCoherenceByOneOverE) {
    // Analytic 1/e time equal to the 10 ns pulse.
    const NoiseModel m{sigma_for_decay_time(1.0, 10.0), 1.0};
    ASSERT_NEAR(analytic_t2(m), 10.0, 1e-6);
    const SystemParams p = nominal();
    const double c = std::sqrt(0.5);
    const auto r = dephasing_ensemble(c, c, p, pi_pulse(p, Branch::q1, kRabi), m, 400, 21,
                                      DephasingOptions{0.0, 10.0, 0.0});
    const double ratio = r.coherence.back() / r.coherence.front();
    EXPECT_NEAR(ratio / std::exp(-1.0), 1.0, 0.3);
}

TEST(Dephasing, RejectsBadInputs) {
    const SystemParams p = nominal();
    const PulseSpec pulse = pi_pulse(p, Branch::q1, kRabi);
    EXPECT_THROW(dephasing_ensemble(1.0, 0.0, p, pulse, NoiseModel{}, 0, 1), std::invalid_argument);
    EXPECT_THROW(dephasing_ensemble(1.0, 1.0, p, pulse, NoiseModel{}, 1, 1), std::invalid_argument);
}

TEST(EstimateT2, NoNoiseGivesLowerBound) {
    const SystemParams p = nominal();
    T2Options opt;
    opt.n_traj = 2;
    opt.window = 200.0;
    const T2Estimate e = estimate_T2(NoiseModel{0.0, 10.0}, p, pi_pulse(p, Branch::q1, kRabi), opt);
    EXPECT_TRUE(e.lower_bound);
    EXPECT_EQ(e.t2, 200.0);
}

TEST(EstimateT2, DefaultCalibrationAndQuadraticScaling) {
    const SystemParams p = nominal();
    const PulseSpec pulse = pi_pulse(p, Branch::q1, kRabi);
    const NoiseModel base{};
    const T2Estimate e1 = estimate_T2(base, p, pulse);
    ASSERT_FALSE(e1.lower_bound);
    EXPECT_GE(e1.t2, 100.0);
    EXPECT_LE(e1.t2, 10000.0);
    EXPECT_NEAR(e1.t2 / analytic_t2(base), 1.0, 0.2);
    EXPECT_GT(e1.analytic_rate, 0.0);
    EXPECT_NEAR(e1.spectral_density_at_rabi, spectral_density(base, kRabi), 1e-18);

    NoiseModel doubled = base;
    doubled.sigma_f *= 2.0;
    const T2Estimate e2 = estimate_T2(doubled, p, pulse);
    ASSERT_FALSE(e2.lower_bound);
    EXPECT_NEAR(e1.t2 / e2.t2 / 4.0, 1.0, 0.3);
}
