#include "etls/scenarios.hpp"

#include "etls/errors.hpp"
#include "etls/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace etls {

namespace {

std::int64_t as_int(std::size_t n) { return static_cast<std::int64_t>(n); }

double rabi_rad(const RunConfig& cfg) { return angular(cfg.rabi_mhz * 1e-3); }

double transition_detuning(const SystemParams& params) {
    const DressedSpectrum s = dressed_spectrum(params);
    return angular(s.f_cond_q1 - s.f_cond_q0);
}

void put_pulse(Report& r, const PulseSpec& p) {
    r.set("pulse_carrier_ghz", p.carrier);
    r.set("pulse_rabi_rad_per_ns", p.rabi);
    r.set("pulse_duration_ns", p.duration);
    r.set("pulse_phase_rad", p.phase);
}

}  // namespace

Report run_spectrum(const RunConfig& cfg) {
    const DressedSpectrum s = dressed_spectrum(cfg.system);
    Report r;
    r.scenario = "spectrum";
    r.set("omega_q_ghz", s.omega_q);
    r.set("omega_q_bar_ghz", s.omega_q_bar);
    r.set("theta_rad", s.theta);
    r.set("theta_bar_rad", s.theta_bar);
    r.set("e_0q0a_ghz", s.e_0q0a);
    r.set("e_1q0a_ghz", s.e_1q0a);
    r.set("e_0bq1a_ghz", s.e_0bq1a);
    r.set("e_1bq1a_ghz", s.e_1bq1a);
    r.set("f_cond_q0_ghz", s.f_cond_q0);
    r.set("f_cond_q1_ghz", s.f_cond_q1);
    r.set("overlap_0q_1bq", qubit_overlap(s));
    r.set("max_level_splitting_ghz", max_level_splitting(cfg.system));

    Eigen::SelfAdjointEigenSolver<Matrix4c> es(build_hamiltonian(cfg.system), Eigen::EigenvaluesOnly);
    const auto closed = s.levels();
    std::array<double, 4> sorted = closed;
    std::sort(sorted.begin(), sorted.end());
    Table& t = r.add_table("levels", {"index", "dressed_energy_ghz", "sorted_energy_ghz", "numeric_energy_ghz"});
    for (int k = 0; k < 4; ++k) t.add_row({double(k), closed[k], sorted[k], es.eigenvalues()(k)});
    return r;
}

Report run_pulse(const RunConfig& cfg) {
    const PulseSpec pulse = cfg.pulse();
    const double dt = cfg.dt_ns > 0.0 ? cfg.dt_ns : resolution_dt(cfg.system, pulse);
    const double T = cfg.t_ns > 0.0 ? cfg.t_ns : pulse.duration;
    const DressedStates d = dressed_states(cfg.system);
    const Matrix4c basis = d.basis();
    const JointState initial = cfg.c0() * d.g0 + cfg.c1() * d.g1;
    const Trajectory traj = propagate(initial, cfg.system, pulse, dt, T);

    Report r;
    r.scenario = "pulse";
    put_pulse(r, pulse);
    r.set("dt_ns", traj.times.size() > 1 ? traj.times[1] - traj.times[0] : dt);
    r.set("t_ns", T);
    r.set("steps", as_int(traj.times.size() - 1));

    Table& t = r.add_table("trajectory", {"t_ns", "p_etls_excited", "p_0q0a", "p_1q0a", "p_0bq1a", "p_1bq1a", "norm"});
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const JointState& psi = traj.states[k];
        const Vector4c amps = basis.adjoint() * psi;
        const double excited = partial_trace_qubit(projector(psi))(kEtlsExcited, kEtlsExcited).real();
        t.add_row({traj.times[k], excited, std::norm(amps(0)), std::norm(amps(1)), std::norm(amps(2)),
                   std::norm(amps(3)), psi.norm()});
    }
    const JointState& last = traj.states.back();
    r.set("final_p_etls_excited", partial_trace_qubit(projector(last))(kEtlsExcited, kEtlsExcited).real());
    r.set("final_norm_drift", std::abs(last.norm() - 1.0));

    const EntangleResult e = entangle(cfg.c0(), cfg.c1(), cfg.system, pulse, cfg.dt_ns);
    r.set("entanglement_fidelity", e.fidelity);
    r.set("conditional", e.conditional);
    if (cfg.system.omega_delta != 0.0) r.set("leakage_estimate", leakage_probability(pulse.rabi, transition_detuning(cfg.system)));
    return r;
}

Report run_noise(const RunConfig& cfg) {
    const NoiseModel& m = cfg.noise;
    const double dt = cfg.dt_ns > 0.0 ? cfg.dt_ns : m.tau_c / 10.0;
    const double T = cfg.t_ns > 0.0 ? cfg.t_ns : 1000.0;

    Report r;
    r.scenario = "noise";
    r.set("sigma_f_ghz", m.sigma_f);
    r.set("tau_c_ns", m.tau_c);
    r.set("dt_ns", dt);
    r.set("t_ns", T);
    r.set("n_traj", as_int(cfg.n_traj));

    constexpr std::size_t kFrequencies = 64;
    std::vector<double> omegas(kFrequencies);
    for (std::size_t j = 0; j < kFrequencies; ++j) omegas[j] = kTwoPi * double(j + 1) / T;
    std::vector<double> avg(kFrequencies, 0.0);
    double sum = 0.0, sum_sq = 0.0;
    std::size_t count = 0;
    NoiseTrajectory first;
    for (std::size_t i = 0; i < cfg.n_traj; ++i) {
        NoiseTrajectory tr = sample_noise(m, dt, T, trajectory_seed(cfg.seed, i));
        for (double f : tr.samples) {
            sum += f;
            sum_sq += f * f;
        }
        count += tr.samples.size();
        const auto p = periodogram(tr.samples, dt, omegas);
        for (std::size_t j = 0; j < kFrequencies; ++j) avg[j] += p[j] / double(cfg.n_traj);
        if (i == 0) first = std::move(tr);
    }
    const double mean = sum / double(count);
    r.set("sample_mean_ghz", mean);
    r.set("sample_variance_ghz2", sum_sq / double(count) - mean * mean);
    r.set("variance_ghz2", m.sigma_f * m.sigma_f);
    r.set("spectral_density_at_rabi", spectral_density(m, rabi_rad(cfg)));
    r.set("spectral_density_at_zero", spectral_density(m, 0.0));

    if (cfg.estimate_t2) {
        T2Options opt;
        opt.seed = cfg.seed;
        const T2Estimate est = estimate_T2(m, cfg.system, cfg.pulse(), opt);
        r.set("t2_ns", est.t2);
        r.set("t2_lower_bound", est.lower_bound);
        r.set("t2_fit_rate_per_ns", est.fit_rate);
        r.set("t2_fit_points", as_int(est.fit_points));
        r.set("t2_gaussian_rate_per_ns", est.analytic_rate);
    }

    Table& t = r.add_table("trajectory", {"t_ns", "f_ghz"});
    for (std::size_t k = 0; k < first.samples.size(); ++k) t.add_row({dt * double(k), first.samples[k]});
    Table& s = r.add_table("spectral_density", {"omega_rad_per_ns", "s_lorentzian", "s_periodogram"});
    for (std::size_t j = 0; j < kFrequencies; ++j) s.add_row({omegas[j], spectral_density(m, omegas[j]), avg[j]});
    return r;
}

Report run_squid(const RunConfig& cfg) {
    const SquidParams& p = cfg.squid;
    const SquidEnergies e = derived_energies(p);
    const PhaseGrid grid = PhaseGrid::centered(p, cfg.grid_points);
    SolveOptions opt;
    opt.stencil = cfg.stencil;
    const EigenSolution sol = solve_spectrum(p, grid, cfg.n_levels, opt);
    const EtlsCharacterization c = characterize_etls(sol, p);

    Report r;
    r.scenario = "squid";
    r.set("e_j_ghz", e.e_j);
    r.set("e_c_ghz", e.e_c);
    r.set("e_l_ghz", e.e_l);
    r.set("beta_l", e.beta_l);
    r.set("e_j_over_e_c", e.e_j / e.e_c);
    r.set("grid_points", as_int(cfg.grid_points));
    r.set("convergence_shift_ghz", sol.convergence_shift);
    r.set("etls_lower", as_int(c.lower));
    r.set("etls_upper", as_int(c.upper));
    r.set("current_lower_ua", c.current_lower_ua);
    r.set("current_upper_ua", c.current_upper_ua);
    r.set("delta_i_ua", c.delta_i_ua);
    r.set("delta_i_over_ic", p.critical_current_ua > 0.0 ? c.delta_i_ua / p.critical_current_ua : 0.0);
    r.set("delta_phi_phi0", c.delta_phi);
    r.set("isolation_ghz", c.isolation_ghz);
    r.set("isolation_at_least_40ghz", c.isolation_ghz >= 40.0);
    r.set("splitting_ghz", c.splitting_ghz);
    r.set("barrier_phase_rad", c.barrier_phase);
    r.set("displaced_overlap", displaced_ground_overlap(cfg.delta_phi0, cfg.var_phi));

    Table& lv = r.add_table("levels", {"index", "energy_ghz", "mean_phase_offset_rad", "left_probability", "well"});
    for (std::size_t k = 0; k < c.levels.size(); ++k) {
        const LevelInfo& l = c.levels[k];
        lv.add_row({double(k), l.energy, l.mean_phase_offset, l.left_probability, double(l.well)});
    }
    const Eigen::VectorXd u = potential(p, grid);
    Table& wf = r.add_table("wavefunctions", {"phi_rad", "potential_ghz", "psi_ground", "psi_lower", "psi_upper"});
    for (Eigen::Index i = 0; i < sol.grid.size(); ++i) {
        wf.add_row({sol.grid(i), u(i), sol.wavefunctions(i, 0), sol.wavefunctions(i, Eigen::Index(c.lower)),
                    sol.wavefunctions(i, Eigen::Index(c.upper))});
    }
    return r;
}

Report run_histogram(const RunConfig& cfg) {
    const HistogramModel& m = cfg.histogram;
    const AccuracySpec acc{cfg.accuracy};
    const std::size_t n_v = required_repetitions_von_neumann(acc);
    const std::size_t n_p = required_repetitions_overlapping(acc, m);
    const std::size_t n = cfg.samples > 0 ? cfg.samples : n_p;

    const std::vector<double> ys = sample_switching(m, n, cfg.seed);
    std::vector<double> estimates;
    estimates.reserve(cfg.batches);
    for (std::size_t b = 0; b < cfg.batches; ++b) {
        estimates.push_back(estimate_population(sample_switching(m, n, trajectory_seed(cfg.seed, b + 1)), m));
    }
    const double bmean = std::accumulate(estimates.begin(), estimates.end(), 0.0) / double(estimates.size());
    double bvar = 0.0;
    for (double x : estimates) bvar += (x - bmean) * (x - bmean);
    bvar = estimates.size() > 1 ? bvar / double(estimates.size() - 1) : 0.0;

    Report r;
    r.scenario = "histogram";
    const double dy = std::abs(m.y1 - m.y0);
    r.set("separation_ratio", 2.0 * std::sqrt(m.sigma) / dy);
    r.set("accuracy", cfg.accuracy);
    r.set("n_v", as_int(n_v));
    r.set("n_p", as_int(n_p));
    r.set("n_p_over_n_v", double(n_p) / double(n_v));
    r.set("samples", as_int(n));
    r.set("true_weight", m.weight);
    r.set("estimate", estimate_population(ys, m));
    r.set("batches", as_int(cfg.batches));
    r.set("batch_mean", bmean);
    r.set("batch_std", std::sqrt(bvar));

    constexpr int kBins = 100;
    const auto [lo_it, hi_it] = std::minmax_element(ys.begin(), ys.end());
    const double lo = *lo_it;
    const double width = std::max(*hi_it - lo, 1e-300) / kBins;
    std::vector<double> counts(kBins, 0.0);
    for (double y : ys) counts[std::min(kBins - 1, int((y - lo) / width))] += 1.0;
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * m.sigma);
    Table& t = r.add_table("histogram", {"bin_center", "count", "model_count"});
    for (int b = 0; b < kBins; ++b) {
        const double x = lo + (b + 0.5) * width;
        const double pdf = norm * (m.weight * std::exp(-(x - m.y0) * (x - m.y0) / (2.0 * m.sigma)) +
                                   (1.0 - m.weight) * std::exp(-(x - m.y1) * (x - m.y1) / (2.0 * m.sigma)));
        t.add_row({x, counts[b], pdf * width * double(n)});
    }
    return r;
}

Report run_protocol(const RunConfig& cfg) {
    const PulseSpec pulse = cfg.pulse();
    DephasingOptions opt;
    opt.dt = cfg.dt_ns;
    opt.hold = cfg.hold_ns;
    const DephasingResult ens =
        dephasing_ensemble(cfg.c0(), cfg.c1(), cfg.system, pulse, cfg.noise, cfg.n_traj, cfg.seed, opt);
    const Readout ro = simulate_readout(ens.rho, cfg.detector, cfg.shots, trajectory_seed(cfg.seed, cfg.n_traj));

    Report r;
    r.scenario = "protocol";
    put_pulse(r, pulse);
    r.set("n_traj", as_int(cfg.n_traj));
    r.set("hold_ns", cfg.hold_ns);
    r.set("sigma_f_ghz", cfg.noise.sigma_f);
    r.set("tau_c_ns", cfg.noise.tau_c);
    r.set("true_p0", cfg.p0);
    r.set("estimated_p0", ro.estimate);
    r.set("estimate_error", ro.estimate - cfg.p0);
    r.set("shots", as_int(ro.shots));
    r.set("shots_etls_excited", as_int(ro.ones));
    r.set("detector_mean", ro.detector_mean);
    r.set("p_etls_excited", partial_trace_qubit(ens.rho)(kEtlsExcited, kEtlsExcited).real());
    r.set("entanglement_fidelity", ens.fidelity);
    r.set("coherence_0q0a_1bq1a", ens.coherence.back());
    if (cfg.system.omega_delta != 0.0) r.set("leakage_estimate", leakage_probability(pulse.rabi, transition_detuning(cfg.system)));

    Table& t = r.add_table("density_matrix", {"row", "col", "re", "im"});
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) t.add_row({double(i), double(j), ens.rho_dressed(i, j).real(), ens.rho_dressed(i, j).imag()});
    Table& h = r.add_table("coherence", {"hold_t_ns", "coherence"});
    for (std::size_t k = 0; k < ens.hold_times.size(); ++k) h.add_row({ens.hold_times[k], ens.coherence[k]});
    return r;
}

Report run_scenario(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.scenario == "spectrum") return run_spectrum(cfg);
    if (cfg.scenario == "pulse") return run_pulse(cfg);
    if (cfg.scenario == "noise") return run_noise(cfg);
    if (cfg.scenario == "squid") return run_squid(cfg);
    if (cfg.scenario == "histogram") return run_histogram(cfg);
    if (cfg.scenario == "protocol") return run_protocol(cfg);
    throw ConfigError("config: key 'run.scenario' has unknown value '" + cfg.scenario + "'");
}

}  // namespace etls
