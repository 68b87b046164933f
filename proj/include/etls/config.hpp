// config.hpp: run configuration for the batch front-end.
//
// Format: one `key = value` per line, `#` starts a comment, optional `[section]`
// headers prefix the following keys with `section.`. Unknown keys are errors.

#pragma once

#include "etls/dynamics.hpp"
#include "etls/measurement.hpp"
#include "etls/model.hpp"
#include "etls/noise_process.hpp"
#include "etls/squid.hpp"

#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

namespace etls {

enum class OutputFormat { json, csv };

struct RunConfig {
    std::string scenario = "protocol";

    SystemParams system;

    double rabi_mhz = 50.0;  // Ω_X / 2π
    Branch branch = Branch::q1;
    double phase_rad = std::numbers::pi;
    double carrier_ghz = 0.0;  // <= 0: conditional transition of `branch`
    double duration_ns = 0.0;  // <= 0: π/Ω_X

    double p0 = 0.5;  // |c0|²
    double relative_phase_rad = 0.0;

    NoiseModel noise;

    SquidParams squid;
    std::size_t grid_points = 4001;
    std::size_t n_levels = 40;
    Stencil stencil = Stencil::five_point;
    double delta_phi0 = 0.002;
    double var_phi = 0.01;

    HistogramModel detector{0.0, 1.0, 1e-4, 0.5};
    HistogramModel histogram{0.0, 1.0, 625.0, 0.5};
    double accuracy = 0.05;
    std::size_t samples = 0;  // 0: N_p
    std::size_t batches = 100;

    std::uint64_t seed = 42;
    double dt_ns = 0.0;  // 0: automatic
    double t_ns = 0.0;   // 0: scenario default
    std::size_t n_traj = 100;
    std::size_t shots = 400;
    double hold_ns = 0.0;
    bool estimate_t2 = false;

    std::string output_path;
    OutputFormat format = OutputFormat::json;

    /// Throws ConfigError naming the first offending key.
    void validate() const;

    /// c0 = √p0, c1 = √(1 − p0)·e^{iφ}.
    cplx c0() const;
    cplx c1() const;
    /// π pulse on `branch` with the optional carrier/duration/phase overrides.
    PulseSpec pulse() const;
};

/// Applies `key = value` to cfg. Throws ConfigError for unknown keys or bad values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Every accepted key, in documentation order.
std::vector<std::string> config_keys();


}  // namespace etls
