// scenarios.hpp: the batch scenarios behind each CLI subcommand.

#pragma once

#include "etls/config.hpp"
#include "etls/report.hpp"

namespace etls {

Report run_spectrum(const RunConfig& cfg);
Report run_pulse(const RunConfig& cfg);
Report run_noise(const RunConfig& cfg);
Report run_squid(const RunConfig& cfg);
Report run_histogram(const RunConfig& cfg);
Report run_protocol(const RunConfig& cfg);

/// Dispatches on cfg.scenario after validating the configuration.
Report run_scenario(const RunConfig& cfg);

}  // namespace etls
