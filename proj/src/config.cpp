#include "etls/config.hpp"

#include "etls/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <utility>

namespace etls {

namespace {

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const std::string& why) {
    throw ConfigError("config: invalid value '" + value + "' for key '" + key + "': " + why);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) bad_value(key, v, "expected a number");
    return out;
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, v, "expected a non-negative integer");
    return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    bad_value(key, v, "expected true or false");
}

Setter real(double RunConfig::*field) {
    return [field](RunConfig& c, const std::string& k, const std::string& v) { c.*field = parse_double(k, v); };
}

template <class Member>
Setter real_in(Member RunConfig::*group, double Member::*field) {
    return [group, field](RunConfig& c, const std::string& k, const std::string& v) { c.*group.*field = parse_double(k, v); };
}

Setter count(std::size_t RunConfig::*field) {
    return [field](RunConfig& c, const std::string& k, const std::string& v) { c.*field = static_cast<std::size_t>(parse_uint(k, v)); };
}

const std::vector<std::pair<std::string, Setter>>& setters() {
    static const std::vector<std::pair<std::string, Setter>> table = {
        {"run.scenario", [](RunConfig& c, const std::string&, const std::string& v) { c.scenario = v; }},
        {"qubit.epsilon0_ghz", real_in(&RunConfig::system, &SystemParams::epsilon0)},
        {"qubit.t0_ghz", real_in(&RunConfig::system, &SystemParams::t0)},
        {"etls.omega_a_ghz", real_in(&RunConfig::system, &SystemParams::omega_a)},
        {"etls.t0a_ghz", real_in(&RunConfig::system, &SystemParams::t0a)},
        {"coupling.omega_delta_ghz", real_in(&RunConfig::system, &SystemParams::omega_delta)},
        {"pulse.rabi_mhz", real(&RunConfig::rabi_mhz)},
        {"pulse.branch",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             if (v == "q1") c.branch = Branch::q1;
             else if (v == "q0") c.branch = Branch::q0;
             else bad_value(k, v, "expected q0 or q1");
         }},
        {"pulse.phase_rad", real(&RunConfig::phase_rad)},
        {"pulse.carrier_ghz", real(&RunConfig::carrier_ghz)},
        {"pulse.duration_ns", real(&RunConfig::duration_ns)},
        {"state.p0", real(&RunConfig::p0)},
        {"state.relative_phase_rad", real(&RunConfig::relative_phase_rad)},
        {"noise.sigma_f_ghz", real_in(&RunConfig::noise, &NoiseModel::sigma_f)},
        {"noise.tau_c_ns", real_in(&RunConfig::noise, &NoiseModel::tau_c)},
        {"noise.kind",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             if (v != "ou" && v != "ornstein_uhlenbeck") bad_value(k, v, "expected ou");
             c.noise.kind = NoiseKind::ornstein_uhlenbeck;
         }},
        {"squid.l_ph", real_in(&RunConfig::squid, &SquidParams::inductance_ph)},
        {"squid.ic_ua", real_in(&RunConfig::squid, &SquidParams::critical_current_ua)},
        {"squid.cj_ff", real_in(&RunConfig::squid, &SquidParams::capacitance_ff)},
        {"squid.f_rf", real_in(&RunConfig::squid, &SquidParams::f_rf)},
        {"squid.grid_points", count(&RunConfig::grid_points)},
        {"squid.n_levels", count(&RunConfig::n_levels)},
        {"squid.stencil",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             if (v == "five_point") c.stencil = Stencil::five_point;
             else if (v == "three_point") c.stencil = Stencil::three_point;
             else bad_value(k, v, "expected five_point or three_point");
         }},
        {"squid.delta_phi0", real(&RunConfig::delta_phi0)},
        {"squid.var_phi", real(&RunConfig::var_phi)},
        {"detector.y0", real_in(&RunConfig::detector, &HistogramModel::y0)},
        {"detector.y1", real_in(&RunConfig::detector, &HistogramModel::y1)},
        {"detector.sigma", real_in(&RunConfig::detector, &HistogramModel::sigma)},
        {"histogram.y0", real_in(&RunConfig::histogram, &HistogramModel::y0)},
        {"histogram.y1", real_in(&RunConfig::histogram, &HistogramModel::y1)},
        {"histogram.sigma", real_in(&RunConfig::histogram, &HistogramModel::sigma)},
        {"histogram.weight", real_in(&RunConfig::histogram, &HistogramModel::weight)},
        {"histogram.accuracy", real(&RunConfig::accuracy)},
        {"histogram.samples", count(&RunConfig::samples)},
        {"histogram.batches", count(&RunConfig::batches)},
        {"run.seed", [](RunConfig& c, const std::string& k, const std::string& v) { c.seed = parse_uint(k, v); }},
        {"run.dt_ns", real(&RunConfig::dt_ns)},
        {"run.t_ns", real(&RunConfig::t_ns)},
        {"run.n_traj", count(&RunConfig::n_traj)},
        {"run.shots", count(&RunConfig::shots)},
        {"run.hold_ns", real(&RunConfig::hold_ns)},
        {"run.estimate_t2", [](RunConfig& c, const std::string& k, const std::string& v) { c.estimate_t2 = parse_bool(k, v); }},
        {"output.path", [](RunConfig& c, const std::string&, const std::string& v) { c.output_path = v; }},
        {"output.format",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             if (v == "json") c.format = OutputFormat::json;
             else if (v == "csv") c.format = OutputFormat::csv;
             else bad_value(k, v, "expected csv or json");
         }},
    };
    return table;
}

void require(bool ok, const char* key, const std::string& why) {
    if (!ok) throw ConfigError(std::string("config: key '") + key + "' " + why);
}

}  // namespace

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
    for (const auto& [name, set] : setters()) {
        if (name == key) {
            set(cfg, key, value);
            return;
        }
    }
    throw ConfigError("config: unknown key '" + key + "'");
}

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    for (const auto& entry : setters()) keys.push_back(entry.first);
    return keys;
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("config: malformed section header on line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config: expected 'key = value' on line " + std::to_string(lineno));
        }
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!section.empty()) key = section + "." + key;
        apply_setting(cfg, key, value);
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

void RunConfig::validate() const {
    static const std::vector<std::string> scenarios = {"spectrum", "pulse", "noise", "squid", "histogram", "protocol"};
    require(std::find(scenarios.begin(), scenarios.end(), scenario) != scenarios.end(), "run.scenario",
            "must be one of spectrum, pulse, noise, squid, histogram, protocol (got '" + scenario + "')");
    require(system.t0 >= 0.0, "qubit.t0_ghz", "must be >= 0");
    require(system.omega_a > 0.0, "etls.omega_a_ghz", "must be > 0");
    require(system.t0a >= 0.0, "etls.t0a_ghz", "must be >= 0");
    require(rabi_mhz > 0.0, "pulse.rabi_mhz", "must be > 0");
    require(carrier_ghz >= 0.0, "pulse.carrier_ghz", "must be >= 0");
    require(duration_ns >= 0.0, "pulse.duration_ns", "must be >= 0");
    require(p0 >= 0.0 && p0 <= 1.0, "state.p0", "must be in [0, 1]");
    require(noise.sigma_f >= 0.0, "noise.sigma_f_ghz", "must be >= 0");
    require(noise.tau_c > 0.0, "noise.tau_c_ns", "must be > 0");
    require(squid.inductance_ph > 0.0, "squid.l_ph", "must be > 0");
    require(squid.critical_current_ua >= 0.0, "squid.ic_ua", "must be >= 0");
    require(squid.capacitance_ff > 0.0, "squid.cj_ff", "must be > 0");
    require(squid.f_rf > 0.0, "squid.f_rf", "must be > 0");
    require(grid_points >= 1000, "squid.grid_points", "must be >= 1000");
    require(n_levels >= 2 && n_levels <= grid_points / 4, "squid.n_levels", "must be in [2, grid_points/4]");
    require(var_phi > 0.0, "squid.var_phi", "must be > 0");
    require(detector.sigma > 0.0, "detector.sigma", "must be > 0");
    require(detector.y0 != detector.y1, "detector.y1", "must differ from detector.y0");
    require(histogram.sigma > 0.0, "histogram.sigma", "must be > 0");
    require(histogram.y0 != histogram.y1, "histogram.y1", "must differ from histogram.y0");
    require(histogram.weight >= 0.0 && histogram.weight <= 1.0, "histogram.weight", "must be in [0, 1]");
    require(accuracy > 0.0 && accuracy < 1.0, "histogram.accuracy", "must be in (0, 1)");
    require(batches >= 1, "histogram.batches", "must be >= 1");
    require(dt_ns >= 0.0, "run.dt_ns", "must be >= 0");
    require(t_ns >= 0.0, "run.t_ns", "must be >= 0");
    require(n_traj >= 1, "run.n_traj", "must be >= 1");
    require(shots >= 1, "run.shots", "must be >= 1");
    require(hold_ns >= 0.0, "run.hold_ns", "must be >= 0");
}

cplx RunConfig::c0() const { return {std::sqrt(p0), 0.0}; }

cplx RunConfig::c1() const { return std::sqrt(1.0 - p0) * std::exp(kI * relative_phase_rad); }

PulseSpec RunConfig::pulse() const {
    PulseSpec p = pi_pulse(system, branch, angular(rabi_mhz * 1e-3));
    if (carrier_ghz > 0.0) p.carrier = carrier_ghz;
    if (duration_ns > 0.0) p.duration = duration_ns;
    p.phase = phase_rad;
    return p;
}

}  // namespace etls
