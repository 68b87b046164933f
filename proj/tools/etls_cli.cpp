// etls_cli: batch front-end for the qubit/ETLS readout simulations.
//
//   etls_cli <spectrum|pulse|noise|squid|histogram|protocol> [--config PATH]
//            [--out PATH] [--format csv|json] [--seed N]
//
// Exit status: 0 success, 1 configuration error, 2 numerical failure.

#include "etls/config.hpp"
#include "etls/errors.hpp"
#include "etls/report.hpp"
#include "etls/scenarios.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <stdexcept>

namespace {

constexpr int kConfigError = 1;
constexpr int kNumericalError = 2;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Qubit readout through an effective two-level system"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_path;
    std::string format;
    std::optional<std::uint64_t> seed;
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--out", out_path, "output file (default: stdout)");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed", seed, "base seed (overrides run.seed)");

    for (const char* name : {"spectrum", "pulse", "noise", "squid", "histogram", "protocol"}) {
        app.add_subcommand(name, std::string("run the ") + name + " scenario");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    try {
        etls::RunConfig cfg = config_path.empty() ? etls::RunConfig{} : etls::load_config(config_path);
        cfg.scenario = app.get_subcommands().front()->get_name();
        if (seed) cfg.seed = *seed;
        if (!out_path.empty()) cfg.output_path = out_path;
        if (!format.empty()) cfg.format = format == "csv" ? etls::OutputFormat::csv : etls::OutputFormat::json;

        const etls::Report report = etls::run_scenario(cfg);
        const bool csv = cfg.format == etls::OutputFormat::csv;
        if (cfg.output_path.empty()) {
            if (csv) {
                std::cout << etls::summary_csv(report);
                for (const auto& t : report.tables) std::cout << '\n' << etls::table_csv(t);
            } else {
                std::cout << etls::to_json(report);
            }
        } else if (csv) {
            for (const auto& path : etls::write_csv(report, cfg.output_path)) std::cerr << "wrote " << path << '\n';
        } else {
            etls::write_atomic(cfg.output_path, etls::to_json(report));
            std::cerr << "wrote " << cfg.output_path << '\n';
        }
    } catch (const etls::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const etls::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumericalError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumericalError;
    }
    return 0;
}
