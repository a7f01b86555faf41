// simulate - command-line front end for the superradiance simulator.
//
//   simulate preset <fig1..fig8> --out DIR
//   simulate run --config FILE --out DIR
//   simulate oracle --n N --gamma-eff X --out DIR
//   simulate analyze --trajectory FILE --metrics FILE
//
// Exit codes: 0 success, 2 validation error, 3 integration failure, 4 I/O error.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "superradiance/runner.hpp"

namespace sr = superradiance;

namespace {

enum ExitCode { ok = 0, validation = 2, integration = 3, io = 4 };

void report(const std::vector<sr::RunOutputs>& outputs) {
    for (const auto& o : outputs) std::cout << o.name << ": " << o.trajectory_file.string() << ", " << o.metrics_file.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Collective emission of dense atomic samples: mean-field dynamics, pulse metrics, exact ladder oracle"};
    app.require_subcommand(1);

    sr::RunOverrides overrides;
    std::string out_dir;

    auto add_overrides = [&](CLI::App* cmd) {
        cmd->add_option("--rtol", overrides.rtol, "Relative tolerance of the integrator");
        cmd->add_option("--t-end", overrides.t_end, "Integration window in gamma*t");
        cmd->add_option("--theta0", overrides.theta0, "Initial polar angle (rad)");
        cmd->add_option("--phi0", overrides.phi0, "Initial azimuthal angle (rad)");
    };

    std::string preset_name;
    auto* preset = app.add_subcommand("preset", "Run one of the figure presets");
    preset->add_option("name", preset_name, "fig1 .. fig8")->required()->check(CLI::IsMember(sr::preset_names()));
    preset->add_option("--out", out_dir, "Output directory")->required();
    add_overrides(preset);

    std::string config_path;
    auto* run = app.add_subcommand("run", "Run a JSON configuration (optionally a sweep)");
    run->add_option("--config", config_path, "Config file")->required();
    run->add_option("--out", out_dir, "Output directory (defaults to outputs.directory or .)");
    add_overrides(run);

    std::int64_t oracle_n = 10;
    double gamma_eff = 1.0;
    double omega_ratio = 1.0;
    auto* oracle = app.add_subcommand("oracle", "Exact symmetric-ladder cascade from the fully excited state");
    oracle->add_option("--n", oracle_n, "Number of atoms (1 .. 1e4)")->required();
    oracle->add_option("--gamma-eff", gamma_eff, "Collective decay rate in units of gamma")->required();
    oracle->add_option("--omega-ratio", omega_ratio, "Omega/omega0 (energy per quantum)");
    oracle->add_option("--out", out_dir, "Output directory")->required();

    std::string trajectory_file, metrics_file;
    auto* analyze = app.add_subcommand("analyze", "Recompute metrics from a trajectory CSV and compare");
    analyze->add_option("--trajectory", trajectory_file, "Trajectory CSV")->required();
    analyze->add_option("--metrics", metrics_file, "Metrics JSON written alongside it")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : validation;
    }

    try {
        if (*preset) {
            report(sr::run_preset(preset_name, out_dir, overrides));
        } else if (*run) {
            std::optional<std::filesystem::path> dir;
            if (!out_dir.empty()) dir = out_dir;
            report(sr::run_config(config_path, dir, overrides));
        } else if (*oracle) {
            const auto [csv, summary] = sr::run_oracle(oracle_n, gamma_eff, omega_ratio, out_dir);
            std::cout << "oracle: " << csv.string() << ", " << summary.string() << "\n";
        } else if (*analyze) {
            const auto mismatched = sr::verify_round_trip(trajectory_file, metrics_file);
            if (!mismatched.empty()) {
                std::cerr << "metrics differ:";
                for (const auto& m : mismatched) std::cerr << " " << m;
                std::cerr << "\n";
                return validation;
            }
            std::cout << "metrics reproduce exactly\n";
        }
    } catch (const sr::parameter_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return validation;
    } catch (const sr::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return validation;
    } catch (const sr::integration_error& e) {
        std::cerr << "integration failure: " << e.what() << " (last good gamma*t = " << e.last_t() << ")\n";
        return integration;
    } catch (const sr::budget_error& e) {
        std::cerr << "sample budget exceeded: " << e.what() << "\n";
        return integration;
    } catch (const sr::step_size_error& e) {
        std::cerr << "integration failure: " << e.what() << "\n";
        return integration;
    } catch (const sr::analysis_error& e) {
        std::cerr << "analysis failure: " << e.what() << "\n";
        return integration;
    } catch (const sr::io_error& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return io;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return io;
    }
    return ok;
}
