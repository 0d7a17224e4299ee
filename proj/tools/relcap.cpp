// relcap: capacities, identities and inequality checks for a stationary
// observer and a traveler on a closed trajectory.
//
// Exit codes: 0 all assertions passed, 1 assertion or numerical failure,
// 2 config schema or usage error, 3 I/O failure.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "relcap/runner.hpp"

namespace {

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw relcap::IoError("cannot read config " + path);
    std::ostringstream text;
    text << in.rdbuf();
    if (!in.good() && !in.eof()) throw relcap::IoError("failed reading config " + path);
    return text.str();
}

void print_summary(const relcap::RunSummary& summary) {
    for (std::size_t i = 0; i < summary.reports.size(); ++i) {
        const auto& r = summary.reports[i];
        for (const auto& w : r.warnings) std::cerr << "warning: " << r.scenario_id << " " << r.task << ": " << w << "\n";
        for (const auto& a : r.assertions) {
            if (!a.passed) {
                std::cerr << "FAIL " << r.scenario_id << " " << r.task << ": " << a.name;
                if (!a.detail.empty()) std::cerr << " (" << a.detail << ")";
                std::cerr << "\n";
            }
        }
        std::cout << (r.passed() ? "pass " : "fail ") << summary.files[i].string() << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Relativistic bidirectional AWGN capacity runner"};
    app.require_subcommand(1);
    app.fallthrough();

    relcap::RunOptions options;
    std::string out_dir = ".";
    std::string format = "csv";
    std::uint64_t seed = 0;
    double tol = 0.0;
    auto* seed_opt = app.add_option("--seed", seed, "Seed for randomized witnesses");
    auto* tol_opt = app.add_option("--tol", tol, "Relative quadrature tolerance")->check(CLI::PositiveNumber);
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json"}));

    std::string config_path;
    auto* simulate = app.add_subcommand("simulate", "Run the tasks listed in a config (default: capacities)");
    simulate->add_option("config", config_path, "Scenario config (JSON)")->required();
    auto* verify = app.add_subcommand("verify", "Run every check with cross-validation");
    verify->add_option("config", config_path, "Scenario config (JSON)")->required();

    auto* sweep = app.add_subcommand("sweep", "Sweep beta or sigma");
    sweep->add_option("config", config_path, "Scenario config (JSON)")->required();
    std::string axis;
    relcap::SweepConfig sweep_cfg;
    double sigma_factor = 0.0;
    sweep->add_option("--axis", axis, "beta or sigma")->required()->check(CLI::IsMember({"beta", "sigma"}));
    sweep->add_option("--from", sweep_cfg.from)->required();
    sweep->add_option("--to", sweep_cfg.to)->required();
    sweep->add_option("--steps", sweep_cfg.steps)->required()->check(CLI::PositiveNumber);
    auto* factor_opt = sweep->add_option("--sigma-factor", sigma_factor, "sigma = factor x coverage bound")
                           ->check(CLI::PositiveNumber);

    auto* oracle = app.add_subcommand("oracle", "Extremal three-point grid oracle");
    double oracle_b = 0.5;
    std::size_t oracle_grid = 200;
    oracle->add_option("--b", oracle_b, "Bound b in (0, 1)")->required();
    oracle->add_option("--grid", oracle_grid, "Grid points per axis (>= 100)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    options.out = out_dir;
    options.format = format == "json" ? relcap::Format::json : relcap::Format::csv;
    if (*seed_opt) options.seed = seed;
    if (*tol_opt) options.tol = tol;

    try {
        if (*oracle) {
            if (!(oracle_b > 0.0 && oracle_b < 1.0)) {
                std::cerr << "error: --b must lie in (0, 1)\n";
                return 2;
            }
            if (oracle_grid < 100) {
                std::cerr << "error: --grid must be at least 100\n";
                return 2;
            }
            auto report = relcap::run_oracle("oracle", oracle_b, oracle_grid, true, true);
            const auto summary = relcap::write_reports({report}, options);
            print_summary(summary);
            return summary.exit_code;
        }

        if (*simulate) options.mode = relcap::Mode::simulate;
        if (*verify) options.mode = relcap::Mode::verify;
        if (*sweep) {
            options.mode = relcap::Mode::sweep;
            sweep_cfg.axis = axis == "beta" ? relcap::SweepAxis::beta : relcap::SweepAxis::sigma;
            if (*factor_opt) sweep_cfg.sigma_factor = sigma_factor;
            options.sweep = sweep_cfg;
        }
        const auto configs = relcap::parse_config(read_text(config_path));
        const auto summary = relcap::run(configs, options);
        print_summary(summary);
        return summary.exit_code;
    } catch (const relcap::ConfigError& e) {
        std::cerr << "config error: " << config_path << ": " << e.diagnostic() << "\n";
        return 2;
    } catch (const relcap::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
