#include "marrm/commands.hpp"
#include "marrm/csv.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::string seed_override;
    bool verbose = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "key=value configuration file");
    cmd->add_option("--out", args.out_path, "output path (stdout when omitted)");
    cmd->add_option("--seed", args.seed_override, "seed override");
    cmd->add_flag("--verbose", args.verbose, "echo the resolved configuration to stderr");
}

marrm::cli::RunConfig load_config(const CommonArgs& args) {
    marrm::cli::RunConfig cfg = args.config_path.empty()
                                    ? marrm::cli::RunConfig::from_string("")
                                    : marrm::cli::RunConfig::from_file(args.config_path);
    if (!args.seed_override.empty()) cfg.override_key("seed", args.seed_override);
    return cfg;
}

void emit(const CommonArgs& args, const std::string& content) {
    if (args.out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(args.out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output path `" + args.out_path + "`");
    out << content;
}

void echo_config(const CommonArgs& args, const marrm::cli::RunConfig& cfg) {
    if (!args.verbose) return;
    for (const auto& line : cfg.resolved_lines()) std::cerr << line << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-asset return risk measures for lognormal losses"};
    app.require_subcommand(1);

    CommonArgs sweep_args, sens_args, prop_args, emp_args, sim_args;
    std::string prices_path;

    auto* sweep = app.add_subcommand("sweep", "rrm/marrm (and optional marm) over a level grid");
    add_common(sweep, sweep_args);
    auto* sens = app.add_subcommand("sensitivity", "rrm/marrm over one market or loss parameter");
    add_common(sens, sens_args);
    auto* prop = app.add_subcommand("properties", "finite-lab and solver property suites");
    add_common(prop, prop_args);
    auto* emp = app.add_subcommand("empirical", "calibrate on a window and roll daily forecasts");
    add_common(emp, emp_args);
    emp->add_option("--prices", prices_path, "price CSV (date,price)")->required();
    auto* sim = app.add_subcommand("simulate", "synthetic price CSV from an AR(1)-GARCH(1,1)");
    add_common(sim, sim_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) {
            auto cfg = load_config(sweep_args);
            const std::string out = marrm::cli::cmd_sweep(cfg);
            echo_config(sweep_args, cfg);
            emit(sweep_args, out);
        } else if (sens->parsed()) {
            auto cfg = load_config(sens_args);
            const std::string out = marrm::cli::cmd_sensitivity(cfg);
            echo_config(sens_args, cfg);
            emit(sens_args, out);
        } else if (prop->parsed()) {
            auto cfg = load_config(prop_args);
            const auto report = marrm::cli::cmd_properties(cfg);
            echo_config(prop_args, cfg);
            emit(prop_args, report.text);
            return report.all_passed ? 0 : 1;
        } else if (emp->parsed()) {
            auto cfg = load_config(emp_args);
            const auto prices = marrm::cli::ingest_prices(prices_path);
            const std::string out = marrm::cli::cmd_empirical(cfg, prices);
            echo_config(emp_args, cfg);
            emit(emp_args, out);
        } else if (sim->parsed()) {
            auto cfg = load_config(sim_args);
            const std::string out = marrm::cli::cmd_simulate(cfg);
            echo_config(sim_args, cfg);
            emit(sim_args, out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
