#include <clocale>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"

#include "cswap/circuit_map.hpp"
#include "cswap/config.hpp"
#include "cswap/experiments.hpp"
#include "cswap/output.hpp"

using namespace cswap;

namespace {

constexpr int exit_config = 2;
constexpr int exit_numerical = 3;

const std::map<std::string, ExperimentKind> commands = {
    {"trace", ExperimentKind::fidelity_trace},      {"scan-j2", ExperimentKind::scan_j2},
    {"scan-j1", ExperimentKind::scan_j1},           {"scan-delta", ExperimentKind::scan_delta},
    {"qutrit", ExperimentKind::qutrit_compare},     {"crosstalk", ExperimentKind::crosstalk_scan},
    {"n5", ExperimentKind::n5_trace},               {"drive", ExperimentKind::drive_demo},
    {"circuit-map", ExperimentKind::circuit_map},   {"search", ExperimentKind::search},
};

const char* describe(ExperimentKind k) {
    switch (k) {
    case ExperimentKind::fidelity_trace: return "average fidelity against time for one control configuration";
    case ExperimentKind::scan_j2: return "gate time and fidelities while varying J2 = J2x = J2z";
    case ExperimentKind::scan_j1: return "gate time and fidelities while varying J1";
    case ExperimentKind::scan_delta: return "gate time and fidelities while varying J2x at fixed J2z";
    case ExperimentKind::qutrit_compare: return "qubit against qutrit controls for rows 6 and 11";
    case ExperimentKind::crosstalk_scan: return "fidelities with couplings beyond nearest neighbour";
    case ExperimentKind::n5_trace: return "open five-site gate";
    case ExperimentKind::drive_demo: return "Rabi drive between closed and open control states";
    case ExperimentKind::circuit_map: return "map every published circuit row to spin parameters";
    case ExperimentKind::search: return "multi-start search over circuit parameters";
    }
    return "";
}

} // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");
    CLI::App app{"Controlled-swap spin chain gate simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_path;
    std::uint64_t seed = 0;
    int threads = 0;
    bool no_noise = false, print_config = false;
    app.add_option("--config", config_path, "experiment config file")->check(CLI::ExistingFile);
    app.add_option("--out", out_path, "CSV output path; the JSON summary goes next to it");
    auto* seed_opt = app.add_option("--seed", seed, "random seed");
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_flag("--no-noise", no_noise, "set gamma to zero");
    app.add_flag("--print-config", print_config, "print the resolved config and exit");

    std::map<CLI::App*, ExperimentKind> subs;
    for (const auto& [name, kind] : commands) subs[app.add_subcommand(name, describe(kind))] = kind;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    ExperimentKind kind{};
    std::string cmd;
    for (const auto& [sub, k] : subs)
        if (sub->parsed()) kind = k, cmd = sub->get_name();

    ExperimentConfig cfg;
    try {
        if (!config_path.empty()) cfg = load_config(config_path, false);
        cfg.kind = kind;
        if (*seed_opt) cfg.seed = seed;
        if (threads > 0) cfg.threads = threads;
        if (no_noise) cfg.gamma = 0.0;
        cfg.resolve();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    }
    if (print_config) {
        std::cout << emit_config(cfg);
        return 0;
    }
    if (out_path.empty()) out_path = cmd + ".csv";

    try {
        RunRecord rec = run_experiment(cfg);
        emit(rec, out_path);
        for (const auto& w : rec.warnings) std::cerr << "warning: " << w << "\n";
        std::cout << rec.summary.dump(2) << "\n";
        std::cerr << "wrote " << out_path << " and " << json_path_for(out_path) << " (" << rec.rows.size()
                  << " rows, " << rec.wall_time << " s)\n";
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const SingularMatrixError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::domain_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
