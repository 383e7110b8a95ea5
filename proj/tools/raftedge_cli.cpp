#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "raftedge/errors.hpp"
#include "raftedge/experiment.hpp"
#include "raftedge/optimizer.hpp"

namespace {

using namespace raftedge;

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> mode;
    std::optional<int> tasks;
    std::optional<std::string> out;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "JSON config file (flat keys)");
    cmd->add_option("--seed", f.seed, "RNG seed (wins over RAFT_EDGE_SIM_SEED)");
    cmd->add_option("--mode", f.mode, "analytic|simulated|both");
    cmd->add_option("--tasks", f.tasks, "completed tasks per simulation run");
    cmd->add_option("--out", f.out, "output CSV path (default stdout)");
}

ExperimentSpec build_spec(const CommonFlags& f, ExperimentKind kind) {
    ExperimentSpec spec;
    if (!f.config_path.empty()) spec = load_config(f.config_path);
    spec.kind = kind;
    if (f.seed) {
        spec.seed = *f.seed;
    } else if (const char* env = std::getenv("RAFT_EDGE_SIM_SEED")) {
        try {
            std::size_t used = 0;
            spec.seed = std::stoull(env, &used);
            if (env[used] != '\0') throw std::invalid_argument(env);
        } catch (const std::exception&) {
            throw ConfigError(std::string("RAFT_EDGE_SIM_SEED: not a valid seed: '") + env + "'");
        }
    }
    if (f.mode) spec.mode = parse_run_mode(*f.mode);
    if (f.tasks) spec.tasks = *f.tasks;
    if (f.out) spec.out_path = *f.out;
    return spec;
}

void emit(const ResultTable& table, const std::string& out_path) {
    if (out_path.empty()) {
        table.write_csv(std::cout);
        if (!std::cout) throw std::ios_base::failure("failed writing to stdout");
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::ios_base::failure("cannot open output file: " + out_path);
    table.write_csv(out);
    out.flush();
    if (!out) throw std::ios_base::failure("failed writing output file: " + out_path);
}

int run(int argc, char** argv) {
    CLI::App app{"Raft-secured vehicular edge computing: latency experiments"};
    app.require_subcommand(1);

    CommonFlags fl_sim, fl_lambda, fl_attack, fl_vehicle, fl_surface, fl_opt;
    std::string records_path, trace_path;

    CLI::App* sim = app.add_subcommand("simulate", "Single analytic/simulated run");
    add_common(sim, fl_sim);
    sim->add_option("--records", records_path, "per-task record CSV (simulated modes)");
    sim->add_option("--trace", trace_path, "raft event trace file (simulated modes)");

    add_common(app.add_subcommand("sweep-lambda", "Latency vs extraction rate, per M"), fl_lambda);
    add_common(app.add_subcommand("sweep-attack", "Latency vs attack strength, per lambda"),
               fl_attack);
    add_common(app.add_subcommand("sweep-vehicles", "Optimal vs random rate, per M"), fl_vehicle);
    add_common(app.add_subcommand("surface-mn", "Latency over the (M, N) grid"), fl_surface);

    CLI::App* opt = app.add_subcommand("optimal-rate", "Print the closed-form optimal rate");
    add_common(opt, fl_opt);
    std::optional<int> opt_m;
    std::optional<double> opt_tau, opt_tenc;
    opt->add_option("--m", opt_m, "vehicles per station (>= 2)");
    opt->add_option("--tau-c", opt_tau, "collision window, ms");
    opt->add_option("--t-encode", opt_tenc, "encoding time, ms");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (sim->parsed()) {
        ExperimentSpec spec = build_spec(fl_sim, ExperimentKind::SingleRun);
        if (!records_path.empty()) spec.records_path = records_path;
        std::vector<TaskRecord> records;
        std::ofstream trace;
        if (!trace_path.empty() && spec.mode != RunMode::Analytic) {
            trace.open(trace_path);
            if (!trace) throw std::ios_base::failure("cannot open trace file: " + trace_path);
        }
        const bool want_records = !spec.records_path.empty() && spec.mode != RunMode::Analytic;
        const ResultTable table =
            run_single(spec, want_records ? &records : nullptr, trace.is_open() ? &trace : nullptr);
        if (want_records) {
            std::ofstream rec(spec.records_path);
            if (!rec) throw std::ios_base::failure("cannot open records file: " + spec.records_path);
            write_task_records(records, rec);
            rec.flush();
            if (!rec) {
                throw std::ios_base::failure("failed writing records file: " + spec.records_path);
            }
        }
        emit(table, spec.out_path);
        return 0;
    }
    if (opt->parsed()) {
        ExperimentSpec spec = build_spec(fl_opt, ExperimentKind::SingleRun);
        const int m = opt_m.value_or(spec.base.vehicles_per_station);
        const double tau = opt_tau.value_or(spec.base.tau_collision);
        const double tenc = opt_tenc.value_or(spec.base.t_encode);
        ResultTable t;
        t.header = {"m", "tau_collision", "t_encode", "lambda_opt"};
        t.rows.push_back({std::to_string(m), format_number(tau), format_number(tenc),
                          format_number(optimal_rate(m, tau, tenc))});
        emit(t, spec.out_path);
        return 0;
    }

    ExperimentKind kind;
    const CommonFlags* flags;
    if (app.get_subcommand("sweep-lambda")->parsed()) {
        kind = ExperimentKind::LambdaSweep;
        flags = &fl_lambda;
    } else if (app.get_subcommand("sweep-attack")->parsed()) {
        kind = ExperimentKind::AttackSweep;
        flags = &fl_attack;
    } else if (app.get_subcommand("sweep-vehicles")->parsed()) {
        kind = ExperimentKind::VehicleSweep;
        flags = &fl_vehicle;
    } else {
        kind = ExperimentKind::MnSurface;
        flags = &fl_surface;
    }
    const ExperimentSpec spec = build_spec(*flags, kind);
    emit(run_experiment(spec), spec.out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const LivenessError& e) {
        std::cerr << "liveness failure: " << e.what() << '\n';
        return 3;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return 4;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
