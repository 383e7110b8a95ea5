#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "raftedge/latency.hpp"
#include "raftedge/simnet.hpp"

namespace raftedge {

enum class ExperimentKind { SingleRun, LambdaSweep, AttackSweep, VehicleSweep, MnSurface };

enum class RunMode { Analytic, Simulated, Both };

RunMode parse_run_mode(const std::string& s);  // throws ConfigError
const char* run_mode_name(RunMode mode);

/// Everything a sweep needs: base parameters, axes, mode, seeding, output.
struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::SingleRun;
    LatencyParams base;

    std::vector<double> lambda_axis;       // lambda sweep; default 0.05..1.5 step 0.01
    std::vector<int> m_list = {2, 3, 4};   // lambda sweep curves
    std::vector<int> attack_axis;          // attack sweep; default 0..ceil(N/2)-1
    std::vector<double> lambda_list = {0.2, 0.3, 0.4};  // attack sweep curves
    std::vector<int> m_axis = {2, 3, 4, 5, 6};          // vehicle sweep / surface
    std::vector<int> n_axis;               // surface; default 4..20 step 2
    double tau_base = 65.144;              // surface: tau_ele = tau_base * ln N
    double lambda_rand_max = 1.0;          // vehicle sweep random draw range (0, max]

    RunMode mode = RunMode::Analytic;
    int trials = 1000;
    int tasks = 10000;
    std::uint64_t seed = 42;
    std::string out_path;      // empty: stdout
    std::string records_path;  // single run only: per-task record dump

    SimConfig::ChannelMode channel_mode = SimConfig::ChannelMode::Direct;
    FadingParams fading;

    void validate() const;  // throws ConfigError
};

/// CSV-shaped result: cells kept as the exact emitted strings so that a
/// parse of the output reproduces the table bit for bit.
struct ResultTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    bool operator==(const ResultTable&) const = default;

    void write_csv(std::ostream& out) const;
    static ResultTable parse_csv(std::istream& in);
};

/// Shortest decimal form at 9 significant digits ("%.9g").
std::string format_number(double v);

SimConfig sim_config_from(const ExperimentSpec& spec, std::uint64_t seed);

ResultTable run_single(const ExperimentSpec& spec, std::vector<TaskRecord>* records = nullptr,
                       std::ostream* raft_trace = nullptr);
ResultTable run_lambda_sweep(const ExperimentSpec& spec);
ResultTable run_attack_sweep(const ExperimentSpec& spec);
ResultTable run_vehicle_sweep(const ExperimentSpec& spec);
ResultTable run_mn_surface(const ExperimentSpec& spec);

/// Dispatches on spec.kind.
ResultTable run_experiment(const ExperimentSpec& spec);

void write_task_records(const std::vector<TaskRecord>& records, std::ostream& out);

/// Flat JSON config file -> spec. Unknown keys are rejected; a missing or
/// empty file yields the defaults. Throws ConfigError with the offending key.
ExperimentSpec load_config(const std::string& path);

}  // namespace raftedge
