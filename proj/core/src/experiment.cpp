#include "raftedge/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "raftedge/errors.hpp"
#include "raftedge/optimizer.hpp"

namespace raftedge {

namespace {

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const auto workers = static_cast<unsigned>(std::min<std::size_t>(hw, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex err_mx;
    std::exception_ptr err;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(err_mx);
                    if (!err) err = std::current_exception();
                    return;
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

SimStats simulate_point(const ExperimentSpec& spec, const LatencyParams& p, std::uint64_t seed) {
    SimConfig c = sim_config_from(spec, seed);
    c.params = p;
    return run_simulation(c).stats;
}

std::vector<double> default_lambda_axis() {
    std::vector<double> axis;
    for (int i = 0;; ++i) {
        const double v = 0.05 + 0.01 * i;
        if (v > 1.5 + 1e-9) break;
        axis.push_back(v);
    }
    return axis;
}

int max_attack(int n_servers) { return (n_servers + 1) / 2 - 1; }

std::string fmt_int(long long v) { return std::to_string(v); }

}  // namespace

RunMode parse_run_mode(const std::string& s) {
    if (s == "analytic") return RunMode::Analytic;
    if (s == "simulated") return RunMode::Simulated;
    if (s == "both") return RunMode::Both;
    throw ConfigError("mode must be one of analytic|simulated|both, got '" + s + "'");
}

const char* run_mode_name(RunMode mode) {
    switch (mode) {
        case RunMode::Analytic: return "analytic";
        case RunMode::Simulated: return "simulated";
        case RunMode::Both: return "both";
    }
    return "?";
}

void ExperimentSpec::validate() const {
    base.validate();
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (tasks < 1) throw ConfigError("tasks must be >= 1");
    if (lambda_rand_max <= 0.0) throw ConfigError("lambda_rand_max must be > 0");
    if (tau_base <= 0.0) throw ConfigError("tau_base must be > 0");
    for (double l : lambda_axis) {
        if (l <= 0.0) throw ConfigError("lambda axis values must be > 0");
    }
    for (double l : lambda_list) {
        if (l <= 0.0) throw ConfigError("lambda_list values must be > 0");
    }
    if (channel_mode == SimConfig::ChannelMode::Derived) fading.validate();
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

void ResultTable::write_csv(std::ostream& out) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out << ',';
        out << header[i];
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << row[i];
        }
        out << '\n';
    }
}

ResultTable ResultTable::parse_csv(std::istream& in) {
    ResultTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        if (first) {
            t.header = std::move(cells);
            first = false;
        } else {
            t.rows.push_back(std::move(cells));
        }
    }
    return t;
}

SimConfig sim_config_from(const ExperimentSpec& spec, std::uint64_t seed) {
    SimConfig c;
    c.params = spec.base;
    c.channel_mode = spec.channel_mode;
    c.fading = spec.fading;
    c.attack_mode = SimConfig::AttackMode::RandomPerTerm;
    c.task_budget = spec.tasks;
    c.seed = seed;
    return c;
}

ResultTable run_single(const ExperimentSpec& spec, std::vector<TaskRecord>* records,
                       std::ostream* raft_trace) {
    spec.validate();
    const LatencyBreakdown b = expected_total_latency(spec.base);

    ResultTable t;
    t.header = {"lambda", "m", "n", "a", "e_t_analytic"};
    std::vector<std::string> row = {
        format_number(spec.base.lambda), fmt_int(spec.base.vehicles_per_station),
        fmt_int(spec.base.n_servers), fmt_int(spec.base.attack_strength), format_number(b.total)};

    if (spec.mode != RunMode::Analytic) {
        SimConfig c = sim_config_from(spec, spec.seed);
        c.collect_records = records != nullptr;
        c.raft_trace = raft_trace;
        SimResult r = run_simulation(c);
        if (records) *records = std::move(r.records);
        t.header.insert(t.header.end(),
                        {"sim_mean", "sim_ci95", "sim_collision_rate", "sim_election_overhead",
                         "sim_elections", "sim_completed"});
        row.push_back(format_number(r.stats.mean_latency));
        row.push_back(format_number(r.stats.ci95_half));
        row.push_back(format_number(empirical_collision_rate(r.stats)));
        row.push_back(format_number(empirical_election_overhead(r.stats)));
        row.push_back(fmt_int(r.stats.election_count));
        row.push_back(fmt_int(r.stats.completed));
    }
    t.header.emplace_back("seed");
    row.push_back(fmt_int(static_cast<long long>(spec.seed)));
    t.rows.push_back(std::move(row));
    return t;
}

ResultTable run_lambda_sweep(const ExperimentSpec& spec) {
    spec.validate();
    const std::vector<double> axis =
        spec.lambda_axis.empty() ? default_lambda_axis() : spec.lambda_axis;
    if (axis.empty()) throw ConfigError("lambda sweep: empty lambda axis");
    for (int m : spec.m_list) {
        if (m < 2) throw ConfigError("lambda sweep: M must be >= 2");
    }

    const std::size_t n = spec.m_list.size() * axis.size();
    std::vector<double> analytic(n), sim_mean(n), sim_ci(n);
    const bool simulate = spec.mode != RunMode::Analytic;

    for (std::size_t mi = 0; mi < spec.m_list.size(); ++mi) {
        for (std::size_t li = 0; li < axis.size(); ++li) {
            LatencyParams p = spec.base;
            p.vehicles_per_station = spec.m_list[mi];
            p.lambda = axis[li];
            analytic[mi * axis.size() + li] = expected_total_latency(p).total;
        }
    }
    if (simulate) {
        parallel_for(n, [&](std::size_t i) {
            LatencyParams p = spec.base;
            p.vehicles_per_station = spec.m_list[i / axis.size()];
            p.lambda = axis[i % axis.size()];
            const SimStats st = simulate_point(spec, p, spec.seed + i);
            sim_mean[i] = st.mean_latency;
            sim_ci[i] = st.ci95_half;
        });
    }

    ResultTable t;
    t.header = {"m", "lambda", "e_t_analytic", "lambda_opt", "is_argmin"};
    if (simulate) t.header.insert(t.header.end(), {"sim_mean", "sim_ci95"});
    t.header.emplace_back("seed");

    for (std::size_t mi = 0; mi < spec.m_list.size(); ++mi) {
        const double lambda_opt =
            optimal_rate(spec.m_list[mi], spec.base.tau_collision, spec.base.t_encode);
        std::size_t best = 0;
        for (std::size_t li = 1; li < axis.size(); ++li) {
            if (analytic[mi * axis.size() + li] < analytic[mi * axis.size() + best]) best = li;
        }
        for (std::size_t li = 0; li < axis.size(); ++li) {
            const std::size_t i = mi * axis.size() + li;
            std::vector<std::string> row = {fmt_int(spec.m_list[mi]), format_number(axis[li]),
                                            format_number(analytic[i]), format_number(lambda_opt),
                                            li == best ? "1" : "0"};
            if (simulate) {
                row.push_back(format_number(sim_mean[i]));
                row.push_back(format_number(sim_ci[i]));
            }
            row.push_back(fmt_int(static_cast<long long>(spec.seed + i)));
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

ResultTable run_attack_sweep(const ExperimentSpec& spec) {
    spec.validate();
    const int a_max = max_attack(spec.base.n_servers);
    std::vector<int> axis = spec.attack_axis;
    if (axis.empty()) {
        for (int a = 0; a <= a_max; ++a) axis.push_back(a);
    } else {
        std::vector<int> kept;
        for (int a : axis) {
            if (a < 0) throw ConfigError("attack sweep: a must be >= 0");
            if (a > a_max) {
                std::cerr << "attack sweep: skipping a=" << a << " (requires a < N/2 with N="
                          << spec.base.n_servers << ")\n";
                continue;
            }
            kept.push_back(a);
        }
        axis = std::move(kept);
        if (axis.empty()) throw ConfigError("attack sweep: no valid attack strengths left");
    }

    const std::size_t n = spec.lambda_list.size() * axis.size();
    std::vector<double> analytic(n), sim_mean(n), sim_ci(n);
    const bool simulate = spec.mode != RunMode::Analytic;

    for (std::size_t li = 0; li < spec.lambda_list.size(); ++li) {
        for (std::size_t ai = 0; ai < axis.size(); ++ai) {
            LatencyParams p = spec.base;
            p.lambda = spec.lambda_list[li];
            p.attack_strength = axis[ai];
            analytic[li * axis.size() + ai] = expected_total_latency(p).total;
        }
    }
    if (simulate) {
        parallel_for(n, [&](std::size_t i) {
            LatencyParams p = spec.base;
            p.lambda = spec.lambda_list[i / axis.size()];
            p.attack_strength = axis[i % axis.size()];
            const SimStats st = simulate_point(spec, p, spec.seed + i);
            sim_mean[i] = st.mean_latency;
            sim_ci[i] = st.ci95_half;
        });
    }

    ResultTable t;
    t.header = {"lambda", "a", "e_t_analytic"};
    if (simulate) t.header.insert(t.header.end(), {"sim_mean", "sim_ci95"});
    t.header.emplace_back("seed");
    for (std::size_t li = 0; li < spec.lambda_list.size(); ++li) {
        for (std::size_t ai = 0; ai < axis.size(); ++ai) {
            const std::size_t i = li * axis.size() + ai;
            std::vector<std::string> row = {format_number(spec.lambda_list[li]), fmt_int(axis[ai]),
                                            format_number(analytic[i])};
            if (simulate) {
                row.push_back(format_number(sim_mean[i]));
                row.push_back(format_number(sim_ci[i]));
            }
            row.push_back(fmt_int(static_cast<long long>(spec.seed + i)));
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

ResultTable run_vehicle_sweep(const ExperimentSpec& spec) {
    spec.validate();
    for (int m : spec.m_axis) {
        if (m < 2) throw ConfigError("vehicle sweep: M must be >= 2");
    }
    const std::size_t n_m = spec.m_axis.size();
    const auto trials = static_cast<std::size_t>(spec.trials);

    std::vector<double> lambda_opt(n_m), analytic_opt(n_m), analytic_rand(n_m);

    // common random draws across the M axis: gap comparisons between adjacent
    // M values then cancel the heavy-tailed 1/lambda noise
    std::vector<double> draws(trials);
    {
        std::mt19937_64 rng(spec.seed + 0x5157ULL);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (std::size_t t = 0; t < trials; ++t) {
            draws[t] = spec.lambda_rand_max * (1.0 - unif(rng));  // in (0, max]
        }
    }

    for (std::size_t mi = 0; mi < n_m; ++mi) {
        const int m = spec.m_axis[mi];
        LatencyParams p = spec.base;
        p.vehicles_per_station = m;
        lambda_opt[mi] = optimal_rate(m, p.tau_collision, p.t_encode);
        p.lambda = lambda_opt[mi];
        analytic_opt[mi] = expected_total_latency(p).total;

        double sum = 0.0;
        for (std::size_t t = 0; t < trials; ++t) {
            p.lambda = draws[t];
            sum += expected_total_latency(p).total;
        }
        analytic_rand[mi] = sum / static_cast<double>(trials);
    }

    const bool simulate = spec.mode != RunMode::Analytic;
    std::vector<double> sim_opt(n_m), sim_opt_ci(n_m), sim_rand(n_m);
    if (simulate) {
        const std::size_t per_m = trials + 1;
        std::vector<double> sim_vals(n_m * per_m);
        parallel_for(n_m * per_m, [&](std::size_t i) {
            const std::size_t mi = i / per_m;
            const std::size_t j = i % per_m;
            LatencyParams p = spec.base;
            p.vehicles_per_station = spec.m_axis[mi];
            p.lambda = j == 0 ? lambda_opt[mi] : draws[j - 1];
            const SimStats st = simulate_point(spec, p, spec.seed + i);
            sim_vals[i] = st.mean_latency;
            if (j == 0) sim_opt_ci[mi] = st.ci95_half;
        });
        for (std::size_t mi = 0; mi < n_m; ++mi) {
            sim_opt[mi] = sim_vals[mi * per_m];
            double sum = 0.0;
            for (std::size_t t = 0; t < trials; ++t) sum += sim_vals[mi * per_m + 1 + t];
            sim_rand[mi] = sum / static_cast<double>(trials);
        }
    }

    ResultTable t;
    t.header = {"m", "lambda_opt", "analytic_optimal", "analytic_random_mean"};
    if (simulate) {
        t.header.insert(t.header.end(), {"sim_optimal_mean", "sim_optimal_ci95", "sim_random_mean"});
    }
    t.header.insert(t.header.end(), {"trials", "seed"});
    for (std::size_t mi = 0; mi < n_m; ++mi) {
        std::vector<std::string> row = {fmt_int(spec.m_axis[mi]), format_number(lambda_opt[mi]),
                                        format_number(analytic_opt[mi]),
                                        format_number(analytic_rand[mi])};
        if (simulate) {
            row.push_back(format_number(sim_opt[mi]));
            row.push_back(format_number(sim_opt_ci[mi]));
            row.push_back(format_number(sim_rand[mi]));
        }
        row.push_back(fmt_int(spec.trials));
        row.push_back(fmt_int(static_cast<long long>(spec.seed)));
        t.rows.push_back(std::move(row));
    }
    return t;
}

ResultTable run_mn_surface(const ExperimentSpec& spec) {
    spec.validate();
    std::vector<int> n_axis = spec.n_axis;
    if (n_axis.empty()) {
        for (int n = 4; n <= 20; n += 2) n_axis.push_back(n);
    }
    for (int m : spec.m_axis) {
        if (m < 2) throw ConfigError("mn surface: M must be >= 2");
    }
    for (int nn : n_axis) {
        if (nn < 3) throw ConfigError("mn surface: N must be >= 3");
    }

    const std::size_t n = spec.m_axis.size() * n_axis.size();
    std::vector<double> analytic(n), tau(n), sim_mean(n), sim_ci(n);
    std::vector<int> a_used(n);
    const bool simulate = spec.mode != RunMode::Analytic;

    auto cell_params = [&](std::size_t i) {
        LatencyParams p = spec.base;
        p.vehicles_per_station = spec.m_axis[i / n_axis.size()];
        p.n_servers = n_axis[i % n_axis.size()];
        p.tau_election = election_time(p.n_servers, spec.tau_base);
        p.attack_strength = std::min(p.attack_strength, max_attack(p.n_servers));
        return p;
    };

    for (std::size_t i = 0; i < n; ++i) {
        const LatencyParams p = cell_params(i);
        if (p.attack_strength != spec.base.attack_strength) {
            std::cerr << "mn surface: clamping a to " << p.attack_strength << " at N="
                      << p.n_servers << " (requires a < N/2)\n";
        }
        tau[i] = p.tau_election;
        a_used[i] = p.attack_strength;
        analytic[i] = expected_total_latency(p).total;
    }
    if (simulate) {
        parallel_for(n, [&](std::size_t i) {
            const SimStats st = simulate_point(spec, cell_params(i), spec.seed + i);
            sim_mean[i] = st.mean_latency;
            sim_ci[i] = st.ci95_half;
        });
    }

    ResultTable t;
    t.header = {"m", "n", "tau_election", "a", "e_t_analytic"};
    if (simulate) t.header.insert(t.header.end(), {"sim_mean", "sim_ci95"});
    t.header.emplace_back("seed");
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::string> row = {fmt_int(spec.m_axis[i / n_axis.size()]),
                                        fmt_int(n_axis[i % n_axis.size()]), format_number(tau[i]),
                                        fmt_int(a_used[i]), format_number(analytic[i])};
        if (simulate) {
            row.push_back(format_number(sim_mean[i]));
            row.push_back(format_number(sim_ci[i]));
        }
        row.push_back(fmt_int(static_cast<long long>(spec.seed + i)));
        t.rows.push_back(std::move(row));
    }
    return t;
}

ResultTable run_experiment(const ExperimentSpec& spec) {
    switch (spec.kind) {
        case ExperimentKind::SingleRun: return run_single(spec);
        case ExperimentKind::LambdaSweep: return run_lambda_sweep(spec);
        case ExperimentKind::AttackSweep: return run_attack_sweep(spec);
        case ExperimentKind::VehicleSweep: return run_vehicle_sweep(spec);
        case ExperimentKind::MnSurface: return run_mn_surface(spec);
    }
    throw ConfigError("unknown experiment kind");
}

void write_task_records(const std::vector<TaskRecord>& records, std::ostream& out) {
    out << "task_id,station,vehicle,extraction_start,collision_retries,drop_retries,send_time,"
           "forward_done,leader_receipt,commit_time,broadcast_done,response_time,extract_total,"
           "encode_total,leader_wait,commit_wait,total\n";
    for (const TaskRecord& r : records) {
        out << r.task_id << ',' << r.station << ',' << r.vehicle << ','
            << format_number(r.extraction_start) << ',' << r.collision_retries << ','
            << r.drop_retries << ',' << format_number(r.send_time) << ','
            << format_number(r.forward_done) << ',' << format_number(r.leader_receipt) << ','
            << format_number(r.commit_time) << ',' << format_number(r.broadcast_done) << ','
            << format_number(r.response_time) << ',' << format_number(r.extract_total) << ','
            << format_number(r.encode_total) << ',' << format_number(r.leader_wait) << ','
            << format_number(r.commit_wait) << ',' << format_number(r.total()) << '\n';
    }
}

}  // namespace raftedge
