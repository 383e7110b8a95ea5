#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "raftedge/channel.hpp"
#include "raftedge/latency.hpp"

namespace raftedge {

struct AttackEvent {
    double time = 0.0;
    std::vector<int> nodes;
    bool attacked = true;
};

struct SimConfig {
    LatencyParams params;

    enum class ChannelMode { Direct, Derived };
    ChannelMode channel_mode = ChannelMode::Direct;
    FadingParams fading;  // Derived mode only

    enum class AttackMode { None, RandomPerTerm, Schedule };
    AttackMode attack_mode = AttackMode::RandomPerTerm;
    std::vector<AttackEvent> schedule;  // Schedule mode

    int task_budget = 10000;
    std::uint64_t seed = 42;
    double warmup_fraction = 0.05;
    bool collect_records = false;
    std::ostream* raft_trace = nullptr;
};

/// Per-task timestamped lifecycle. All stage sums add up exactly to
/// response_time - extraction_start.
struct TaskRecord {
    std::uint64_t task_id = 0;
    int station = -1;
    int vehicle = -1;
    double extraction_start = 0.0;
    int collision_retries = 0;
    int drop_retries = 0;
    double send_time = 0.0;       // successful send = server arrival
    double forward_done = 0.0;    // reached the leader's doorstep (+T_f)
    double leader_receipt = 0.0;  // accepted by a live leader
    double commit_time = 0.0;
    double broadcast_done = 0.0;  // commit broadcast received (+T_p)
    double response_time = 0.0;   // decoded and answered (+T_dc)

    double extract_total = 0.0;
    double encode_total = 0.0;
    double leader_wait = 0.0;
    double commit_wait = 0.0;

    double total() const { return response_time - extraction_start; }
};

struct SimStats {
    int completed = 0;        // tasks in the statistics (post warm-up)
    int completed_all = 0;    // including warm-up
    double mean_latency = 0.0;
    double var_latency = 0.0;
    double ci95_half = 0.0;

    double mean_extract = 0.0;
    double mean_encode = 0.0;
    double mean_decode = 0.0;
    double mean_forward = 0.0;
    double mean_leader_wait = 0.0;
    double mean_commit_wait = 0.0;
    double mean_broadcast = 0.0;

    long long contention_rounds = 0;  // synchronized first-send group attempts
    long long collisions = 0;         // contention rounds with at least one collision
    long long drops = 0;              // channel drops (each retries the transmission)
    long long tasks_started = 0;
    int in_flight_end = 0;

    int election_count = 0;
    int leader_failures = 0;  // elections caused by an attacked leader
    double sim_time_end = 0.0;
};

struct SimResult {
    SimStats stats;
    std::vector<TaskRecord> records;  // only when collect_records
};

/// Runs the seeded end-to-end simulation until task_budget tasks completed.
/// Deterministic: identical config yields identical results. Throws
/// LivenessError if the cluster stays leaderless for over 100 election times.
SimResult run_simulation(const SimConfig& cfg);

/// Fraction of contention rounds with at least one pairwise collision.
double empirical_collision_rate(const SimStats& stats);

/// Mean per-task latency attributable to waiting for a live leader.
double empirical_election_overhead(const SimStats& stats);

}  // namespace raftedge
