#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <queue>
#include <random>
#include <set>
#include <vector>

#include "raftedge/raft/node.hpp"

namespace raftedge::raft {

struct ClusterConfig {
    int n_nodes = 3;
    RaftConfig raft;
    double msg_delay_min = 0.0;
    double msg_delay_max = 0.0;
    double drop_prob = 0.0;       // applied to every in-flight message
    double term_duration = 0.0;   // scheduled leader rotation period; 0 disables
    std::uint64_t seed = 42;
};

/// Deterministic message-passing harness around a set of Raft nodes.
/// Single-threaded; identical (config, seed, schedule) yields identical traces.
class Cluster {
public:
    explicit Cluster(const ClusterConfig& cfg);

    /// Earliest pending event (delivery, node timer, or scheduled rotation).
    double next_event_time() const;

    /// Processes every event with time <= t.
    void run_until(double t);

    bool has_leader() const;
    NodeId leader_id() const;  // -1 when leaderless

    /// Appends a payload through the current leader. Throws NotLeaderError
    /// when no live leader exists. Returns the new entry's index.
    std::uint64_t submit(const std::string& payload, double now);

    /// Crash (attacked=true) or recover a set of nodes. Enforces that the
    /// total attacked count stays below N/2.
    void set_attacked(const std::vector<NodeId>& ids, bool attacked, double now);

    const Node& node(NodeId id) const { return nodes_[static_cast<std::size_t>(id)]; }
    int size() const { return static_cast<int>(nodes_.size()); }
    int attacked_count() const { return static_cast<int>(attacked_.size()); }

    int election_count() const { return election_count_; }
    double last_leader_loss() const { return last_leader_loss_; }

    /// (term, node) for every leadership assumption, in order.
    const std::vector<std::pair<std::uint64_t, NodeId>>& leadership_history() const {
        return leadership_history_;
    }

    // Hooks, optional.
    std::function<void(double time, const LogEntry& entry)> on_commit;
    std::function<void(double time, NodeId id, std::uint64_t term)> on_leader_elected;
    std::ostream* trace = nullptr;

    std::mt19937_64& rng() { return rng_; }

private:
    struct Pending {
        double time;
        std::uint64_t seq;
        Message msg;
        bool operator>(const Pending& o) const {
            return time != o.time ? time > o.time : seq > o.seq;
        }
    };

    void route(std::vector<Message>&& msgs, double now);
    void deliver(const Pending& p);
    void service_timers(double now);
    void note_role_change(NodeId id, Role before, double now);
    void note_commits(NodeId id, std::uint64_t before, double now);
    void write_trace(double now, NodeId id, const char* event, std::uint64_t term,
                     std::uint64_t index);

    ClusterConfig cfg_;
    std::mt19937_64 rng_;
    std::vector<Node> nodes_;
    std::priority_queue<Pending, std::vector<Pending>, std::greater<>> queue_;
    std::uint64_t seq_ = 0;
    std::set<NodeId> attacked_;

    NodeId leader_ = -1;
    double leader_since_ = 0.0;
    double last_leader_loss_ = 0.0;
    int election_count_ = 0;
    std::uint64_t reported_commit_ = 0;
    std::vector<std::pair<std::uint64_t, NodeId>> leadership_history_;
};

}  // namespace raftedge::raft
