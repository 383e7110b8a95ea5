#pragma once

#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "raftedge/raft/types.hpp"

namespace raftedge::raft {

/// Thrown when a client request reaches a non-leader; carries the last known leader.
class NotLeaderError : public std::runtime_error {
public:
    explicit NotLeaderError(std::optional<NodeId> leader_hint)
        : std::runtime_error("client request sent to a non-leader node"),
          leader_hint_(leader_hint) {}
    std::optional<NodeId> leader_hint() const { return leader_hint_; }

private:
    std::optional<NodeId> leader_hint_;
};

/// One Raft peer: role, term, vote, hash-chained log, commit index.
/// Strictly single-threaded; all mutation happens inside tick / handle_message
/// driven by one scheduler.
class Node {
public:
    Node(NodeId id, std::vector<NodeId> peers, RaftConfig cfg, double now, std::mt19937_64& rng);

    /// Timer-driven transitions: election timeout and leader heartbeats.
    std::vector<Message> tick(double now, std::mt19937_64& rng);

    std::vector<Message> handle_message(const Message& msg, double now, std::mt19937_64& rng);

    /// Leader-only: append a new hash-chained entry and replicate it.
    std::vector<Message> client_request(const std::string& payload, double now);

    /// Voluntary end-of-term step down (scheduled rotation).
    void step_down(double now, std::mt19937_64& rng);

    /// Crash / recover. Recovery resumes as a Follower with a fresh timeout.
    void set_alive(bool alive, double now, std::mt19937_64& rng);

    /// Next time this node's timers need service (+inf when dead).
    double next_timer() const;

    NodeId id() const { return id_; }
    Role role() const { return role_; }
    bool alive() const { return alive_; }
    std::uint64_t current_term() const { return current_term_; }
    std::optional<NodeId> voted_for() const { return voted_for_; }
    std::optional<NodeId> known_leader() const { return known_leader_; }
    const std::vector<LogEntry>& log() const { return log_; }
    std::uint64_t commit_index() const { return commit_index_; }
    double election_deadline() const { return election_deadline_; }
    bool chain_ok() const { return verify_chain(log_); }

private:
    void reset_election_deadline(double now, std::mt19937_64& rng);
    void become_follower(std::uint64_t term, double now, std::mt19937_64& rng);
    std::vector<Message> become_leader(double now);
    Message append_entries_for(NodeId peer) const;
    std::uint64_t last_log_index() const { return log_.empty() ? 0 : log_.back().index; }
    std::uint64_t last_log_term() const { return log_.empty() ? 0 : log_.back().term; }
    bool candidate_up_to_date(std::uint64_t cand_last_term, std::uint64_t cand_last_index) const;
    void advance_commit();

    NodeId id_;
    std::vector<NodeId> peers_;
    RaftConfig cfg_;

    Role role_ = Role::Follower;
    bool alive_ = true;
    std::uint64_t current_term_ = 1;
    std::optional<NodeId> voted_for_;
    std::optional<NodeId> known_leader_;
    std::vector<LogEntry> log_;
    std::uint64_t commit_index_ = 0;

    double election_deadline_ = 0.0;
    double heartbeat_due_ = 0.0;

    // Candidate state
    std::vector<NodeId> votes_;

    // Leader state, indexed by position in peers_
    std::vector<std::uint64_t> next_index_;
    std::vector<std::uint64_t> match_index_;
};

}  // namespace raftedge::raft
