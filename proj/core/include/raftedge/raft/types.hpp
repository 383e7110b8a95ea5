#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace raftedge::raft {

using NodeId = int;

enum class Role { Follower, Candidate, Leader };

const char* role_name(Role role);

/// Replicated log entry. Entries are hash-chained from a fixed genesis digest
/// as a tamper signal; the digest is 64-bit FNV-1a, an integrity aid, not a
/// cryptographic commitment.
struct LogEntry {
    std::uint64_t index = 0;  // 1-based, strictly increasing by 1
    std::uint64_t term = 0;
    std::string payload;      // opaque task bytes
    std::uint64_t prev_hash = 0;
    std::uint64_t hash = 0;
};

std::uint64_t genesis_hash();
std::uint64_t chain_hash(std::uint64_t index, std::uint64_t term, const std::string& payload,
                         std::uint64_t prev_hash);

/// Verifies the chain of `log` from the genesis digest.
bool verify_chain(const std::vector<LogEntry>& log);

enum class MsgKind {
    RequestVote,
    VoteGranted,
    AppendEntries,
    AppendAck,
    ClientRequest,
    ClientResponse,
};

const char* msg_kind_name(MsgKind kind);

struct Message {
    MsgKind kind = MsgKind::RequestVote;
    NodeId sender = -1;
    NodeId receiver = -1;
    std::uint64_t term = 0;

    // RequestVote
    NodeId candidate = -1;
    std::uint64_t last_log_index = 0;
    std::uint64_t last_log_term = 0;

    // VoteGranted
    bool granted = false;

    // AppendEntries
    std::uint64_t prev_index = 0;
    std::uint64_t prev_term = 0;
    std::uint64_t leader_commit = 0;
    std::vector<LogEntry> entries;

    // AppendAck
    bool success = false;
    std::uint64_t match_index = 0;

    // ClientRequest / ClientResponse
    std::string payload;
};

struct RaftConfig {
    /// Election timeouts are drawn uniformly from [base, 2*base].
    double election_timeout_base = 100.0;
    /// Heartbeat interval; defaults to a third of the timeout base.
    double heartbeat_interval = 100.0 / 3.0;
    /// Max entries shipped per AppendEntries when a follower catches up.
    std::size_t max_entries_per_message = 64;
};

/// Largest index replicated on a strict majority of the cluster whose entry
/// term equals the leader's current term. `match` holds per-peer match
/// indices; the leader's own last index participates implicitly.
std::uint64_t majority_commit_index(const std::vector<std::uint64_t>& peer_match,
                                    std::size_t cluster_size, std::uint64_t current_term,
                                    const std::vector<LogEntry>& log);

}  // namespace raftedge::raft
