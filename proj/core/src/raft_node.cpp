#include "raftedge/raft/node.hpp"

#include <algorithm>
#include <limits>

namespace raftedge::raft {

const char* role_name(Role role) {
    switch (role) {
        case Role::Follower: return "follower";
        case Role::Candidate: return "candidate";
        case Role::Leader: return "leader";
    }
    return "?";
}

const char* msg_kind_name(MsgKind kind) {
    switch (kind) {
        case MsgKind::RequestVote: return "request_vote";
        case MsgKind::VoteGranted: return "vote_granted";
        case MsgKind::AppendEntries: return "append_entries";
        case MsgKind::AppendAck: return "append_ack";
        case MsgKind::ClientRequest: return "client_request";
        case MsgKind::ClientResponse: return "client_response";
    }
    return "?";
}

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= kFnvPrime;
    }
    return h;
}

}  // namespace

std::uint64_t genesis_hash() { return fnv1a(kFnvOffset, "raftedge-genesis", 16); }

std::uint64_t chain_hash(std::uint64_t index, std::uint64_t term, const std::string& payload,
                         std::uint64_t prev_hash) {
    std::uint64_t h = kFnvOffset;
    h = fnv1a(h, &index, sizeof(index));
    h = fnv1a(h, &term, sizeof(term));
    h = fnv1a(h, payload.data(), payload.size());
    h = fnv1a(h, &prev_hash, sizeof(prev_hash));
    return h;
}

bool verify_chain(const std::vector<LogEntry>& log) {
    std::uint64_t prev = genesis_hash();
    std::uint64_t expect_index = 1;
    std::uint64_t prev_term = 0;
    for (const LogEntry& e : log) {
        if (e.index != expect_index) return false;
        if (e.term < prev_term) return false;
        if (e.prev_hash != prev) return false;
        if (e.hash != chain_hash(e.index, e.term, e.payload, e.prev_hash)) return false;
        prev = e.hash;
        prev_term = e.term;
        ++expect_index;
    }
    return true;
}

std::uint64_t majority_commit_index(const std::vector<std::uint64_t>& peer_match,
                                    std::size_t cluster_size, std::uint64_t current_term,
                                    const std::vector<LogEntry>& log) {
    const std::uint64_t last = log.empty() ? 0 : log.back().index;
    for (std::uint64_t n = last; n >= 1; --n) {
        std::size_t replicas = 1;  // the leader itself
        for (std::uint64_t m : peer_match) {
            if (m >= n) ++replicas;
        }
        if (2 * replicas > cluster_size && log[n - 1].term == current_term) return n;
    }
    return 0;
}

Node::Node(NodeId id, std::vector<NodeId> peers, RaftConfig cfg, double now,
           std::mt19937_64& rng)
    : id_(id), peers_(std::move(peers)), cfg_(std::move(cfg)) {
    reset_election_deadline(now, rng);
}

void Node::reset_election_deadline(double now, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(cfg_.election_timeout_base,
                                                2.0 * cfg_.election_timeout_base);
    election_deadline_ = now + dist(rng);
}

void Node::become_follower(std::uint64_t term, double now, std::mt19937_64& rng) {
    if (term > current_term_) {
        current_term_ = term;
        voted_for_.reset();
    }
    role_ = Role::Follower;
    votes_.clear();
    reset_election_deadline(now, rng);
}

double Node::next_timer() const {
    if (!alive_) return std::numeric_limits<double>::infinity();
    return role_ == Role::Leader ? heartbeat_due_ : election_deadline_;
}

bool Node::candidate_up_to_date(std::uint64_t cand_last_term, std::uint64_t cand_last_index) const {
    if (cand_last_term != last_log_term()) return cand_last_term > last_log_term();
    return cand_last_index >= last_log_index();
}

Message Node::append_entries_for(NodeId peer) const {
    const std::size_t pi = static_cast<std::size_t>(
        std::find(peers_.begin(), peers_.end(), peer) - peers_.begin());
    const std::uint64_t next = next_index_[pi];
    Message m;
    m.kind = MsgKind::AppendEntries;
    m.sender = id_;
    m.receiver = peer;
    m.term = current_term_;
    m.prev_index = next - 1;
    m.prev_term = m.prev_index == 0 ? 0 : log_[m.prev_index - 1].term;
    m.leader_commit = commit_index_;
    const std::uint64_t last = last_log_index();
    for (std::uint64_t i = next; i <= last && m.entries.size() < cfg_.max_entries_per_message; ++i) {
        m.entries.push_back(log_[i - 1]);
    }
    return m;
}

std::vector<Message> Node::tick(double now, std::mt19937_64& rng) {
    std::vector<Message> out;
    if (!alive_) return out;

    if (role_ == Role::Leader) {
        if (now >= heartbeat_due_) {
            heartbeat_due_ = now + cfg_.heartbeat_interval;
            for (NodeId peer : peers_) out.push_back(append_entries_for(peer));
        }
        return out;
    }

    if (now >= election_deadline_) {
        // Stand for election.
        role_ = Role::Candidate;
        ++current_term_;
        voted_for_ = id_;
        votes_ = {id_};
        known_leader_.reset();
        reset_election_deadline(now, rng);
        for (NodeId peer : peers_) {
            Message m;
            m.kind = MsgKind::RequestVote;
            m.sender = id_;
            m.receiver = peer;
            m.term = current_term_;
            m.candidate = id_;
            m.last_log_index = last_log_index();
            m.last_log_term = last_log_term();
            out.push_back(m);
        }
    }
    return out;
}

std::vector<Message> Node::become_leader(double now) {
    role_ = Role::Leader;
    known_leader_ = id_;
    votes_.clear();
    next_index_.assign(peers_.size(), last_log_index() + 1);
    match_index_.assign(peers_.size(), 0);
    heartbeat_due_ = now + cfg_.heartbeat_interval;
    std::vector<Message> out;
    for (NodeId peer : peers_) out.push_back(append_entries_for(peer));
    return out;
}

std::vector<Message> Node::handle_message(const Message& msg, double now, std::mt19937_64& rng) {
    std::vector<Message> out;
    if (!alive_) return out;

    if (msg.term > current_term_) become_follower(msg.term, now, rng);

    switch (msg.kind) {
        case MsgKind::RequestVote: {
            Message reply;
            reply.kind = MsgKind::VoteGranted;
            reply.sender = id_;
            reply.receiver = msg.sender;
            reply.term = current_term_;
            const bool can_vote = !voted_for_ || *voted_for_ == msg.candidate;
            reply.granted = msg.term >= current_term_ && role_ != Role::Leader && can_vote &&
                            candidate_up_to_date(msg.last_log_term, msg.last_log_index);
            if (reply.granted) {
                voted_for_ = msg.candidate;
                reset_election_deadline(now, rng);
            }
            out.push_back(reply);
            break;
        }
        case MsgKind::VoteGranted: {
            if (role_ != Role::Candidate || msg.term != current_term_ || !msg.granted) break;
            if (std::find(votes_.begin(), votes_.end(), msg.sender) == votes_.end()) {
                votes_.push_back(msg.sender);
            }
            if (2 * votes_.size() > peers_.size() + 1) {
                out = become_leader(now);
            }
            break;
        }
        case MsgKind::AppendEntries: {
            Message ack;
            ack.kind = MsgKind::AppendAck;
            ack.sender = id_;
            ack.receiver = msg.sender;
            ack.term = current_term_;
            ack.success = false;
            if (msg.term < current_term_) {  // stale leader
                out.push_back(ack);
                break;
            }
            if (role_ != Role::Follower) become_follower(msg.term, now, rng);
            known_leader_ = msg.sender;
            reset_election_deadline(now, rng);

            // Consistency check on (prev index, prev term).
            if (msg.prev_index > last_log_index() ||
                (msg.prev_index > 0 && log_[msg.prev_index - 1].term != msg.prev_term)) {
                out.push_back(ack);
                break;
            }

            std::uint64_t insert = msg.prev_index + 1;
            bool tampered = false;
            for (const LogEntry& e : msg.entries) {
                if (insert <= last_log_index()) {
                    if (log_[insert - 1].term == e.term) {  // already have it
                        ++insert;
                        continue;
                    }
                    log_.resize(insert - 1);  // conflict: truncate
                }
                const std::uint64_t want_prev =
                    log_.empty() ? genesis_hash() : log_.back().hash;
                if (e.index != insert || e.prev_hash != want_prev ||
                    e.hash != chain_hash(e.index, e.term, e.payload, e.prev_hash)) {
                    tampered = true;  // broken hash chain: reject the remainder
                    break;
                }
                log_.push_back(e);
                ++insert;
            }
            if (!tampered) {
                ack.success = true;
                ack.match_index = insert - 1;
                if (msg.leader_commit > commit_index_) {
                    commit_index_ = std::min(msg.leader_commit, last_log_index());
                }
            }
            out.push_back(ack);
            break;
        }
        case MsgKind::AppendAck: {
            if (role_ != Role::Leader || msg.term != current_term_) break;
            const auto it = std::find(peers_.begin(), peers_.end(), msg.sender);
            if (it == peers_.end()) break;
            const std::size_t pi = static_cast<std::size_t>(it - peers_.begin());
            if (msg.success) {
                match_index_[pi] = std::max(match_index_[pi], msg.match_index);
                next_index_[pi] = match_index_[pi] + 1;
                advance_commit();
                if (next_index_[pi] <= last_log_index()) {
                    out.push_back(append_entries_for(msg.sender));  // keep catching up
                }
            } else if (next_index_[pi] > 1) {
                --next_index_[pi];  // backtrack and retry
                out.push_back(append_entries_for(msg.sender));
            }
            break;
        }
        case MsgKind::ClientRequest: {
            if (role_ == Role::Leader) {
                out = client_request(msg.payload, now);
            } else {
                Message reply;
                reply.kind = MsgKind::ClientResponse;
                reply.sender = id_;
                reply.receiver = msg.sender;
                reply.term = current_term_;
                reply.success = false;
                out.push_back(reply);
            }
            break;
        }
        case MsgKind::ClientResponse:
            break;
    }
    return out;
}

std::vector<Message> Node::client_request(const std::string& payload, double now) {
    if (role_ != Role::Leader) throw NotLeaderError(known_leader_);
    LogEntry e;
    e.index = last_log_index() + 1;
    e.term = current_term_;
    e.payload = payload;
    e.prev_hash = log_.empty() ? genesis_hash() : log_.back().hash;
    e.hash = chain_hash(e.index, e.term, e.payload, e.prev_hash);
    log_.push_back(e);
    advance_commit();  // single-node majority case

    std::vector<Message> out;
    for (NodeId peer : peers_) out.push_back(append_entries_for(peer));
    heartbeat_due_ = now + cfg_.heartbeat_interval;
    return out;
}

void Node::advance_commit() {
    const std::uint64_t n =
        majority_commit_index(match_index_, peers_.size() + 1, current_term_, log_);
    commit_index_ = std::max(commit_index_, n);
}

void Node::step_down(double now, std::mt19937_64& rng) {
    if (role_ != Role::Leader) return;
    role_ = Role::Follower;
    known_leader_.reset();
    reset_election_deadline(now, rng);
}

void Node::set_alive(bool alive, double now, std::mt19937_64& rng) {
    if (alive_ == alive) return;
    alive_ = alive;
    if (alive) {
        role_ = Role::Follower;
        votes_.clear();
        known_leader_.reset();
        reset_election_deadline(now, rng);
    }
}

}  // namespace raftedge::raft
