#include "raftedge/raft/cluster.hpp"

#include <algorithm>
#include <string>

#include "raftedge/errors.hpp"

namespace raftedge::raft {

Cluster::Cluster(const ClusterConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {
    if (cfg.n_nodes < 3) throw ConfigError("Cluster: need at least 3 nodes");
    if (cfg.raft.election_timeout_base <= 0.0) {
        throw ConfigError("Cluster: election timeout base must be > 0");
    }
    nodes_.reserve(static_cast<std::size_t>(cfg.n_nodes));
    for (int i = 0; i < cfg.n_nodes; ++i) {
        std::vector<NodeId> peers;
        for (int j = 0; j < cfg.n_nodes; ++j) {
            if (j != i) peers.push_back(j);
        }
        nodes_.emplace_back(i, std::move(peers), cfg.raft, 0.0, rng_);
    }
}

double Cluster::next_event_time() const {
    double t = std::numeric_limits<double>::infinity();
    if (!queue_.empty()) t = std::min(t, queue_.top().time);
    for (const Node& n : nodes_) t = std::min(t, n.next_timer());
    if (cfg_.term_duration > 0.0 && leader_ >= 0) {
        t = std::min(t, leader_since_ + cfg_.term_duration);
    }
    return t;
}

void Cluster::write_trace(double now, NodeId id, const char* event, std::uint64_t term,
                          std::uint64_t index) {
    if (trace) *trace << now << ' ' << id << ' ' << event << ' ' << term << ' ' << index << '\n';
}

void Cluster::route(std::vector<Message>&& msgs, double now) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (Message& m : msgs) {
        if (cfg_.drop_prob > 0.0 && unif(rng_) < cfg_.drop_prob) continue;
        double delay = 0.0;
        if (cfg_.msg_delay_max > cfg_.msg_delay_min) {
            std::uniform_real_distribution<double> d(cfg_.msg_delay_min, cfg_.msg_delay_max);
            delay = d(rng_);
        } else {
            delay = cfg_.msg_delay_min;
        }
        queue_.push(Pending{now + delay, seq_++, std::move(m)});
    }
}

void Cluster::note_role_change(NodeId id, Role before, double now) {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    if (before != Role::Leader && n.role() == Role::Leader) {
        leader_ = id;
        leader_since_ = now;
        ++election_count_;
        leadership_history_.emplace_back(n.current_term(), id);
        write_trace(now, id, "leader", n.current_term(), n.log().empty() ? 0 : n.log().back().index);
        if (on_leader_elected) on_leader_elected(now, id, n.current_term());
    } else if (before == Role::Leader && n.role() != Role::Leader && leader_ == id) {
        leader_ = -1;
        last_leader_loss_ = now;
        write_trace(now, id, "stepdown", n.current_term(), 0);
    }
}

void Cluster::note_commits(NodeId id, std::uint64_t before, double now) {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    if (n.role() != Role::Leader) return;
    const std::uint64_t c = n.commit_index();
    if (c <= reported_commit_) return;
    for (std::uint64_t i = reported_commit_ + 1; i <= c; ++i) {
        write_trace(now, id, "commit", n.log()[i - 1].term, i);
        if (on_commit) on_commit(now, n.log()[i - 1]);
    }
    reported_commit_ = c;
    (void)before;
}

void Cluster::deliver(const Pending& p) {
    const NodeId to = p.msg.receiver;
    if (to < 0 || to >= size()) return;
    Node& n = nodes_[static_cast<std::size_t>(to)];
    if (!n.alive()) return;
    const Role before = n.role();
    const std::uint64_t commit_before = n.commit_index();
    route(n.handle_message(p.msg, p.time, rng_), p.time);
    note_role_change(to, before, p.time);
    note_commits(to, commit_before, p.time);
}

void Cluster::service_timers(double now) {
    for (Node& n : nodes_) {
        if (n.next_timer() <= now) {
            const Role before = n.role();
            const bool was_candidate_start = before != Role::Candidate;
            route(n.tick(now, rng_), now);
            if (before == Role::Follower && n.role() == Role::Candidate) {
                write_trace(now, n.id(), "candidate", n.current_term(), 0);
                (void)was_candidate_start;
            }
            note_role_change(n.id(), before, now);
        }
    }
}

void Cluster::run_until(double t) {
    while (true) {
        const double tn = next_event_time();
        if (!(tn <= t)) break;

        // Scheduled end-of-term rotation.
        if (cfg_.term_duration > 0.0 && leader_ >= 0 &&
            leader_since_ + cfg_.term_duration <= tn) {
            Node& n = nodes_[static_cast<std::size_t>(leader_)];
            const double when = leader_since_ + cfg_.term_duration;
            n.step_down(when, rng_);
            leader_ = -1;
            last_leader_loss_ = when;
            write_trace(when, n.id(), "term_end", n.current_term(), 0);
            continue;
        }

        while (!queue_.empty() && queue_.top().time <= tn) {
            Pending p = queue_.top();
            queue_.pop();
            deliver(p);
        }
        service_timers(tn);
    }
}

bool Cluster::has_leader() const {
    if (leader_ < 0) return false;
    const Node& n = nodes_[static_cast<std::size_t>(leader_)];
    return n.alive() && n.role() == Role::Leader;
}

NodeId Cluster::leader_id() const { return has_leader() ? leader_ : -1; }

std::uint64_t Cluster::submit(const std::string& payload, double now) {
    if (!has_leader()) throw NotLeaderError(std::nullopt);
    Node& n = nodes_[static_cast<std::size_t>(leader_)];
    route(n.client_request(payload, now), now);
    write_trace(now, n.id(), "append", n.current_term(), n.log().back().index);
    return n.log().back().index;
}

void Cluster::set_attacked(const std::vector<NodeId>& ids, bool attacked, double now) {
    std::set<NodeId> next = attacked_;
    for (NodeId id : ids) {
        if (id < 0 || id >= size()) throw ConfigError("set_attacked: unknown node id");
        if (attacked) next.insert(id);
        else next.erase(id);
    }
    if (attacked && 2 * static_cast<int>(next.size()) >= size()) {
        throw ConfigError("set_attacked: attacked set must stay below N/2 (got " +
                          std::to_string(next.size()) + " of " + std::to_string(size()) + ")");
    }
    for (NodeId id : ids) {
        Node& n = nodes_[static_cast<std::size_t>(id)];
        if (n.alive() == !attacked) continue;
        n.set_alive(!attacked, now, rng_);
        write_trace(now, id, attacked ? "attacked" : "recovered", n.current_term(), 0);
        if (attacked && id == leader_) {
            leader_ = -1;
            last_leader_loss_ = now;
        }
    }
    attacked_ = next;
}

}  // namespace raftedge::raft
