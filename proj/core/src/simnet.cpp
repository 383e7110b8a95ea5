#include "raftedge/simnet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <queue>
#include <string>

#include "raftedge/arrivals.hpp"
#include "raftedge/errors.hpp"
#include "raftedge/raft/cluster.hpp"

namespace raftedge {

namespace {

struct Event {
    enum class Kind { RoundStart, ForwardDone, FlushWaiting, TaskComplete, AttackWindow, LivenessProbe };
    double time;
    std::uint64_t seq;
    Kind kind;
    int station = -1;
    int vehicle = -1;
    bool operator>(const Event& o) const {
        return time != o.time ? time > o.time : seq > o.seq;
    }
};

struct Task {
    TaskRecord rec;
    std::string payload;
    bool submitted = false;
    bool committed = false;
    bool done = false;
};

struct Station {
    std::vector<Task> tasks;
    int remaining = 0;
    MarkovChannel chan;
    double chan_time = 0.0;
};

class Sim {
public:
    explicit Sim(const SimConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {
        cfg_.params.validate();
        if (cfg_.task_budget <= 0) throw ConfigError("task_budget must be > 0");
        if (cfg_.warmup_fraction < 0.0 || cfg_.warmup_fraction >= 1.0) {
            throw ConfigError("warmup_fraction must be in [0, 1)");
        }
        if (cfg_.channel_mode == SimConfig::ChannelMode::Derived) cfg_.fading.validate();

        const LatencyParams& p = cfg_.params;
        raft::ClusterConfig cc;
        cc.n_nodes = p.n_servers;
        cc.raft.election_timeout_base = std::max(p.tau_election, 1e-3);
        cc.raft.heartbeat_interval = cc.raft.election_timeout_base / 3.0;
        cc.term_duration = p.t_term;
        cc.seed = cfg_.seed + 1;
        cluster_ = std::make_unique<raft::Cluster>(cc);
        cluster_->trace = cfg_.raft_trace;
        cluster_->on_leader_elected = [this](double t, raft::NodeId, std::uint64_t) {
            push(Event::Kind::FlushWaiting, t);
        };
        cluster_->on_commit = [this](double t, const raft::LogEntry& e) { on_commit(t, e); };

        tau_live_ = std::max(p.tau_election, 1.0);
        warmup_cut_ = static_cast<int>(cfg_.warmup_fraction * cfg_.task_budget);

        stations_.resize(static_cast<std::size_t>(p.n_servers));
        for (std::size_t s = 0; s < stations_.size(); ++s) {
            Station& st = stations_[s];
            st.tasks.resize(static_cast<std::size_t>(p.vehicles_per_station));
            if (cfg_.channel_mode == SimConfig::ChannelMode::Derived) {
                st.chan = MarkovChannel::from_params(cfg_.fading);
            }
            push(Event::Kind::RoundStart, 0.0, static_cast<int>(s));
        }

        if (cfg_.attack_mode == SimConfig::AttackMode::RandomPerTerm &&
            p.attack_strength > 0 && p.t_term > 0.0) {
            push(Event::Kind::AttackWindow, p.t_term);
        } else if (cfg_.attack_mode == SimConfig::AttackMode::Schedule) {
            schedule_ = cfg_.schedule;
            std::stable_sort(schedule_.begin(), schedule_.end(),
                             [](const AttackEvent& a, const AttackEvent& b) { return a.time < b.time; });
            if (!schedule_.empty()) push(Event::Kind::AttackWindow, schedule_.front().time);
        }
    }

    SimResult run() {
        while (result_.stats.completed_all < cfg_.task_budget) {
            const double t_sim = queue_.empty() ? std::numeric_limits<double>::infinity()
                                                : queue_.top().time;
            const double t_cl = cluster_->next_event_time();
            if (t_cl < t_sim) {
                cluster_->run_until(t_cl);
                now_ = std::max(now_, t_cl);
                continue;
            }
            if (queue_.empty()) throw InvariantError("simulation ran out of events");
            const Event ev = queue_.top();
            queue_.pop();
            now_ = ev.time;
            check_liveness();
            dispatch(ev);
        }
        finish();
        return std::move(result_);
    }

private:
    void push(Event::Kind kind, double time, int station = -1, int vehicle = -1) {
        queue_.push(Event{time, seq_++, kind, station, vehicle});
    }

    void check_liveness() {
        if (cluster_->has_leader()) return;
        const double since = std::max(cluster_->last_leader_loss(), 0.0);
        if (now_ - since > 100.0 * tau_live_) {
            throw LivenessError("cluster leaderless for over 100 election times at t=" +
                                std::to_string(now_));
        }
    }

    void dispatch(const Event& ev) {
        switch (ev.kind) {
            case Event::Kind::RoundStart: round_start(ev.station); break;
            case Event::Kind::ForwardDone: forward_done(ev.station, ev.vehicle); break;
            case Event::Kind::FlushWaiting: flush_waiting(); break;
            case Event::Kind::TaskComplete: task_complete(ev.station, ev.vehicle); break;
            case Event::Kind::AttackWindow: attack_window(); break;
            case Event::Kind::LivenessProbe: break;  // check_liveness already ran
        }
    }

    double draw_extraction() {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        return interarrival_from_uniform(cfg_.params.lambda, 1.0 - unif(rng_));
    }

    // One contention round: the station's M vehicles extract and send together.
    // The tau_c window is evaluated pairwise on send times; any collision
    // invalidates the whole group send and every vehicle restarts from
    // extraction at its own send time, so each vehicle retries with the
    // analytic per-attempt probability p_c.
    void round_start(int s) {
        const LatencyParams& p = cfg_.params;
        Station& st = stations_[static_cast<std::size_t>(s)];
        const int m = p.vehicles_per_station;
        st.remaining = m;

        std::vector<double> send(static_cast<std::size_t>(m));
        for (int v = 0; v < m; ++v) {
            Task& task = st.tasks[static_cast<std::size_t>(v)];
            task = Task{};
            task.rec.task_id = next_task_id_++;
            task.rec.station = s;
            task.rec.vehicle = v;
            task.rec.extraction_start = now_;
            task.payload = std::to_string(task.rec.task_id);
            ++result_.stats.tasks_started;

            const double x = draw_extraction();
            task.rec.extract_total += x;
            task.rec.encode_total += p.t_encode;
            send[static_cast<std::size_t>(v)] = now_ + x + p.t_encode;
        }

        // Only the synchronized first attempt is a clean Bernoulli(p_c) trial;
        // retry attempts start from slightly spread origins and are excluded
        // from the rate estimate.
        ++result_.stats.contention_rounds;
        if (has_collision(send, p.tau_collision)) ++result_.stats.collisions;

        for (int iter = 0; has_collision(send, p.tau_collision); ++iter) {
            if (iter > 100000) throw InvariantError("contention did not resolve");
            for (int v = 0; v < m; ++v) {
                Task& task = st.tasks[static_cast<std::size_t>(v)];
                ++task.rec.collision_retries;
                const double x = draw_extraction();
                task.rec.extract_total += x;
                task.rec.encode_total += p.t_encode;
                send[static_cast<std::size_t>(v)] += x + p.t_encode;
            }
        }
        for (int v = 0; v < m; ++v) {
            finish_send(st, s, v, send[static_cast<std::size_t>(v)]);
        }
    }

    static bool has_collision(std::vector<double> send, double tau) {
        if (send.size() < 2 || tau <= 0.0) return false;
        std::sort(send.begin(), send.end());
        for (std::size_t i = 1; i < send.size(); ++i) {
            if (send[i] - send[i - 1] < tau) return true;
        }
        return false;
    }

    // Past contention: traverse the channel (drops retry the transmission
    // only), then head for the leader.
    void finish_send(Station& st, int s, int v, double send_time) {
        const LatencyParams& p = cfg_.params;
        Task& task = st.tasks[static_cast<std::size_t>(v)];
        double t = send_time;
        while (dropped(st, t)) {
            ++result_.stats.drops;
            ++task.rec.drop_retries;
            task.rec.encode_total += p.t_encode;
            t += p.t_encode;
        }
        task.rec.send_time = t;
        task.rec.forward_done = t + p.t_forward;
        push(Event::Kind::ForwardDone, task.rec.forward_done, s, v);
    }

    bool dropped(Station& st, double t) {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        if (cfg_.channel_mode == SimConfig::ChannelMode::Direct) {
            return unif(rng_) < cfg_.params.p_drop;
        }
        const auto steps = static_cast<long long>((t - st.chan_time) * cfg_.fading.frame_rate);
        for (long long i = 0; i < steps; ++i) st.chan.step(rng_);
        st.chan_time = std::max(st.chan_time, t);
        const double p_fail = st.chan.state == ChannelState::Bad ? cfg_.fading.fail_prob_bad
                                                                 : cfg_.fading.fail_prob_good;
        return unif(rng_) < p_fail;
    }

    void forward_done(int s, int v) {
        Task& task = stations_[static_cast<std::size_t>(s)].tasks[static_cast<std::size_t>(v)];
        if (cluster_->has_leader()) {
            submit(task);
        } else {
            waiting_.emplace_back(s, v);
            push(Event::Kind::LivenessProbe, now_ + 100.0 * tau_live_);
        }
    }

    void submit(Task& task) {
        if (!task.submitted) {
            task.rec.leader_receipt = now_;
            task.rec.leader_wait = now_ - task.rec.forward_done;
            task.submitted = true;
        }
        cluster_->submit(task.payload, now_);
        pending_[task.payload] = {task.rec.station, task.rec.vehicle};
    }

    void flush_waiting() {
        if (!cluster_->has_leader()) return;
        // A fresh leader may have lost uncommitted entries: resubmit them.
        for (auto& [payload, sv] : pending_) {
            Task& task = stations_[static_cast<std::size_t>(sv.first)]
                             .tasks[static_cast<std::size_t>(sv.second)];
            if (!task.committed) cluster_->submit(payload, now_);
        }
        std::vector<std::pair<int, int>> waiting;
        waiting.swap(waiting_);
        for (const auto& [s, v] : waiting) {
            submit(stations_[static_cast<std::size_t>(s)].tasks[static_cast<std::size_t>(v)]);
        }
    }

    void on_commit(double t, const raft::LogEntry& e) {
        const auto it = pending_.find(e.payload);
        if (it == pending_.end()) return;
        Task& task = stations_[static_cast<std::size_t>(it->second.first)]
                         .tasks[static_cast<std::size_t>(it->second.second)];
        pending_.erase(it);
        task.committed = true;
        task.rec.commit_time = t;
        task.rec.commit_wait = t - task.rec.leader_receipt;
        task.rec.broadcast_done = t + cfg_.params.t_broadcast;
        task.rec.response_time = task.rec.broadcast_done + cfg_.params.t_decode;
        push(Event::Kind::TaskComplete, task.rec.response_time, task.rec.station,
             task.rec.vehicle);
    }

    void task_complete(int s, int v) {
        Station& st = stations_[static_cast<std::size_t>(s)];
        Task& task = st.tasks[static_cast<std::size_t>(v)];
        task.done = true;
        record(task.rec);
        if (--st.remaining == 0 && result_.stats.completed_all < cfg_.task_budget) {
            push(Event::Kind::RoundStart, now_, s);
        }
    }

    void record(const TaskRecord& rec) {
        SimStats& st = result_.stats;
        ++st.completed_all;
        if (cfg_.collect_records) result_.records.push_back(rec);
        if (st.completed_all <= warmup_cut_) return;

        ++st.completed;
        const double x = rec.total();
        const double d = x - mean_;
        mean_ += d / st.completed;
        m2_ += d * (x - mean_);

        st.mean_extract += rec.extract_total;
        st.mean_encode += rec.encode_total;
        st.mean_forward += rec.forward_done - rec.send_time;
        st.mean_leader_wait += rec.leader_wait;
        st.mean_commit_wait += rec.commit_wait;
        st.mean_broadcast += rec.broadcast_done - rec.commit_time;
        st.mean_decode += rec.response_time - rec.broadcast_done;
    }

    void attack_window() {
        if (cfg_.attack_mode == SimConfig::AttackMode::RandomPerTerm) {
            const LatencyParams& p = cfg_.params;
            if (!attacked_now_.empty()) {
                cluster_->set_attacked(attacked_now_, false, now_);
                attacked_now_.clear();
            }
            std::vector<raft::NodeId> ids(static_cast<std::size_t>(p.n_servers));
            for (int i = 0; i < p.n_servers; ++i) ids[static_cast<std::size_t>(i)] = i;
            std::shuffle(ids.begin(), ids.end(), rng_);
            ids.resize(static_cast<std::size_t>(p.attack_strength));
            const raft::NodeId leader = cluster_->leader_id();
            if (leader >= 0 && std::find(ids.begin(), ids.end(), leader) != ids.end()) {
                ++result_.stats.leader_failures;
            }
            cluster_->set_attacked(ids, true, now_);
            attacked_now_ = std::move(ids);
            push(Event::Kind::AttackWindow, now_ + p.t_term);
        } else {
            while (next_sched_ < schedule_.size() && schedule_[next_sched_].time <= now_) {
                const AttackEvent& ev = schedule_[next_sched_++];
                const raft::NodeId leader = cluster_->leader_id();
                if (ev.attacked && leader >= 0 &&
                    std::find(ev.nodes.begin(), ev.nodes.end(), leader) != ev.nodes.end()) {
                    ++result_.stats.leader_failures;
                }
                cluster_->set_attacked(ev.nodes, ev.attacked, now_);
            }
            if (next_sched_ < schedule_.size()) {
                push(Event::Kind::AttackWindow, schedule_[next_sched_].time);
            }
        }
    }

    void finish() {
        SimStats& st = result_.stats;
        st.sim_time_end = now_;
        st.election_count = cluster_->election_count();
        for (const Station& s : stations_) {
            for (const Task& t : s.tasks) {
                if (!t.done) ++st.in_flight_end;
            }
        }
        if (st.completed > 0) {
            st.mean_latency = mean_;
            st.var_latency = st.completed > 1 ? m2_ / (st.completed - 1) : 0.0;
            st.ci95_half = 1.96 * std::sqrt(st.var_latency / st.completed);
            const double n = st.completed;
            st.mean_extract /= n;
            st.mean_encode /= n;
            st.mean_decode /= n;
            st.mean_forward /= n;
            st.mean_leader_wait /= n;
            st.mean_commit_wait /= n;
            st.mean_broadcast /= n;
        }
    }

    SimConfig cfg_;
    std::mt19937_64 rng_;
    std::unique_ptr<raft::Cluster> cluster_;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> queue_;
    std::uint64_t seq_ = 0;
    double now_ = 0.0;
    double tau_live_ = 1.0;
    int warmup_cut_ = 0;
    std::uint64_t next_task_id_ = 1;

    std::vector<Station> stations_;
    std::vector<std::pair<int, int>> waiting_;          // (station, vehicle) with no leader
    std::map<std::string, std::pair<int, int>> pending_;  // payload -> uncommitted task
    std::vector<raft::NodeId> attacked_now_;
    std::vector<AttackEvent> schedule_;
    std::size_t next_sched_ = 0;

    SimResult result_;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

}  // namespace

SimResult run_simulation(const SimConfig& cfg) { return Sim(cfg).run(); }

double empirical_collision_rate(const SimStats& stats) {
    if (stats.contention_rounds == 0) return 0.0;
    return static_cast<double>(stats.collisions) / static_cast<double>(stats.contention_rounds);
}

double empirical_election_overhead(const SimStats& stats) {
    return stats.mean_leader_wait + stats.mean_commit_wait;
}

}  // namespace raftedge
