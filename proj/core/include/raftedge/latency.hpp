#pragma once

namespace raftedge {

/// Every constant of the closed-form expected-latency expression.
/// Time unit is one millisecond throughout.
struct LatencyParams {
    int n_servers = 10;              // N
    int vehicles_per_station = 3;    // M
    double lambda = 0.2;             // data-extraction rate, events per ms
    double t_encode = 10.0;          // T_ec
    double tau_collision = 0.1;      // tau_c, collision window
    double p_drop = 0.02;            // p_d
    double t_decode = 10.0;          // T_dc
    double t_forward = 2.0;          // T_f
    double t_broadcast = 2.0;        // T_p
    double t_term = 2000.0;          // leader term duration
    double tau_election = 150.0;     // tau_ele
    int attack_strength = 2;         // a, attacked node count

    double t_si() const { return t_decode + t_forward + t_broadcast; }

    /// Throws std::invalid_argument / ConfigError on an inconsistent parameter set.
    void validate() const;
};

struct LatencyBreakdown {
    double extraction = 0.0;        // E[T_ex] = 1/lambda
    double transmission = 0.0;      // T_m with collision retries
    double arrival = 0.0;           // T_ar with collision and drop retries
    double service = 0.0;           // T_si = T_dc + T_f + T_p
    double election_overhead = 0.0; // amortized election share
    double total = 0.0;
};

double collision_prob(double lambda, int vehicles_per_station, double tau_collision);

double expected_extraction_delay(double lambda);

/// (1/lambda + t_encode) / ((1 - p_c)(1 - p_d)); throws on p_c or p_d = 1.
double expected_arrival_delay(double lambda, double t_encode, double p_collision, double p_drop);

/// Fixed-point multiplier N T_term / (N T_term - (N + a) tau_ele).
double election_factor(int n_servers, int attack_strength, double t_term, double tau_election);

/// Election time tau_b * ln(N).
double election_time(int n_servers, double tau_base);

LatencyBreakdown expected_total_latency(const LatencyParams& p);

/// Amortized election share (total / t_term) * tau_ele * (1 + a/N) of a task of
/// expected length `expected_total`.
double election_overhead(const LatencyParams& p, double expected_total);

}  // namespace raftedge
