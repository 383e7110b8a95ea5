#include "raftedge/latency.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "raftedge/errors.hpp"

namespace raftedge {

void LatencyParams::validate() const {
    if (n_servers < 3) throw ConfigError("N must be >= 3");
    if (vehicles_per_station < 1) throw ConfigError("M must be >= 1");
    if (lambda <= 0.0) throw ConfigError("lambda must be > 0");
    if (t_encode < 0.0 || tau_collision < 0.0 || t_decode < 0.0 || t_forward < 0.0 ||
        t_broadcast < 0.0 || tau_election < 0.0) {
        throw ConfigError("delay constants must be >= 0");
    }
    if (p_drop < 0.0 || p_drop >= 1.0) throw ConfigError("p_d must be in [0, 1)");
    if (t_term <= 0.0) throw ConfigError("T_term must be > 0");
    if (attack_strength < 0 || 2 * attack_strength >= n_servers) {
        throw ConfigError("attack strength a must satisfy 0 <= a < N/2, got a=" +
                          std::to_string(attack_strength) + " with N=" + std::to_string(n_servers));
    }
    if (n_servers * t_term <= (n_servers + attack_strength) * tau_election) {
        throw ConfigError("finite-latency condition N*T_term > (N+a)*tau_ele violated");
    }
}

double collision_prob(double lambda, int vehicles_per_station, double tau_collision) {
    if (lambda <= 0.0) throw std::invalid_argument("collision_prob: lambda must be > 0");
    if (vehicles_per_station < 1) throw std::invalid_argument("collision_prob: M must be >= 1");
    if (tau_collision < 0.0) throw std::invalid_argument("collision_prob: tau_c must be >= 0");
    const double m = vehicles_per_station;
    return 1.0 - std::exp(-lambda * m * (m - 1.0) * tau_collision / 2.0);
}

double expected_extraction_delay(double lambda) {
    if (lambda <= 0.0) throw std::invalid_argument("expected_extraction_delay: lambda must be > 0");
    return 1.0 / lambda;
}

double expected_arrival_delay(double lambda, double t_encode, double p_collision, double p_drop) {
    if (lambda <= 0.0) throw std::invalid_argument("expected_arrival_delay: lambda must be > 0");
    if (p_collision < 0.0 || p_drop < 0.0 || p_collision > 1.0 || p_drop > 1.0) {
        throw std::invalid_argument("expected_arrival_delay: probabilities must be in [0, 1]");
    }
    if (p_collision >= 1.0 || p_drop >= 1.0) {
        throw std::invalid_argument("expected_arrival_delay: infinite delay at p_c or p_d = 1");
    }
    return (1.0 / lambda + t_encode) / ((1.0 - p_collision) * (1.0 - p_drop));
}

double election_factor(int n_servers, int attack_strength, double t_term, double tau_election) {
    if (attack_strength < 0 || 2 * attack_strength >= n_servers) {
        throw ConfigError("election_factor: need 0 <= a < N/2");
    }
    const double denom = n_servers * t_term - (n_servers + attack_strength) * tau_election;
    if (denom <= 0.0) {
        throw std::invalid_argument("election_factor: N*T_term must exceed (N+a)*tau_ele");
    }
    return n_servers * t_term / denom;
}

double election_time(int n_servers, double tau_base) {
    if (n_servers < 2) throw std::invalid_argument("election_time: N must be >= 2");
    if (tau_base <= 0.0) throw std::invalid_argument("election_time: tau_b must be > 0");
    return tau_base * std::log(static_cast<double>(n_servers));
}

LatencyBreakdown expected_total_latency(const LatencyParams& p) {
    p.validate();
    const double m = p.vehicles_per_station;
    // 1/(1 - p_c) written as e^{lambda B}: immune to 1 - p_c underflowing to 0
    const double retry = std::exp(p.lambda * m * (m - 1.0) * p.tau_collision / 2.0);
    const double factor = election_factor(p.n_servers, p.attack_strength, p.t_term, p.tau_election);

    LatencyBreakdown b;
    b.extraction = expected_extraction_delay(p.lambda);
    b.transmission = (b.extraction + p.t_encode) * retry;
    b.arrival = b.transmission / (1.0 - p.p_drop);
    b.service = p.t_si();
    b.total = factor * (b.arrival + b.service);
    b.election_overhead = b.total - (b.arrival + b.service);
    return b;
}

double election_overhead(const LatencyParams& p, double expected_total) {
    p.validate();
    return expected_total / p.t_term * p.tau_election *
           (1.0 + static_cast<double>(p.attack_strength) / p.n_servers);
}

}  // namespace raftedge
