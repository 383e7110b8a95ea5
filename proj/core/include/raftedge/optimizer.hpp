#pragma once

#include <functional>
#include <vector>

#include "raftedge/latency.hpp"

namespace raftedge {

/// Quadratic coefficient B = M(M-1) tau_c / 2 of the rate optimum.
/// Throws std::domain_error when M <= 1 or tau_c <= 0 (no collision regime,
/// the closed-form optimum is undefined).
double collision_coefficient(int vehicles_per_station, double tau_collision);

/// Derivative of the expected total latency with respect to lambda.
double latency_derivative(double lambda, const LatencyParams& p);

/// Closed-form minimizer of the expected latency in lambda.
/// t_encode = 0 degenerates to the limit 1/B.
double optimal_rate(int vehicles_per_station, double tau_collision, double t_encode);

/// Golden-section search for the minimum of a unimodal function on [lo, hi].
double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                               double tolerance);

/// Independent argmin oracle: golden-section search on the closed-form latency curve.
double numerical_argmin(const LatencyParams& p, double lambda_lo, double lambda_hi,
                        double tolerance);

/// Trigger for the online adaptation controller.
struct AdaptEvent {
    enum class Kind { RateDrift, VehiclesChanged, ServersChanged };
    Kind kind = Kind::RateDrift;
    int new_value = 0;  // new M or new N for the *Changed kinds
};

struct AdaptationRecord {
    double time = 0.0;
    double old_rate = 0.0;
    double new_rate = 0.0;
    AdaptEvent::Kind trigger = AdaptEvent::Kind::RateDrift;
};

/// Online controller keeping the extraction rate at the closed-form optimum.
class RateController {
public:
    RateController(LatencyParams params, double rate_cap);

    /// Applies one event at the given time; returns the adaptation record.
    AdaptationRecord adapt(const AdaptEvent& event, double time);

    double current_rate() const { return current_rate_; }
    int vehicles() const { return params_.vehicles_per_station; }
    int servers() const { return params_.n_servers; }
    const std::vector<AdaptationRecord>& history() const { return history_; }

private:
    double target_rate() const;

    LatencyParams params_;
    double rate_cap_;  // fallback when M <= 1 leaves the latency monotone in lambda
    double current_rate_;
    std::vector<AdaptationRecord> history_;
};

}  // namespace raftedge
