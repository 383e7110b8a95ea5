#include "raftedge/optimizer.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace raftedge {

double collision_coefficient(int vehicles_per_station, double tau_collision) {
    if (vehicles_per_station <= 1) {
        throw std::domain_error("collision_coefficient: M <= 1 has no collision term");
    }
    if (tau_collision <= 0.0) {
        throw std::domain_error("collision_coefficient: tau_c must be > 0");
    }
    const double m = vehicles_per_station;
    return m * (m - 1.0) * tau_collision / 2.0;
}

double latency_derivative(double lambda, const LatencyParams& p) {
    if (lambda <= 0.0) throw std::invalid_argument("latency_derivative: lambda must be > 0");
    const double m = p.vehicles_per_station;
    const double b = m * (m - 1.0) * p.tau_collision / 2.0;
    const double factor = election_factor(p.n_servers, p.attack_strength, p.t_term, p.tau_election);
    return factor * std::exp(b * lambda) / ((1.0 - p.p_drop) * lambda * lambda) *
           (b * p.t_encode * lambda * lambda + b * lambda - 1.0);
}

double optimal_rate(int vehicles_per_station, double tau_collision, double t_encode) {
    const double b = collision_coefficient(vehicles_per_station, tau_collision);
    if (t_encode < 0.0) throw std::invalid_argument("optimal_rate: t_encode must be >= 0");
    if (t_encode == 0.0) return 1.0 / b;  // limit of the quadratic root
    return (-b + std::sqrt(b * b + 4.0 * b * t_encode)) / (2.0 * b * t_encode);
}

double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                               double tolerance) {
    if (!(lo < hi)) throw std::invalid_argument("golden_section_minimize: need lo < hi");
    if (tolerance <= 0.0) throw std::invalid_argument("golden_section_minimize: tolerance must be > 0");
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tolerance) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

double numerical_argmin(const LatencyParams& p, double lambda_lo, double lambda_hi,
                        double tolerance) {
    auto objective = [&p](double lambda) {
        LatencyParams q = p;
        q.lambda = lambda;
        return expected_total_latency(q).total;
    };
    return golden_section_minimize(objective, lambda_lo, lambda_hi, tolerance);
}

RateController::RateController(LatencyParams params, double rate_cap)
    : params_(std::move(params)), rate_cap_(rate_cap), current_rate_(params_.lambda) {
    if (rate_cap_ <= 0.0) throw std::invalid_argument("RateController: rate cap must be > 0");
}

double RateController::target_rate() const {
    if (params_.vehicles_per_station <= 1 || params_.tau_collision <= 0.0) {
        return rate_cap_;  // latency is monotone decreasing in lambda: run at the cap
    }
    return optimal_rate(params_.vehicles_per_station, params_.tau_collision, params_.t_encode);
}

AdaptationRecord RateController::adapt(const AdaptEvent& event, double time) {
    switch (event.kind) {
        case AdaptEvent::Kind::RateDrift:
            break;
        case AdaptEvent::Kind::VehiclesChanged:
            if (event.new_value < 1) throw std::invalid_argument("adapt: M must be >= 1");
            params_.vehicles_per_station = event.new_value;
            break;
        case AdaptEvent::Kind::ServersChanged:
            if (event.new_value < 3) throw std::invalid_argument("adapt: N must be >= 3");
            params_.n_servers = event.new_value;
            break;
    }
    AdaptationRecord rec;
    rec.time = time;
    rec.old_rate = current_rate_;
    rec.new_rate = target_rate();
    rec.trigger = event.kind;
    current_rate_ = rec.new_rate;
    params_.lambda = current_rate_;
    history_.push_back(rec);
    return rec;
}

}  // namespace raftedge
