#pragma once

#include <functional>
#include <random>
#include <vector>

namespace raftedge {

/// Arrival-rate description for the vehicle data-extraction process.
/// Either a constant rate or a bounded time-varying rate function.
struct RateSpec {
    enum class Kind { Constant, TimeVarying };

    Kind kind = Kind::Constant;
    double constant_rate = 0.0;                    // events per ms, > 0
    std::function<double(double)> rate_fn;         // non-negative, time-varying case
    double rate_bound = 0.0;                       // upper bound on rate_fn over the horizon

    static RateSpec constant(double rate);
    static RateSpec time_varying(std::function<double(double)> fn, double bound);
};

/// Event times of one sampled stream, ascending, all inside [0, horizon).
struct ArrivalStream {
    std::vector<double> times;
    double horizon = 0.0;
};

/// Inverse-CDF transform of a uniform draw u in (0, 1] to an Exp(rate) inter-arrival.
double interarrival_from_uniform(double rate, double u);

/// One Exp(rate) inter-arrival draw.
double sample_interarrival(double rate, std::mt19937_64& rng);

/// Expected event count over [0, t): rate * t, or the integral of the rate function.
double expected_count(const RateSpec& spec, double t);

/// Homogeneous Poisson stream over [0, t_end).
ArrivalStream sample_homogeneous(double rate, double t_end, std::mt19937_64& rng);

/// Non-homogeneous Poisson stream over [0, t_end) via thinning against rate_bound.
ArrivalStream sample_nhpp(const RateSpec& spec, double t_end, std::mt19937_64& rng);

/// P(A_i <= a) for an arrival point conditioned to fall in [0, t): cumulative-rate ratio.
double arrival_point_cdf(const RateSpec& spec, double a, double t);

}  // namespace raftedge
