#include "raftedge/arrivals.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "raftedge/errors.hpp"
#include "raftedge/quadrature.hpp"

namespace raftedge {

RateSpec RateSpec::constant(double rate) {
    if (rate <= 0.0) throw std::invalid_argument("RateSpec: constant rate must be > 0");
    RateSpec s;
    s.kind = Kind::Constant;
    s.constant_rate = rate;
    return s;
}

RateSpec RateSpec::time_varying(std::function<double(double)> fn, double bound) {
    if (!fn) throw std::invalid_argument("RateSpec: rate function required");
    if (bound < 0.0 || !std::isfinite(bound)) {
        throw std::invalid_argument("RateSpec: rate bound must be finite and >= 0");
    }
    RateSpec s;
    s.kind = Kind::TimeVarying;
    s.rate_fn = std::move(fn);
    s.rate_bound = bound;
    return s;
}

double interarrival_from_uniform(double rate, double u) {
    if (rate <= 0.0) throw std::invalid_argument("interarrival: rate must be > 0");
    if (u <= 0.0 || u > 1.0) throw std::invalid_argument("interarrival: u must be in (0, 1]");
    return -std::log(u) / rate;
}

double sample_interarrival(double rate, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    // 1 - U keeps the draw inside (0, 1].
    return interarrival_from_uniform(rate, 1.0 - dist(rng));
}

double expected_count(const RateSpec& spec, double t) {
    if (t < 0.0) throw std::invalid_argument("expected_count: t must be >= 0");
    if (spec.kind == RateSpec::Kind::Constant) return spec.constant_rate * t;
    if (t == 0.0) return 0.0;
    return integrate(spec.rate_fn, 0.0, t, 1e-9);
}

ArrivalStream sample_homogeneous(double rate, double t_end, std::mt19937_64& rng) {
    ArrivalStream stream;
    stream.horizon = t_end;
    double t = 0.0;
    while (true) {
        t += sample_interarrival(rate, rng);
        if (t >= t_end) break;
        stream.times.push_back(t);
    }
    return stream;
}

ArrivalStream sample_nhpp(const RateSpec& spec, double t_end, std::mt19937_64& rng) {
    if (spec.kind != RateSpec::Kind::TimeVarying) {
        throw std::invalid_argument("sample_nhpp: requires a time-varying RateSpec");
    }
    ArrivalStream stream;
    stream.horizon = t_end;
    if (spec.rate_bound == 0.0) return stream;  // zero rate: empty stream

    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double t = 0.0;
    while (true) {
        t += sample_interarrival(spec.rate_bound, rng);
        if (t >= t_end) break;
        const double r = spec.rate_fn(t);
        if (r > spec.rate_bound * (1.0 + 1e-12)) {
            throw InvariantError("sample_nhpp: rate function exceeds its declared bound");
        }
        if (unif(rng) * spec.rate_bound < r) stream.times.push_back(t);
    }
    return stream;
}

double arrival_point_cdf(const RateSpec& spec, double a, double t) {
    if (a < 0.0 || a > t) throw std::invalid_argument("arrival_point_cdf: need 0 <= a <= t");
    const double denom = expected_count(spec, t);
    if (denom <= 0.0) throw std::invalid_argument("arrival_point_cdf: zero cumulative rate");
    return expected_count(spec, a) / denom;
}

}  // namespace raftedge
