#include "raftedge/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "raftedge/errors.hpp"
#include "raftedge/special_functions.hpp"

namespace raftedge {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kRhoCeil = 1.0 - 1e-12;
}  // namespace

void FadingParams::validate() const {
    if (speed_mps < 0.0) throw std::invalid_argument("FadingParams: speed must be >= 0");
    if (carrier_hz <= 0.0) throw std::invalid_argument("FadingParams: carrier frequency must be > 0");
    if (fading_margin <= 0.0) throw std::invalid_argument("FadingParams: fading margin must be > 0");
    if (frame_rate <= 0.0) throw std::invalid_argument("FadingParams: frame rate must be > 0");
    if (rho_override && (*rho_override < 0.0 || *rho_override >= 1.0)) {
        throw std::invalid_argument("FadingParams: rho override must be in [0, 1)");
    }
    if (fail_prob_bad < 0.0 || fail_prob_bad > 1.0 || fail_prob_good < 0.0 || fail_prob_good > 1.0) {
        throw std::invalid_argument("FadingParams: failure probabilities must be in [0, 1]");
    }
}

double doppler_shift(double carrier_hz, double speed_mps) {
    if (carrier_hz <= 0.0) throw std::invalid_argument("doppler_shift: carrier frequency must be > 0");
    if (speed_mps < 0.0) throw std::invalid_argument("doppler_shift: speed must be >= 0");
    return carrier_hz * speed_mps / FadingParams::kSpeedOfLight;
}

double mean_frame_error(double fading_margin) {
    if (fading_margin <= 0.0) throw std::invalid_argument("mean_frame_error: margin must be > 0");
    return 1.0 - std::exp(-1.0 / fading_margin);
}

double correlation_coefficient(const FadingParams& params) {
    params.validate();
    if (params.rho_override) return *params.rho_override;
    const double fd_hz = doppler_shift(params.carrier_hz, params.speed_mps);
    const double frame_time_s = 1e-3 / params.frame_rate;  // frame_rate is per ms
    const double rho = bessel_j0(2.0 * kPi * fd_hz * frame_time_s);
    return std::clamp(rho, 0.0, kRhoCeil);
}

TransitionProbs transition_probs(const FadingParams& params) {
    params.validate();
    const double rho = correlation_coefficient(params);
    const double f = params.fading_margin;
    const double pe = mean_frame_error(f);
    const double eta = std::sqrt(2.0 / (f * (1.0 - rho * rho)));

    const double stay_bad =
        1.0 - (marcum_q1(eta, rho * eta) - marcum_q1(rho * eta, eta)) / (std::exp(1.0 / f) - 1.0);
    // Good -> bad probability consistent with the stationary bad fraction being pe.
    const double leave_good = pe * (1.0 - stay_bad) / (1.0 - pe);
    const double stay_good = 1.0 - leave_good;

    const double slack = 1e-9;
    if (stay_bad < -slack || stay_bad > 1.0 + slack || stay_good < -slack || stay_good > 1.0 + slack) {
        throw InvariantError("transition_probs: computed probability outside [0, 1]");
    }
    TransitionProbs p;
    p.stay_bad = std::clamp(stay_bad, 0.0, 1.0);
    p.stay_good = std::clamp(stay_good, 0.0, 1.0);
    return p;
}

MarkovChannel MarkovChannel::from_params(const FadingParams& params) {
    const TransitionProbs p = transition_probs(params);
    MarkovChannel c;
    c.stay_bad = p.stay_bad;
    c.stay_good = p.stay_good;
    c.mean_frame_error = raftedge::mean_frame_error(params.fading_margin);
    const double rho = correlation_coefficient(params);
    c.eta = std::sqrt(2.0 / (params.fading_margin * (1.0 - rho * rho)));
    c.state = ChannelState::Good;
    return c;
}

MarkovChannel MarkovChannel::from_probs(double stay_bad, double stay_good) {
    if (stay_bad < 0.0 || stay_bad > 1.0 || stay_good < 0.0 || stay_good > 1.0) {
        throw std::invalid_argument("MarkovChannel: stay probabilities must be in [0, 1]");
    }
    MarkovChannel c;
    c.stay_bad = stay_bad;
    c.stay_good = stay_good;
    c.mean_frame_error = c.stationary_bad();
    c.state = ChannelState::Good;
    return c;
}

double MarkovChannel::stationary_bad() const {
    const double leave_good = 1.0 - stay_good;
    const double leave_bad = 1.0 - stay_bad;
    if (leave_good + leave_bad == 0.0) {
        throw std::invalid_argument("MarkovChannel: degenerate chain (both states absorbing)");
    }
    return leave_good / (leave_good + leave_bad);
}

ChannelState MarkovChannel::step(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double u = unif(rng);
    if (state == ChannelState::Bad) {
        state = u < stay_bad ? ChannelState::Bad : ChannelState::Good;
    } else {
        state = u < stay_good ? ChannelState::Good : ChannelState::Bad;
    }
    return state;
}

double drop_probability(const MarkovChannel& chan, double fail_prob_bad, double fail_prob_good) {
    if (fail_prob_bad < 0.0 || fail_prob_bad > 1.0 || fail_prob_good < 0.0 || fail_prob_good > 1.0) {
        throw std::invalid_argument("drop_probability: failure probabilities must be in [0, 1]");
    }
    const double pi_bad = chan.stationary_bad();
    return fail_prob_bad * pi_bad + fail_prob_good * (1.0 - pi_bad);
}

}  // namespace raftedge
