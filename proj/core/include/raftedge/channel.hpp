#pragma once

#include <optional>
#include <random>

namespace raftedge {

/// Physical parameters of the vehicle-to-station fading link.
/// Time unit is one millisecond: frame_rate is frames per ms.
struct FadingParams {
    double speed_mps = 30.0;         // vehicle speed v, m/s
    double carrier_hz = 5.9e9;       // carrier frequency f_c
    double fading_margin = 6.31;     // F, linear (> 0); 6.31 ~ 8 dB
    double frame_rate = 10.0;        // theta, link-layer frames per ms (> 0)
    std::optional<double> rho_override;  // fading correlation in [0, 1), for tests
    double fail_prob_bad = 1.0;      // v_L: frame failure probability in the bad state
    double fail_prob_good = 0.0;     // l_L: frame failure probability in the good state

    static constexpr double kSpeedOfLight = 3.0e8;  // m/s

    void validate() const;  // throws std::invalid_argument
};

enum class ChannelState { Good, Bad };

struct TransitionProbs {
    double stay_bad = 0.0;   // P(bad -> bad)
    double stay_good = 0.0;  // P(good -> good)
};

/// Two-state good/bad Markov chain induced by FadingParams (or given directly).
struct MarkovChannel {
    ChannelState state = ChannelState::Good;
    double stay_bad = 0.0;
    double stay_good = 1.0;
    double mean_frame_error = 0.0;  // stationary bad-state probability
    double eta = 0.0;               // sqrt(2 / (F (1 - rho^2)))

    static MarkovChannel from_params(const FadingParams& params);
    static MarkovChannel from_probs(double stay_bad, double stay_good);

    /// One transition; returns and stores the new state.
    ChannelState step(std::mt19937_64& rng);

    double stationary_bad() const;
};

double doppler_shift(double carrier_hz, double speed_mps);

/// Mean frame error probability 1 - exp(-1/F).
double mean_frame_error(double fading_margin);

/// Fading correlation rho = J0(2 pi f_d / theta), clamped into [0, 1); the override wins.
double correlation_coefficient(const FadingParams& params);

TransitionProbs transition_probs(const FadingParams& params);

/// Stationary drop probability v_L * pi_bad + l_L * pi_good of the chain.
double drop_probability(const MarkovChannel& chan, double fail_prob_bad, double fail_prob_good);

}  // namespace raftedge
