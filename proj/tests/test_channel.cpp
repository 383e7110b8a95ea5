#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "raftedge/channel.hpp"
#include "raftedge/errors.hpp"

using namespace raftedge;

TEST_SUITE_BEGIN("channel");

TEST_CASE("doppler_shift") {
    CHECK(doppler_shift(5.9e9, 0.0) == doctest::Approx(0.0));
    CHECK(doppler_shift(3e8, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(doppler_shift(5.9e9, 30.0) == doctest::Approx(590.0).epsilon(1e-12));
    CHECK_THROWS_AS(doppler_shift(5.9e9, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(doppler_shift(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("mean_frame_error") {
    CHECK(mean_frame_error(1e12) == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
    CHECK(mean_frame_error(1.0) == doctest::Approx(0.6321206).epsilon(1e-6));
    CHECK(mean_frame_error(10.0) == doctest::Approx(0.0951626).epsilon(1e-6));
    CHECK_THROWS_AS(mean_frame_error(0.0), std::invalid_argument);
}

TEST_CASE("correlation_coefficient") {
    FadingParams p;
    p.speed_mps = 0.0;  // f_d = 0, J0(0) = 1 clamped below 1
    double rho = correlation_coefficient(p);
    CHECK(rho < 1.0);
    CHECK(rho > 1.0 - 1e-9);

    p.rho_override = 0.5;
    CHECK(correlation_coefficient(p) == doctest::Approx(0.5));

    // place 2*pi*f_d/theta at the first Bessel zero
    FadingParams z;
    z.frame_rate = 1.0;  // frame time 1 ms
    const double pi = 3.14159265358979323846;
    const double fd = 2.404825557695773 / (2.0 * pi) * 1000.0;  // Hz
    z.carrier_hz = 3e8;
    z.speed_mps = fd;  // f_d = fd with c cancelling
    CHECK(correlation_coefficient(z) == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
}

TEST_CASE("transition_probs rho = 0 reduction is exact") {
    FadingParams p;
    p.fading_margin = 10.0;
    p.rho_override = 0.0;
    const auto t = transition_probs(p);
    const double pe = mean_frame_error(10.0);
    CHECK(std::abs(t.stay_bad - pe) <= 1e-12);
    CHECK(std::abs(t.stay_good - (1.0 - pe)) <= 1e-12);
    CHECK(t.stay_bad == doctest::Approx(0.0951626).epsilon(1e-6));
    CHECK(t.stay_good == doctest::Approx(0.9048374).epsilon(1e-6));
}

TEST_CASE("transition_probs golden values at F = 6.31, rho = 0.5") {
    FadingParams p;
    p.fading_margin = 6.31;
    p.rho_override = 0.5;
    const auto t = transition_probs(p);
    CHECK(t.stay_bad == doctest::Approx(0.186141423339).epsilon(1e-8));
    CHECK(t.stay_good == doctest::Approx(0.860238625958).epsilon(1e-8));
}

TEST_CASE("transition_probs rho near 1 drives stay_bad toward 1") {
    FadingParams p;
    p.fading_margin = 6.31;
    p.rho_override = 1.0 - 1e-7;
    const auto t = transition_probs(p);
    CHECK(t.stay_bad > 0.99);
    CHECK(t.stay_good <= 1.0);
}

TEST_CASE("transition_probs stationarity consistency") {
    for (double rho : {0.0, 0.3, 0.5, 0.7, 0.9}) {
        for (double f : {2.0, 6.31, 10.0, 25.0}) {
            FadingParams p;
            p.fading_margin = f;
            p.rho_override = rho;
            auto chan = MarkovChannel::from_params(p);
            CHECK(std::abs(chan.stationary_bad() - mean_frame_error(f)) <= 1e-9);
        }
    }
}

TEST_CASE("drop_probability") {
    auto chan = MarkovChannel::from_probs(0.5, 0.9);
    CHECK(drop_probability(chan, 0.0, 0.0) == doctest::Approx(0.0));
    CHECK(drop_probability(chan, 1.0, 0.0) == doctest::Approx(0.1666667).epsilon(1e-6));
    CHECK(drop_probability(chan, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    // both states absorbing: no stationary distribution
    CHECK_THROWS_AS(MarkovChannel::from_probs(1.0, 1.0), std::invalid_argument);
}

TEST_CASE("step_channel absorbing states") {
    std::mt19937_64 rng(1);
    auto bad = MarkovChannel::from_probs(1.0, 0.0);
    bad.state = ChannelState::Bad;
    for (int i = 0; i < 100; ++i) CHECK(bad.step(rng) == ChannelState::Bad);

    auto good = MarkovChannel::from_probs(0.0, 1.0);
    good.state = ChannelState::Good;
    for (int i = 0; i < 100; ++i) CHECK(good.step(rng) == ChannelState::Good);
}

TEST_CASE("long-run bad fraction matches the stationary distribution") {
    std::mt19937_64 rng(99);
    auto chan = MarkovChannel::from_probs(0.0951626, 0.9048374);
    const int n = 1000000;
    long bad = 0;
    for (int i = 0; i < n; ++i) {
        if (chan.step(rng) == ChannelState::Bad) ++bad;
    }
    const double pi_bad = chan.stationary_bad();
    const double frac = double(bad) / n;
    // correlated chain: inflate the binomial sigma by the mixing factor
    const double rho_eff = chan.stay_bad + chan.stay_good - 1.0;
    const double sigma = std::sqrt(pi_bad * (1.0 - pi_bad) / n * (1.0 + rho_eff) / (1.0 - rho_eff));
    CHECK(std::abs(frac - pi_bad) <= 3.0 * sigma);
}

TEST_CASE("randomized parameter sweep keeps probabilities in range") {
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        FadingParams p;
        p.fading_margin = 1.0 + 30.0 * u(rng);
        p.rho_override = 0.999 * u(rng);
        p.fail_prob_bad = u(rng);
        p.fail_prob_good = u(rng);
        const auto t = transition_probs(p);
        CHECK(t.stay_bad >= 0.0);
        CHECK(t.stay_bad <= 1.0);
        CHECK(t.stay_good >= 0.0);
        CHECK(t.stay_good <= 1.0);
        auto chan = MarkovChannel::from_params(p);
        const double pd = drop_probability(chan, p.fail_prob_bad, p.fail_prob_good);
        CHECK(pd >= 0.0);
        CHECK(pd <= 1.0);
    }
}

TEST_CASE("parameter validation") {
    FadingParams p;
    p.fading_margin = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = FadingParams{};
    p.rho_override = 1.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = FadingParams{};
    p.frame_rate = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_SUITE_END();
