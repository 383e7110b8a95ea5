#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "raftedge/optimizer.hpp"

using namespace raftedge;

TEST_SUITE_BEGIN("optimizer");

TEST_CASE("collision_coefficient") {
    CHECK(collision_coefficient(2, 0.1) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(collision_coefficient(3, 0.1) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK_THROWS_AS(collision_coefficient(1, 0.1), std::domain_error);
    CHECK_THROWS_AS(collision_coefficient(2, 0.0), std::domain_error);
}

TEST_CASE("optimal_rate closed form") {
    CHECK(optimal_rate(2, 0.1, 10.0) == doctest::Approx(0.9512492).epsilon(1e-6));
    CHECK(optimal_rate(3, 0.1, 10.0) == doctest::Approx(0.5295113).epsilon(1e-6));
    CHECK(optimal_rate(4, 0.1, 10.0) == doctest::Approx(0.3612987).epsilon(1e-6));
    CHECK(optimal_rate(2, 0.1, 0.0) == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("optimal_rate solves the stationarity quadratic exactly") {
    for (int m : {2, 3, 5, 8}) {
        for (double tec : {1.0, 10.0, 50.0}) {
            const double b = collision_coefficient(m, 0.1);
            const double l = optimal_rate(m, 0.1, tec);
            CHECK(std::abs(b * tec * l * l + b * l - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("latency_derivative sign pattern and stationarity") {
    LatencyParams p;
    for (int m : {2, 3, 4, 6}) {
        p.vehicles_per_station = m;
        const double star = optimal_rate(m, p.tau_collision, p.t_encode);
        CHECK(std::abs(latency_derivative(star, p)) <= 1e-9);
        CHECK(latency_derivative(0.5 * star, p) < 0.0);
        CHECK(latency_derivative(0.15 * star, p) < 0.0);
        CHECK(latency_derivative(2.0 * star, p) > 0.0);
        CHECK(latency_derivative(8.0 * star, p) > 0.0);
    }
}

TEST_CASE("latency_derivative matches centered finite differences") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        LatencyParams p;
        p.vehicles_per_station = 2 + int(u(rng) * 5.0);
        p.tau_collision = 0.05 + 0.3 * u(rng);
        p.t_encode = 1.0 + 30.0 * u(rng);
        p.p_drop = 0.3 * u(rng);
        const double lambda = 0.05 + 1.5 * u(rng);
        const double h = lambda * 1e-5;
        auto f = [&](double l) {
            LatencyParams q = p;
            q.lambda = l;
            return expected_total_latency(q).total;
        };
        const double fd = (f(lambda + h) - f(lambda - h)) / (2.0 * h);
        const double an = latency_derivative(lambda, p);
        const double scale = std::max(std::abs(fd), 1e-6);
        CHECK(std::abs(an - fd) / scale <= 1e-5);
    }
}

TEST_CASE("golden_section_minimize on a synthetic parabola") {
    const double x = golden_section_minimize([](double l) { return (l - 1.0) * (l - 1.0); }, 0.0,
                                             3.0, 1e-8);
    CHECK(x == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("numerical_argmin agrees with the closed form") {
    LatencyParams p;
    p.vehicles_per_station = 3;
    CHECK(std::abs(numerical_argmin(p, 1e-3, 5.0, 1e-6) - 0.5295113) <= 1e-4);
    p.vehicles_per_station = 4;
    CHECK(std::abs(numerical_argmin(p, 1e-3, 5.0, 1e-6) - 0.3612987) <= 1e-4);
}

TEST_CASE("closed form vs argmin oracle over the parameter grid") {
    for (int m = 2; m <= 8; ++m) {
        for (double tau : {0.05, 0.1, 0.3}) {
            for (double tec : {1.0, 10.0, 50.0}) {
                LatencyParams p;
                p.vehicles_per_station = m;
                p.tau_collision = tau;
                p.t_encode = tec;
                const double closed = optimal_rate(m, tau, tec);
                const double oracle = numerical_argmin(p, 1e-3, 12.0, 1e-6);
                CHECK(std::abs(closed - oracle) <= 1e-3);
            }
        }
    }
}

TEST_CASE("rate controller") {
    LatencyParams p;
    p.vehicles_per_station = 3;
    RateController ctl(p, 2.0);
    CHECK(ctl.current_rate() == doctest::Approx(p.lambda));

    AdaptEvent ev;
    ev.kind = AdaptEvent::Kind::RateDrift;
    ctl.adapt(ev, 5.0);
    CHECK(ctl.current_rate() == doctest::Approx(optimal_rate(3, p.tau_collision, p.t_encode)));

    ev.kind = AdaptEvent::Kind::VehiclesChanged;
    ev.new_value = 4;
    auto rec = ctl.adapt(ev, 10.0);
    CHECK(ctl.current_rate() == doctest::Approx(0.3612987).epsilon(1e-6));
    CHECK(rec.new_rate == doctest::Approx(ctl.current_rate()));
    CHECK(rec.time == doctest::Approx(10.0));

    // rate drift at the fixed point is a no-op
    ev.kind = AdaptEvent::Kind::RateDrift;
    rec = ctl.adapt(ev, 11.0);
    CHECK(rec.old_rate == doctest::Approx(rec.new_rate));

    // N change leaves the optimum untouched but is recorded
    const auto before = ctl.current_rate();
    const auto hist_size = ctl.history().size();
    ev.kind = AdaptEvent::Kind::ServersChanged;
    ev.new_value = 12;
    ctl.adapt(ev, 12.0);
    CHECK(ctl.current_rate() == doctest::Approx(before));
    CHECK(ctl.servers() == 12);
    CHECK(ctl.history().size() == hist_size + 1);

    // M = 1 has no interior optimum; the controller clamps to the cap
    ev.kind = AdaptEvent::Kind::VehiclesChanged;
    ev.new_value = 1;
    ctl.adapt(ev, 13.0);
    CHECK(ctl.current_rate() == doctest::Approx(2.0));
}

TEST_SUITE_END();
