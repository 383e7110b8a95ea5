#include <cmath>
#include <numeric>
#include <stdexcept>

#include "doctest.h"
#include "raftedge/arrivals.hpp"
#include "raftedge/errors.hpp"

using namespace raftedge;

TEST_SUITE_BEGIN("arrivals");

TEST_CASE("inverse-CDF transform identities") {
    CHECK(interarrival_from_uniform(1.0, std::exp(-1.0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(interarrival_from_uniform(2.0, 1.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(interarrival_from_uniform(0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(interarrival_from_uniform(-1.0, 0.5), std::invalid_argument);
}

TEST_CASE("inter-arrival sample mean matches 1/rate") {
    std::mt19937_64 rng(7);
    const double rate = 0.2;
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += sample_interarrival(rate, rng);
    const double mean = sum / n;
    CHECK(std::abs(mean - 5.0) <= 3.0 * 5.0 / std::sqrt(double(n)));
}

TEST_CASE("expected_count for constant and time-varying rates") {
    CHECK(expected_count(RateSpec::constant(0.2), 10.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(expected_count(RateSpec::constant(0.2), 0.0) == doctest::Approx(0.0));
    auto linear = RateSpec::time_varying([](double x) { return x; }, 2.0);
    CHECK(expected_count(linear, 2.0) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK_THROWS_AS(expected_count(RateSpec::constant(0.2), -1.0), std::invalid_argument);
}

TEST_CASE("homogeneous stream count statistics") {
    std::mt19937_64 rng(11);
    const double rate = 0.5, t_end = 100.0;
    const int runs = 2000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < runs; ++i) {
        auto s = sample_homogeneous(rate, t_end, rng);
        for (std::size_t j = 1; j < s.times.size(); ++j) CHECK(s.times[j] >= s.times[j - 1]);
        if (!s.times.empty()) {
            CHECK(s.times.front() >= 0.0);
            CHECK(s.times.back() < t_end);
        }
        const double c = double(s.times.size());
        sum += c;
        sumsq += c * c;
    }
    const double mean = sum / runs;
    const double expected = rate * t_end;
    CHECK(std::abs(mean - expected) <= 3.0 * std::sqrt(expected / runs));
    const double var = sumsq / runs - mean * mean;
    CHECK(std::abs(var - expected) <= 4.0 * expected * std::sqrt(2.0 / runs));
}

TEST_CASE("nhpp thinning: ramp rate mean count") {
    std::mt19937_64 rng(3);
    auto spec = RateSpec::time_varying([](double t) { return 0.5 * t; }, 2.0);
    const int runs = 10000;
    double sum = 0.0;
    for (int i = 0; i < runs; ++i) sum += double(sample_nhpp(spec, 4.0, rng).times.size());
    CHECK(std::abs(sum / runs - 4.0) <= 3.0 * 2.0 / std::sqrt(double(runs)));
}

TEST_CASE("nhpp degenerate cases") {
    std::mt19937_64 rng(5);
    auto zero = RateSpec::time_varying([](double) { return 0.0; }, 1.0);
    CHECK(sample_nhpp(zero, 50.0, rng).times.empty());

    auto unbounded = RateSpec::time_varying([](double) { return 2.0; }, 1.0);
    CHECK_THROWS_AS(sample_nhpp(unbounded, 50.0, rng), InvariantError);
}

TEST_CASE("nhpp with constant rate matches homogeneous statistics") {
    std::mt19937_64 rng_a(17), rng_b(23);
    const double rate = 0.4, t_end = 50.0;
    const int runs = 4000;
    auto spec = RateSpec::time_varying([rate](double) { return rate; }, rate);
    double sum_h = 0.0, sum_n = 0.0;
    for (int i = 0; i < runs; ++i) {
        sum_h += double(sample_homogeneous(rate, t_end, rng_a).times.size());
        sum_n += double(sample_nhpp(spec, t_end, rng_b).times.size());
    }
    const double se = std::sqrt(2.0 * rate * t_end / runs);
    CHECK(std::abs(sum_h / runs - sum_n / runs) <= 3.0 * se);
}

TEST_CASE("counts in disjoint intervals are uncorrelated") {
    std::mt19937_64 rng(29);
    const int pairs = 10000;
    std::vector<double> x, y;
    x.reserve(pairs);
    y.reserve(pairs);
    for (int i = 0; i < pairs; ++i) {
        auto s = sample_homogeneous(0.5, 40.0, rng);
        int a = 0, b = 0;
        for (double t : s.times) (t < 20.0 ? a : b)++;
        x.push_back(a);
        y.push_back(b);
    }
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / pairs;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / pairs;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (int i = 0; i < pairs; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    CHECK(std::abs(sxy / std::sqrt(sxx * syy)) <= 0.05);
}

TEST_CASE("arrival_point_cdf examples and shape") {
    auto c = RateSpec::constant(0.7);
    CHECK(arrival_point_cdf(c, 5.0, 10.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(arrival_point_cdf(c, 10.0, 10.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(arrival_point_cdf(c, 0.0, 10.0) == doctest::Approx(0.0));

    auto linear = RateSpec::time_varying([](double x) { return x; }, 2.0);
    CHECK(arrival_point_cdf(linear, 1.0, 2.0) == doctest::Approx(0.25).epsilon(1e-8));

    double prev = -1.0;
    for (double a = 0.0; a <= 2.0; a += 0.1) {
        const double v = arrival_point_cdf(linear, a, 2.0);
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
    CHECK_THROWS_AS(arrival_point_cdf(c, 11.0, 10.0), std::invalid_argument);
    auto zero = RateSpec::time_varying([](double) { return 0.0; }, 1.0);
    CHECK_THROWS_AS(arrival_point_cdf(zero, 1.0, 2.0), std::invalid_argument);
}

TEST_SUITE_END();
