#include "raftedge/special_functions.hpp"

#include <cmath>
#include <stdexcept>

#include "raftedge/quadrature.hpp"

namespace raftedge {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Ascending power series; cancellation stays below ~1e-12 absolute for |x| < 12.
double j0_series(double x) {
    const double q = -0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 80; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum) + 1e-300) break;
    }
    return sum;
}

// Hankel asymptotic expansion for |x| >= 12, truncated at the smallest term.
double j0_asymptotic(double x) {
    double p = 1.0;
    double q = 0.0;
    double term = 1.0;
    double prev = 1.0;
    for (int m = 1; m < 40; ++m) {
        const double odd = 2.0 * m - 1.0;
        term *= odd * odd / (8.0 * m * x);
        if (std::abs(term) > prev) break;  // divergent tail reached
        prev = std::abs(term);
        const int r = m % 4;
        if (r == 1) q += term;
        else if (r == 2) p -= term;
        else if (r == 3) q -= term;
        else p += term;
        if (prev < 1e-17) break;
    }
    const double chi = x - 0.25 * kPi;
    return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) + q * std::sin(chi));
}

}  // namespace

double bessel_j0(double x) {
    x = std::abs(x);
    return x < 12.0 ? j0_series(x) : j0_asymptotic(x);
}

double bessel_i0(double x) {
    return std::exp(std::abs(x)) * bessel_i0_scaled(x);
}

double bessel_i0_scaled(double x) {
    x = std::abs(x);
    if (x < 15.0) {
        const double q = 0.25 * x * x;
        double term = 1.0;
        double sum = 1.0;
        for (int k = 1; k < 80; ++k) {
            term *= q / (static_cast<double>(k) * k);
            sum += term;
            if (term < 1e-18 * sum) break;
        }
        return std::exp(-x) * sum;
    }
    double term = 1.0;
    double sum = 1.0;
    double prev = 1.0;
    for (int m = 1; m < 40; ++m) {
        const double odd = 2.0 * m - 1.0;
        term *= odd * odd / (8.0 * m * x);
        if (term > prev) break;
        prev = term;
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum / std::sqrt(2.0 * kPi * x);
}

double marcum_q1(double alpha, double beta) {
    if (alpha < 0.0 || beta < 0.0) {
        throw std::invalid_argument("marcum_q1: arguments must be non-negative");
    }
    if (beta == 0.0) return 1.0;
    if (alpha == 0.0) return std::exp(-0.5 * beta * beta);
    // Integrand x * exp(-(x^2 + a^2)/2) * I0(a x) rewritten with the scaled I0
    // so the Gaussian bump around x = alpha never overflows.
    const double hi = std::max(alpha, beta) + 40.0;
    auto f = [alpha](double x) {
        const double d = x - alpha;
        return x * std::exp(-0.5 * d * d) * bessel_i0_scaled(alpha * x);
    };
    const double breaks[] = {alpha - 5.0, alpha - 1.0, alpha + 1.0, alpha + 5.0};
    const double q = integrate_with_breakpoints(f, beta, hi, breaks, 1e-10);
    return std::min(1.0, std::max(0.0, q));
}

}  // namespace raftedge
