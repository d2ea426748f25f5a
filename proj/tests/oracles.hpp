#pragma once

// Test-only reference computations, kept independent of the library's own
// evaluation paths.

#include "vmg/quadrature.hpp"
#include "vmg/rng.hpp"
#include "vmg/types.hpp"

#include <cmath>

namespace vmg::oracle {

// e^x K_nu(x) through the integral representation
//   2 (delta/gamma)^{nu/2} K_nu(2 sqrt(delta gamma)) =
//       int_0^inf r^{nu-1} exp(-delta/r - gamma r) dr
// at delta = gamma = x/2, rewritten with r = e^u as
//   e^x K_nu(x) = int_0^inf cosh(nu u) exp(-x (cosh u - 1)) du.
inline double bessel_k_scaled_quadrature(double nu, double x) {
    // truncate where x (cosh u - 1) - |nu| u > 60
    double upper = 1.0;
    while (x * (std::cosh(upper) - 1.0) - std::abs(nu) * upper < 60.0 && upper < 60.0) upper += 0.5;
    auto f = [&](double u) { return std::cosh(nu * u) * std::exp(-x * (std::cosh(u) - 1.0)); };
    return integrate(f, 0.0, upper, 1e-15, 1e-13).value;
}

inline double bessel_k_quadrature(double nu, double x) {
    return bessel_k_scaled_quadrature(nu, x) * std::exp(-x);
}

struct MeanWithError {
    double mean;
    double std_error;
};

// sample mean and its standard error
template <class F>
MeanWithError monte_carlo_mean(F&& draw, long n, std::uint64_t seed) {
    double sum = 0.0, sumsq = 0.0;
    for (long i = 0; i < n; ++i) {
        Rng rng = Rng::for_stream(seed, static_cast<std::uint64_t>(i));
        const double v = draw(rng);
        sum += v;
        sumsq += v * v;
    }
    const double mean = sum / static_cast<double>(n);
    const double var = std::max(0.0, sumsq / static_cast<double>(n) - mean * mean);
    return {mean, std::sqrt(var / static_cast<double>(n))};
}

} // namespace vmg::oracle
