#include "vmg/special_functions.hpp"

#include "vmg/types.hpp"

#include <cmath>
#include <limits>
#include <numbers>

// Evaluation strategy: exact closed forms for half-integer orders; otherwise
// the order is reduced to mu in [-1/2, 1/2], K_mu and K_{mu+1} are computed by
// Temme's series (x <= 2) or Steed's continued fraction CF2 (x > 2), and the
// three-term recurrence K_{m+1} = K_{m-1} + (2m/x) K_m walks up to the target.
// Both kernels are evaluated in the scaled form e^x K to avoid underflow.

namespace vmg {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIter = 10000;

// Coefficients gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu) and
// gam2 = (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2 for |mu| <= 1/2.
void temme_gammas(double mu, double& gam1, double& gam2, double& gampl, double& gammi) {
    gampl = 1.0 / std::tgamma(1.0 + mu); // 1/Gamma(1+mu)
    gammi = 1.0 / std::tgamma(1.0 - mu); // 1/Gamma(1-mu)
    if (std::abs(mu) < 1e-3) {
        // odd Taylor coefficients of 1/Gamma(1+z) to avoid cancellation
        constexpr double a1 = 0.57721566490153286061; // Euler-Mascheroni
        constexpr double a3 = -0.04200263503409523553;
        constexpr double a5 = -0.00421977345555443367;
        const double mu2 = mu * mu;
        gam1 = -(a1 + mu2 * (a3 + mu2 * a5));
    } else {
        gam1 = (gammi - gampl) / (2.0 * mu);
    }
    gam2 = 0.5 * (gammi + gampl);
}

// Temme series for x <= 2: returns scaled e^x K_mu(x), e^x K_{mu+1}(x).
void besselk_small(double mu, double x, double& kmu, double& kmu1) {
    const double x2 = 0.5 * x;
    const double pimu = std::numbers::pi * mu;
    const double fact = (std::abs(pimu) < kEps) ? 1.0 : pimu / std::sin(pimu);
    const double d = -std::log(x2);
    const double e = mu * d;
    const double fact2 = (std::abs(e) < kEps) ? 1.0 : std::sinh(e) / e;
    double gam1, gam2, gampl, gammi;
    temme_gammas(mu, gam1, gam2, gampl, gammi);
    double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
    double sum = ff;
    const double ex = std::exp(e);
    double p = 0.5 * ex / gampl;
    double q = 0.5 / (ex * gammi);
    double c = 1.0;
    const double d1 = x2 * x2;
    double sum1 = p;
    const double xmu2 = mu * mu;
    for (int i = 1; i <= kMaxIter; ++i) {
        ff = (i * ff + p + q) / (i * i - xmu2);
        c *= d1 / i;
        p /= (i - mu);
        q /= (i + mu);
        const double del = c * ff;
        sum += del;
        const double del1 = c * (p - i * ff);
        sum1 += del1;
        if (std::abs(del) < std::abs(sum) * kEps) break;
    }
    const double scale = std::exp(x);
    kmu = sum * scale;
    kmu1 = sum1 * (2.0 / x) * scale;
}

// Steed/Thompson-Barnett CF2 for x > 2: scaled e^x K_mu(x), e^x K_{mu+1}(x).
void besselk_large(double mu, double x, double& kmu, double& kmu1) {
    const double a1 = 0.25 - mu * mu;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    double a = -a1;
    double q = a1, c = a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i <= kMaxIter; ++i) {
        a -= 2 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < kEps) break;
    }
    h = a1 * h;
    kmu = std::sqrt(std::numbers::pi / (2.0 * x)) / s;
    kmu1 = kmu * (mu + x + 0.5 - h) / x;
}

bool is_half_integer(double nu) {
    const double two = 2.0 * nu;
    return std::abs(two - std::round(two)) == 0.0 && std::fmod(std::round(two), 2.0) != 0.0;
}

// Scaled e^x K for half-integer order via the exact K_{1/2} seed.
double besselk_half_scaled(double nu, double x) {
    const double k_half = std::sqrt(std::numbers::pi / (2.0 * x));
    if (nu == 0.5) return k_half;
    double k0 = k_half;
    double k1 = k_half * (1.0 + 1.0 / x); // e^x K_{3/2}
    const int steps = static_cast<int>(std::round(nu - 0.5)) - 1;
    for (int j = 1; j <= steps; ++j) {
        const double knext = k0 + (2.0 * (0.5 + j) / x) * k1;
        k0 = k1;
        k1 = knext;
    }
    return k1;
}

} // namespace

double bessel_k_scaled(double nu, double x) {
    if (!(x > 0.0) || !std::isfinite(x) || !std::isfinite(nu))
        throw DomainError("bessel_k: requires finite nu and x > 0");
    nu = std::abs(nu); // K is even in its order
    if (is_half_integer(nu)) return besselk_half_scaled(nu, x);
    const int nl = static_cast<int>(nu + 0.5);
    const double mu = nu - nl;
    double k0, k1;
    if (x <= 2.0)
        besselk_small(mu, x, k0, k1);
    else
        besselk_large(mu, x, k0, k1);
    for (int j = 1; j <= nl; ++j) {
        const double knext = k0 + (2.0 * (mu + j) / x) * k1;
        k0 = k1;
        k1 = knext;
    }
    return k0;
}

double bessel_k(double nu, double x) {
    return bessel_k_scaled(nu, x) * std::exp(-x);
}

double k_hat(double nu, double r) {
    if (!(nu > 0.0) || !(r > 0.0) || !std::isfinite(nu) || !std::isfinite(r))
        throw DomainError("k_hat: requires nu > 0 and r > 0");
    // r^nu e^{-r} in one exp keeps the product alive where K alone underflows
    return std::exp(nu * std::log(r) - r) * bessel_k_scaled(nu, r);
}

double log_gamma_fn(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("log_gamma_fn: requires x > 0");
    return std::lgamma(x);
}

} // namespace vmg
