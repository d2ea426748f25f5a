#pragma once

#include "vmg/params.hpp"
#include "vmg/types.hpp"

#include <complex>

namespace vmg {

// True iff lambda lies in the exponential-moment domain D_Y:
// <mu ⋄ M_l, lambda> + 0.5 |lambda|^2_{Sigma ⋄ M_l} < b_l for every factor.
bool domain_contains(const VMGammaParams& p, const Vec& lambda);

// Cumulant Lambda(lambda) = log E exp(<lambda, Y(1)>). Throws DomainError
// outside D_Y.
double laplace_exponent(const VMGammaParams& p, const Vec& lambda);

// Levy exponent psi_Y(theta) with E exp(i<theta, Y(t)>) = exp(t psi_Y(theta)).
std::complex<double> char_exponent(const VMGammaParams& p, const Vec& theta);

// Exponentially tilted parameters: b unchanged, mu -> mu + Sigma lambda,
// Sigma unchanged, columns rescaled by b_l / (b_l - <mu ⋄ M_l, lambda> - ...).
VMGammaParams esscher_transform(const VMGammaParams& p, const Vec& lambda);

// Market of k assets S_i = S0_i exp(R_i) driven by d risk factors:
// R(t) = (m - q + kappa) t + A Y(t).
struct MarketModel {
    VMGammaParams params;
    Mat A;     // k x d factor loadings
    Vec m;     // expected total return rates
    Vec q;     // dividend yields
    double r;  // risk-free rate
    Vec s0;    // spot prices
    Vec kappa; // compensator, cached at construction

    Index k() const { return A.rows(); }
};

// Compensator kappa_i = -log E exp(<A_i', Y(1)>) per asset.
Vec kappa_of(const VMGammaParams& p, const Mat& A);

// Validated market constructor; computes and caches kappa.
MarketModel make_market(const VMGammaParams& p, const Mat& A, const Vec& m, const Vec& q, double r,
                        const Vec& s0);

// Symmetric principal square root of the 2x2 correlation matrix (1 rho; rho 1).
Mat correlation_root_2d(double rho);

Vec mean_R(const MarketModel& market, double t);
Mat cov_R(const MarketModel& market, double t);

struct EsscherSolution {
    Vec h;
    double residual = 0.0;
    int iterations = 0;
};

// Solves the martingale system
//   m_i - r = Lambda_AY(e_i) + Lambda_AY(h) - Lambda_AY(e_i + h)
// by damped Newton iteration from h = 0. Throws ConvergenceError when the
// iteration cap is reached (reporting the best residual).
EsscherSolution solve_esscher(const MarketModel& market, double tol = 1e-10, int max_iter = 200);

// Market under the Esscher martingale measure: parameters tilted by A'h*,
// deterministic drift (and so kappa) unchanged.
MarketModel risk_neutral_market(const MarketModel& market);

} // namespace vmg
