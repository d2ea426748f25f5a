#pragma once

#include "vmg/rng.hpp"
#include "vmg/transforms.hpp"

namespace vmg {

// One draw of Y(t) by superposing the n independent variance-gamma factors:
// per factor, G_l ~ Gamma(b_l t, rate b_l) and Y_l = (mu ⋄ M_l) G_l +
// sqrt(Sigma ⋄ M_l G_l) ⋄ Z_l with a standard normal vector Z_l.
inline Vec sample_y(const VMGammaParams& p, double t, Rng& rng) {
    Vec y = Vec::Zero(p.d());
    for (Index l = 0; l < p.n(); ++l) {
        const double g = rng.gamma(p.b[l] * t) / p.b[l];
        for (Index k = 0; k < p.d(); ++k) {
            const double m = p.M(k, l);
            if (m == 0.0) {
                continue;
            }
            y[k] += p.mu[k] * m * g + std::sqrt(p.sigma[k] * m * g) * rng.normal();
        }
    }
    return y;
}

// One draw of the log-return vector R(t).
inline Vec sample_r(const MarketModel& market, double t, Rng& rng) {
    return t * (market.m - market.q + market.kappa) + market.A * sample_y(market.params, t, rng);
}

} // namespace vmg
