#include "vmg/levy.hpp"

#include "vmg/special_functions.hpp"

#include <cmath>
#include <numbers>

namespace vmg {

double LevyComponent::density(const Vec& ys) const {
    const int dl = dim();
    if (dl == 1) {
        // closed form through K_{1/2}: (b/|y|) exp(tilt y - sqrt(beta w) |y|)
        const double ay = std::abs(ys[0]);
        return weight_b / ay * std::exp(tilt[0] * ys[0] - std::sqrt(beta * inv_scale[0]) * ay);
    }
    const double s = (inv_scale.array() * ys.array().square()).sum();
    const double z = std::sqrt(beta * s);
    const double expo = tilt.dot(ys) - z;
    return alpha * std::exp(expo) * bessel_k_scaled(0.5 * dl, z) / std::pow(s, 0.25 * dl);
}

std::vector<LevyComponent> levy_components(const VMGammaParams& p) {
    if ((p.sigma.array() <= 0.0).any())
        throw DomainError("levy_components: requires positive diagonal covariance");
    std::vector<LevyComponent> comps;
    comps.reserve(static_cast<std::size_t>(p.n()));
    for (Index l = 0; l < p.n(); ++l) {
        LevyComponent c;
        c.column = l;
        c.weight_b = p.b[l];
        for (Index k = 0; k < p.d(); ++k)
            if (p.M(k, l) > 0.0) c.support.push_back(k);
        const int dl = c.dim();
        c.inv_scale.resize(dl);
        c.tilt.resize(dl);
        double beta = 2.0 * p.b[l];
        double denom = 1.0;
        for (int idx = 0; idx < dl; ++idx) {
            const Index k = c.support[static_cast<std::size_t>(idx)];
            c.inv_scale[idx] = 1.0 / (p.sigma[k] * p.M(k, l));
            c.tilt[idx] = p.mu[k] / p.sigma[k];
            beta += p.M(k, l) * p.mu[k] * p.mu[k] / p.sigma[k];
            denom *= std::sqrt(p.sigma[k] * p.M(k, l));
        }
        c.beta = beta;
        c.alpha = std::pow(2.0, 0.5 * (2.0 - dl)) * std::pow(std::numbers::pi, -0.5 * dl) * p.b[l] *
                  std::pow(beta, 0.25 * dl) / denom;
        comps.push_back(std::move(c));
    }
    return comps;
}

} // namespace vmg
