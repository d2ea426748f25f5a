#pragma once

#include "vmg/params.hpp"
#include "vmg/types.hpp"

#include <vector>

namespace vmg {

// One additive piece of the Levy measure of Y, supported on the subspace of
// coordinates where the generating column is positive. The density is taken
// with respect to Lebesgue measure on the supported coordinates (point mass
// at zero elsewhere).
struct LevyComponent {
    Index column = 0;               // generating column l
    std::vector<Index> support;     // J(l), coordinates k with m_kl > 0
    double alpha = 0.0;             // overall constant
    double beta = 0.0;              // 2 b_l + <mu ⋄ M_l, Sigma^{-1} mu>
    double weight_b = 0.0;          // b_l
    Vec inv_scale;                  // per supported k: 1 / (Sigma_kk m_kl)
    Vec tilt;                       // per supported k: mu_k / Sigma_kk

    int dim() const { return static_cast<int>(support.size()); }

    // density at the supported coordinates ys (size dim()); ys != 0
    double density(const Vec& ys) const;
};

// Decomposition of the Levy measure into per-factor components; requires a
// positive diagonal covariance.
std::vector<LevyComponent> levy_components(const VMGammaParams& p);

} // namespace vmg
