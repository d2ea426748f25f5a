#pragma once

#include "vmg/types.hpp"

#include <vector>

namespace vmg {

// Parameters of a d-dimensional variance matrix-gamma process: n independent
// standard Gamma factors with shapes b, mixed into the subordinator by the
// nonnegative d x n matrix M (columns nonzero), driving a Brownian motion
// with drift mu and diagonal covariance sigma (the diagonal entries).
struct VMGammaParams {
    Vec b;     // n, factor shapes, all > 0
    Mat M;     // d x n, columns in [0,inf)^d \ {0}
    Vec mu;    // d
    Vec sigma; // d, diagonal of the covariance matrix, >= 0

    Index d() const { return M.rows(); }
    Index n() const { return M.cols(); }
};

// Validated constructor; throws ValidationError naming the violated invariant.
VMGammaParams make_vmgamma(const Vec& b, const Mat& M, const Vec& mu, const Vec& sigma);

// Classic variance gamma: a single common Gamma clock, M = (1,...,1)'.
VMGammaParams from_vg(Index d, double b, const Vec& mu, const Vec& sigma);

// Semeraro alpha-gamma subordinator mapped to matrix-gamma form.
// Requires bparam > a * alpha_k for all k. Brownian parameters are not part
// of the subordinator; callers set mu/sigma for the subordinated process.
VMGammaParams from_semeraro(double a, double bparam, const Vec& alpha, const Vec& mu,
                            const Vec& sigma);

// Guillaume's extension; all parameters positive.
VMGammaParams from_guillaume(const Vec& alpha, const Vec& a, const Vec& beta, double c1, double c2,
                             const Vec& mu, const Vec& sigma);

// Subordinator-only overloads: standard Brownian part (mu = 0, sigma = 1).
VMGammaParams from_semeraro(double a, double bparam, const Vec& alpha);
VMGammaParams from_guillaume(const Vec& alpha, const Vec& a, const Vec& beta, double c1, double c2);

struct ThorinAtom {
    double weight;
    Vec location;
};

// Finite Thorin measure of the subordinator: weight b_l at b_l M_l / |M_l|^2.
std::vector<ThorinAtom> thorin_atoms(const VMGammaParams& p);

struct GammaMarginalReport {
    bool is_gamma = false;
    double shape = 0.0; // p_k, valid when is_gamma
    double rate = 0.0;  // q_k, valid when is_gamma
};

// Whether subordinator component k (0-based) is a Gamma process, and its
// (shape, rate) if so.
GammaMarginalReport has_gamma_marginal(const VMGammaParams& p, Index k);

// Whether the subordinator lies in the spherical Gamma class: parallel
// columns must have proportional shapes.
bool is_gamma_d_subordinator(const VMGammaParams& p);

// -log E exp(-<lambda, T(1)>) of the subordinator, defined for lambda with
// b_l + <M_l, lambda> > 0 for all l.
double subordinator_laplace_exponent(const VMGammaParams& p, const Vec& lambda);

// Same quantity evaluated through the Thorin-measure integral form.
double thorin_laplace_exponent(const std::vector<ThorinAtom>& atoms, const Vec& lambda);

} // namespace vmg
