#include "vmg/transforms.hpp"

#include <cmath>
#include <sstream>

namespace vmg {

namespace {

// b_l - <mu ⋄ M_l, lambda> - 0.5 |lambda|^2_{Sigma ⋄ M_l}, the per-factor
// Laplace denominator; positive exactly on D_Y.
double factor_margin(const VMGammaParams& p, const Vec& lambda, Index l) {
    const auto col = p.M.col(l).array();
    const double lin = (p.mu.array() * col * lambda.array()).sum();
    const double quad = (p.sigma.array() * col * lambda.array().square()).sum();
    return p.b[l] - lin - 0.5 * quad;
}

} // namespace

bool domain_contains(const VMGammaParams& p, const Vec& lambda) {
    if (lambda.size() != p.d()) throw ValidationError("domain_contains: lambda dimension mismatch");
    for (Index l = 0; l < p.n(); ++l)
        if (!(factor_margin(p, lambda, l) > 0.0)) return false;
    return true;
}

double laplace_exponent(const VMGammaParams& p, const Vec& lambda) {
    if (lambda.size() != p.d()) throw ValidationError("laplace_exponent: lambda dimension mismatch");
    double sum = 0.0;
    for (Index l = 0; l < p.n(); ++l) {
        const double margin = factor_margin(p, lambda, l);
        if (!(margin > 0.0)) throw DomainError("laplace_exponent: lambda outside D_Y");
        sum -= p.b[l] * std::log(margin / p.b[l]);
    }
    return sum;
}

std::complex<double> char_exponent(const VMGammaParams& p, const Vec& theta) {
    if (theta.size() != p.d()) throw ValidationError("char_exponent: theta dimension mismatch");
    std::complex<double> sum = 0.0;
    for (Index l = 0; l < p.n(); ++l) {
        const auto col = p.M.col(l).array();
        const double lin = (p.mu.array() * col * theta.array()).sum();
        const double quad = (p.sigma.array() * col * theta.array().square()).sum();
        // each argument has real part >= 1, so the principal log is safe
        const std::complex<double> arg(1.0 + 0.5 * quad / p.b[l], -lin / p.b[l]);
        sum -= p.b[l] * std::log(arg);
    }
    return sum;
}

VMGammaParams esscher_transform(const VMGammaParams& p, const Vec& lambda) {
    if (lambda.size() != p.d()) throw ValidationError("esscher_transform: lambda dimension mismatch");
    Mat M(p.d(), p.n());
    for (Index l = 0; l < p.n(); ++l) {
        const double margin = factor_margin(p, lambda, l);
        if (!(margin > 0.0)) throw DomainError("esscher_transform: lambda outside D_Y");
        M.col(l) = (p.b[l] / margin) * p.M.col(l);
    }
    const Vec mu = p.mu + p.sigma.cwiseProduct(lambda);
    return make_vmgamma(p.b, M, mu, p.sigma);
}

Vec kappa_of(const VMGammaParams& p, const Mat& A) {
    if (A.cols() != p.d()) throw ValidationError("kappa_of: A column count must equal d");
    Vec kappa(A.rows());
    for (Index i = 0; i < A.rows(); ++i) {
        const Vec row = A.row(i).transpose();
        if (!domain_contains(p, row)) {
            std::ostringstream os;
            os << "kappa_of: row " << i << " of A lies outside D_Y";
            throw DomainError(os.str());
        }
        kappa[i] = -laplace_exponent(p, row);
    }
    return kappa;
}

MarketModel make_market(const VMGammaParams& p, const Mat& A, const Vec& m, const Vec& q, double r,
                        const Vec& s0) {
    const Index k = A.rows();
    if (m.size() != k || q.size() != k || s0.size() != k)
        throw ValidationError("make_market: m, q, S0 must have length k");
    if (!std::isfinite(r)) throw ValidationError("make_market: non-finite rate");
    if ((s0.array() <= 0.0).any()) throw ValidationError("make_market: spot prices must be positive");
    MarketModel market{p, A, m, q, r, s0, kappa_of(p, A)};
    return market;
}

Mat correlation_root_2d(double rho) {
    if (!(std::abs(rho) < 1.0)) throw ValidationError("correlation_root_2d: |rho| must be < 1");
    // eigenvalues 1 +/- rho with eigenvectors (1,1)/sqrt2, (1,-1)/sqrt2
    const double sp = std::sqrt(1.0 + rho);
    const double sm = std::sqrt(1.0 - rho);
    Mat A(2, 2);
    A << 0.5 * (sp + sm), 0.5 * (sp - sm), 0.5 * (sp - sm), 0.5 * (sp + sm);
    return A;
}

Vec mean_R(const MarketModel& market, double t) {
    const auto& p = market.params;
    const Vec factor_mean = p.mu.cwiseProduct(p.M.rowwise().sum());
    return t * (market.m - market.q + market.kappa + market.A * factor_mean);
}

Mat cov_R(const MarketModel& market, double t) {
    const auto& p = market.params;
    Mat c = Mat::Zero(p.d(), p.d());
    for (Index l = 0; l < p.n(); ++l) {
        const Vec drift = p.mu.cwiseProduct(p.M.col(l));
        c += drift * drift.transpose() / p.b[l];
        c += (p.sigma.cwiseProduct(p.M.col(l))).asDiagonal();
    }
    return t * market.A * c * market.A.transpose();
}

namespace {

// Residual of the martingale system at h.
Vec esscher_residual(const MarketModel& market, const Vec& h) {
    const auto& p = market.params;
    const Index k = market.k();
    const double lam_h = laplace_exponent(p, market.A.transpose() * h);
    Vec f(k);
    for (Index i = 0; i < k; ++i) {
        Vec u = h;
        u[i] += 1.0;
        const Vec ei = market.A.row(i).transpose();
        f[i] = laplace_exponent(p, ei) + lam_h - laplace_exponent(p, market.A.transpose() * u) -
               (market.m[i] - market.r);
    }
    return f;
}

bool esscher_feasible(const MarketModel& market, const Vec& h, double margin) {
    const auto& p = market.params;
    auto inside = [&](const Vec& u) {
        const Vec lambda = market.A.transpose() * u;
        for (Index l = 0; l < p.n(); ++l)
            if (!(factor_margin(p, lambda, l) > margin)) return false;
        return true;
    };
    if (!inside(h)) return false;
    for (Index i = 0; i < market.k(); ++i) {
        Vec u = h;
        u[i] += 1.0;
        if (!inside(u)) return false;
    }
    return true;
}

} // namespace

EsscherSolution solve_esscher(const MarketModel& market, double tol, int max_iter) {
    const Index k = market.k();
    constexpr double kMargin = 1e-12;
    constexpr double kFdStep = 1e-6;
    Vec h = Vec::Zero(k);
    if (!esscher_feasible(market, h, kMargin))
        throw DomainError("solve_esscher: h = 0 infeasible, no starting point");
    Vec f = esscher_residual(market, h);
    double best = f.lpNorm<Eigen::Infinity>();
    int iter = 0;
    while (best > tol && iter < max_iter) {
        ++iter;
        Mat jac(k, k);
        for (Index j = 0; j < k; ++j) {
            Vec hj = h;
            hj[j] += kFdStep;
            jac.col(j) = (esscher_residual(market, hj) - f) / kFdStep;
        }
        const Vec step = jac.partialPivLu().solve(-f);
        double scale = 1.0;
        bool moved = false;
        for (int bt = 0; bt < 60; ++bt) {
            const Vec trial = h + scale * step;
            if (esscher_feasible(market, trial, kMargin)) {
                const Vec ft = esscher_residual(market, trial);
                const double nt = ft.lpNorm<Eigen::Infinity>();
                if (nt < best || bt == 59) {
                    h = trial;
                    f = ft;
                    best = nt;
                    moved = true;
                    break;
                }
            }
            scale *= 0.5;
        }
        if (!moved) break;
    }
    if (best > tol) {
        std::ostringstream os;
        os << "solve_esscher: no convergence after " << iter << " iterations, best residual " << best;
        throw ConvergenceError(os.str());
    }
    return EsscherSolution{h, best, iter};
}

MarketModel risk_neutral_market(const MarketModel& market) {
    const EsscherSolution sol = solve_esscher(market);
    MarketModel q = market; // keeps the P-computed kappa in the drift
    q.params = esscher_transform(market.params, market.A.transpose() * sol.h);
    return q;
}

} // namespace vmg
