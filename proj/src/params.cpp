#include "vmg/params.hpp"

#include <cmath>
#include <sstream>

namespace vmg {

namespace {

// relative tolerance for the exact algebraic predicates below
constexpr double kPredTol = 1e-12;

std::string at(const char* name, Index i) {
    std::ostringstream os;
    os << name << "[" << i << "]";
    return os.str();
}

} // namespace

VMGammaParams make_vmgamma(const Vec& b, const Mat& M, const Vec& mu, const Vec& sigma) {
    const Index d = M.rows();
    const Index n = M.cols();
    if (d < 1 || n < 1) throw ValidationError("make_vmgamma: M must be d x n with d,n >= 1");
    if (b.size() != n) throw ValidationError("make_vmgamma: b length must equal columns of M");
    if (mu.size() != d) throw ValidationError("make_vmgamma: mu length must equal rows of M");
    if (sigma.size() != d) throw ValidationError("make_vmgamma: sigma length must equal rows of M");
    for (Index l = 0; l < n; ++l) {
        if (!(b[l] > 0.0) || !std::isfinite(b[l]))
            throw ValidationError("make_vmgamma: nonpositive shape " + at("b", l));
        if (M.col(l).minCoeff() < 0.0)
            throw ValidationError("make_vmgamma: negative entry in column " + at("M", l));
        if (M.col(l).maxCoeff() <= 0.0)
            throw ValidationError("make_vmgamma: zero column " + at("M", l));
    }
    for (Index k = 0; k < d; ++k) {
        if (sigma[k] < 0.0 || !std::isfinite(sigma[k]))
            throw ValidationError("make_vmgamma: negative variance " + at("sigma", k));
        if (!std::isfinite(mu[k])) throw ValidationError("make_vmgamma: non-finite " + at("mu", k));
    }
    return VMGammaParams{b, M, mu, sigma};
}

VMGammaParams from_vg(Index d, double b, const Vec& mu, const Vec& sigma) {
    return make_vmgamma(Vec::Constant(1, b), Mat::Ones(d, 1), mu, sigma);
}

VMGammaParams from_semeraro(double a, double bparam, const Vec& alpha, const Vec& mu,
                            const Vec& sigma) {
    const Index d = alpha.size();
    if (!(a > 0.0) || !(bparam > 0.0))
        throw ValidationError("from_semeraro: a and b must be positive");
    for (Index k = 0; k < d; ++k) {
        if (!(alpha[k] > 0.0)) throw ValidationError("from_semeraro: nonpositive " + at("alpha", k));
        if (!(bparam > a * alpha[k]))
            throw ValidationError("from_semeraro: requires b > a*alpha_k at " + at("alpha", k));
    }
    Vec b(d + 1);
    Mat M = Mat::Zero(d, d + 1);
    for (Index k = 0; k < d; ++k) {
        b[k] = bparam / alpha[k] - a;
        M(k, k) = (bparam - a * alpha[k]) / bparam;
        M(k, d) = a * alpha[k] / bparam;
    }
    b[d] = a;
    return make_vmgamma(b, M, mu, sigma);
}

VMGammaParams from_guillaume(const Vec& alpha, const Vec& a, const Vec& beta, double c1, double c2,
                             const Vec& mu, const Vec& sigma) {
    const Index d = alpha.size();
    if (a.size() != d || beta.size() != d)
        throw ValidationError("from_guillaume: alpha, a, beta must share length");
    if (!(c1 > 0.0) || !(c2 > 0.0)) throw ValidationError("from_guillaume: c1, c2 must be positive");
    for (Index k = 0; k < d; ++k) {
        if (!(alpha[k] > 0.0)) throw ValidationError("from_guillaume: nonpositive " + at("alpha", k));
        if (!(a[k] > 0.0)) throw ValidationError("from_guillaume: nonpositive " + at("a", k));
        if (!(beta[k] > 0.0)) throw ValidationError("from_guillaume: nonpositive " + at("beta", k));
    }
    Vec b(d + 1);
    Mat M = Mat::Zero(d, d + 1);
    for (Index k = 0; k < d; ++k) {
        b[k] = a[k];
        M(k, k) = a[k] / beta[k];
        M(k, d) = (c1 / c2) * alpha[k];
    }
    b[d] = c1;
    return make_vmgamma(b, M, mu, sigma);
}

VMGammaParams from_semeraro(double a, double bparam, const Vec& alpha) {
    const Index d = alpha.size();
    return from_semeraro(a, bparam, alpha, Vec::Zero(d), Vec::Ones(d));
}

VMGammaParams from_guillaume(const Vec& alpha, const Vec& a, const Vec& beta, double c1, double c2) {
    const Index d = alpha.size();
    return from_guillaume(alpha, a, beta, c1, c2, Vec::Zero(d), Vec::Ones(d));
}

std::vector<ThorinAtom> thorin_atoms(const VMGammaParams& p) {
    std::vector<ThorinAtom> atoms;
    atoms.reserve(static_cast<std::size_t>(p.n()));
    for (Index l = 0; l < p.n(); ++l) {
        const double s2 = p.M.col(l).squaredNorm();
        atoms.push_back({p.b[l], (p.b[l] / s2) * p.M.col(l)});
    }
    return atoms;
}

GammaMarginalReport has_gamma_marginal(const VMGammaParams& p, Index k) {
    if (k < 0 || k >= p.d()) throw ValidationError("has_gamma_marginal: component index out of range");
    GammaMarginalReport rep;
    Index l0 = -1;
    for (Index l = 0; l < p.n(); ++l)
        if (p.M(k, l) > 0.0) {
            l0 = l;
            break;
        }
    if (l0 < 0) return rep; // degenerate zero component
    double shape = 0.0;
    for (Index l = 0; l < p.n(); ++l) {
        if (p.M(k, l) == 0.0) continue;
        // b_l m_{k,l0} = b_{l0} m_{k,l} for every supported column
        const double lhs = p.b[l] * p.M(k, l0);
        const double rhs = p.b[l0] * p.M(k, l);
        if (std::abs(lhs - rhs) > kPredTol * std::max(std::abs(lhs), std::abs(rhs))) return rep;
        shape += p.b[l];
    }
    rep.is_gamma = true;
    rep.shape = shape;
    rep.rate = p.b[l0] / p.M(k, l0);
    return rep;
}

bool is_gamma_d_subordinator(const VMGammaParams& p) {
    const Index n = p.n();
    std::vector<double> norm(static_cast<std::size_t>(n));
    for (Index l = 0; l < n; ++l) norm[static_cast<std::size_t>(l)] = p.M.col(l).norm();
    for (Index k = 0; k < n; ++k) {
        for (Index l = k + 1; l < n; ++l) {
            const double nk = norm[static_cast<std::size_t>(k)];
            const double nl = norm[static_cast<std::size_t>(l)];
            const Vec diff = nl * p.M.col(k) - nk * p.M.col(l);
            if (diff.lpNorm<Eigen::Infinity>() > kPredTol * nk * nl) continue; // not parallel
            const double lhs = nl * p.b[k];
            const double rhs = nk * p.b[l];
            if (std::abs(lhs - rhs) > kPredTol * std::max(lhs, rhs)) return false;
        }
    }
    return true;
}

double subordinator_laplace_exponent(const VMGammaParams& p, const Vec& lambda) {
    if (lambda.size() != p.d())
        throw ValidationError("subordinator_laplace_exponent: lambda dimension mismatch");
    double sum = 0.0;
    for (Index l = 0; l < p.n(); ++l) {
        const double arg = (p.b[l] + p.M.col(l).dot(lambda)) / p.b[l];
        if (!(arg > 0.0))
            throw DomainError("subordinator_laplace_exponent: lambda outside transform domain");
        sum += p.b[l] * std::log(arg);
    }
    return sum;
}

double thorin_laplace_exponent(const std::vector<ThorinAtom>& atoms, const Vec& lambda) {
    double sum = 0.0;
    for (const auto& atom : atoms) {
        const double s2 = atom.location.squaredNorm();
        const double arg = (s2 + atom.location.dot(lambda)) / s2;
        if (!(arg > 0.0)) throw DomainError("thorin_laplace_exponent: lambda outside transform domain");
        sum += atom.weight * std::log(arg);
    }
    return sum;
}

} // namespace vmg
