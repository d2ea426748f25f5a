#include "vmg/density.hpp"

#include "vmg/fft.hpp"
#include "vmg/quadrature.hpp"
#include "vmg/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace vmg {

Vec DensityGrid::grid_mean() const {
    Vec mean = Vec::Zero(2);
    std::vector<double> sx(static_cast<std::size_t>(n1) * n2), sy(sx.size());
    std::size_t idx = 0;
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j, ++idx) {
            sx[idx] = values(i, j) * y1(i);
            sy[idx] = values(i, j) * y2(j);
        }
    mean[0] = pairwise_sum(sx) * cell_volume();
    mean[1] = pairwise_sum(sy) * cell_volume();
    return mean;
}

Mat DensityGrid::grid_cov() const {
    const Vec mean = grid_mean();
    std::vector<double> sxx(static_cast<std::size_t>(n1) * n2), syy(sxx.size()), sxy(sxx.size());
    std::size_t idx = 0;
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j, ++idx) {
            const double dx = y1(i) - mean[0];
            const double dy = y2(j) - mean[1];
            sxx[idx] = values(i, j) * dx * dx;
            syy[idx] = values(i, j) * dy * dy;
            sxy[idx] = values(i, j) * dx * dy;
        }
    Mat cov(2, 2);
    cov(0, 0) = pairwise_sum(sxx) * cell_volume();
    cov(1, 1) = pairwise_sum(syy) * cell_volume();
    cov(0, 1) = cov(1, 0) = pairwise_sum(sxy) * cell_volume();
    return cov;
}

DensityGrid density_R_fft(const MarketModel& market, double t, const GridRequest& request) {
    if (market.k() != 2 || market.params.d() != 2)
        throw ValidationError("density_R_fft: implemented for k = d = 2");
    if (!(t > 0.0)) throw ValidationError("density_R_fft: t must be positive");
    const int n1 = request.n1, n2 = request.n2;
    if (n1 < 8 || (n1 & (n1 - 1)) || n2 < 8 || (n2 & (n2 - 1)))
        throw ValidationError("density_R_fft: grid counts must be powers of two");

    const Vec mean = mean_R(market, t);
    const Mat cov = cov_R(market, t);
    const double half1 = request.extent_sds * std::sqrt(cov(0, 0));
    const double half2 = request.extent_sds * std::sqrt(cov(1, 1));

    DensityGrid grid;
    grid.t = t;
    grid.n1 = n1;
    grid.n2 = n2;
    grid.spacing = Vec(2);
    grid.spacing << 2.0 * half1 / n1, 2.0 * half2 / n2;
    grid.origin = Vec(2);
    grid.origin << mean[0] - half1 + 0.5 * grid.spacing[0], mean[1] - half2 + 0.5 * grid.spacing[1];

    const double dth1 = 2.0 * std::numbers::pi / (n1 * grid.spacing[0]);
    const double dth2 = 2.0 * std::numbers::pi / (n2 * grid.spacing[1]);
    const Vec drift = market.m - market.q + market.kappa;

    auto cf = [&](double th1, double th2) {
        Vec theta(2);
        theta << th1, th2;
        const std::complex<double> expo =
            std::complex<double>(0.0, t * theta.dot(drift)) +
            t * char_exponent(market.params, market.A.transpose() * theta);
        return std::exp(expo);
    };

    CMat work(n1, n2);
    double nyq = 0.0;
    for (int p = 0; p < n1; ++p) {
        const double th1 = (p - n1 / 2) * dth1;
        // trapezoid weight at the left frequency endpoint
        const double w1 = (p == 0) ? 0.5 : 1.0;
        for (int q = 0; q < n2; ++q) {
            const double th2 = (q - n2 / 2) * dth2;
            const double w2 = (q == 0) ? 0.5 : 1.0;
            const std::complex<double> phi = cf(th1, th2);
            if (p == 0 || q == 0) nyq = std::max(nyq, std::abs(phi));
            const double phase = -(th1 * grid.origin[0] + th2 * grid.origin[1]);
            work(p, q) = phi * std::polar(w1 * w2, phase);
        }
    }
    grid.nyquist_modulus = nyq;
    grid.aliasing_warning = nyq > 1e-8;

    fft2_pow2(work, -1);

    const double scale = dth1 * dth2 / (4.0 * std::numbers::pi * std::numbers::pi);
    grid.values.resize(n1, n2);
    double clipped = 0.0;
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
            const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            double v = scale * sign * work(i, j).real();
            if (v < 0.0) {
                clipped -= v;
                v = 0.0;
            }
            grid.values(i, j) = v;
        }
    std::vector<double> cells(static_cast<std::size_t>(n1) * n2);
    Eigen::Map<Mat>(cells.data(), n1, n2) = grid.values;
    grid.raw_mass = pairwise_sum(cells) * grid.cell_volume();
    grid.clipped_mass = clipped * grid.cell_volume();
    grid.values /= grid.raw_mass;
    return grid;
}

bool is_structured(const VMGammaParams& p) {
    const Index d = p.d();
    if (p.n() != d + 1) return false;
    for (Index k = 0; k < d; ++k) {
        if (!(p.M(k, k) > 0.0) || !(p.M(k, d) > 0.0)) return false;
        for (Index l = 0; l < d; ++l)
            if (l != k && p.M(k, l) != 0.0) return false;
    }
    return true;
}

namespace {

void require_structured(const VMGammaParams& p, const char* where) {
    if (!is_structured(p)) throw ValidationError(std::string(where) + ": parameters must have the (diag | column) layout");
}

// log of the normalizer C*_t of the subordinator transition density
double log_cstar(const VMGammaParams& p, double t) {
    const Index d = p.d();
    double lc = t * p.b[d] * std::log(p.b[d]) - log_gamma_fn(t * p.b[d]);
    for (Index k = 0; k < d; ++k)
        lc += t * p.b[k] * std::log(p.b[k]) - log_gamma_fn(t * p.b[k]) - t * p.b[k] * std::log(p.M(k, k));
    return lc;
}

double beta_star(const VMGammaParams& p) {
    const Index d = p.d();
    double bs = -p.b[d];
    for (Index k = 0; k < d; ++k) bs += p.b[k] * p.M(k, d) / p.M(k, k);
    return bs;
}

} // namespace

double density_T_quadrature(const VMGammaParams& p, double t, const Vec& tau) {
    require_structured(p, "density_T_quadrature");
    if (!(t > 0.0)) throw ValidationError("density_T_quadrature: t must be positive");
    const Index d = p.d();
    if (tau.size() != d) throw ValidationError("density_T_quadrature: tau dimension mismatch");
    if ((tau.array() <= 0.0).any()) return 0.0;

    const double a = t * p.b[d];
    Vec c(d);
    for (Index k = 0; k < d; ++k) c[k] = t * p.b[k];
    double smax = std::numeric_limits<double>::infinity();
    for (Index k = 0; k < d; ++k) smax = std::min(smax, tau[k] / p.M(k, d));
    const double bs = beta_star(p);

    // combined singular exponent at the upper endpoint
    double gamma_up = 1.0;
    for (Index k = 0; k < d; ++k)
        if (tau[k] / p.M(k, d) <= smax * (1.0 + 1e-12)) gamma_up += c[k] - 1.0;
    if (gamma_up <= 0.0) return std::numeric_limits<double>::infinity();

    auto log_g = [&](double s) {
        double lg = bs * s + (a - 1.0) * std::log(s);
        for (Index k = 0; k < d; ++k) {
            const double rem = tau[k] - p.M(k, d) * s;
            if (rem <= 0.0) return -std::numeric_limits<double>::infinity();
            lg += (c[k] - 1.0) * std::log(rem);
        }
        return lg;
    };

    const double smid = 0.5 * smax;
    // left panel: s = smid u^{1/a}; then s^{a-1} ds = (smid^a / a) du exactly
    const double log_left_jac = a * std::log(smid) - std::log(a);
    auto left = [&](double u) {
        const double s = smid * std::pow(u, 1.0 / a);
        double l = bs * s + log_left_jac;
        for (Index k = 0; k < d; ++k) {
            const double rem = tau[k] - p.M(k, d) * s;
            if (rem <= 0.0) return 0.0;
            l += (c[k] - 1.0) * std::log(rem);
        }
        return std::exp(l);
    };
    // right panel: smax - s = h v^{1/gamma} removes the product endpoint power
    const double h = smax - smid;
    auto right = [&](double v) {
        const double s = smax - h * std::pow(v, 1.0 / gamma_up);
        if (s <= 0.0 || s >= smax) return 0.0;
        const double l = log_g(s) + std::log(h / gamma_up) + (1.0 / gamma_up - 1.0) * std::log(v);
        return std::exp(l);
    };

    const auto ql = integrate(left, 0.0, 1.0, 1e-12, 1e-10);
    const auto qr = integrate(right, 0.0, 1.0, 1e-12, 1e-10);
    const double integral = ql.value + qr.value;
    if (integral <= 0.0) return 0.0;

    double lf = log_cstar(p, t) + std::log(integral);
    for (Index k = 0; k < d; ++k) lf -= p.b[k] * tau[k] / p.M(k, k);
    return std::exp(lf);
}

double density_Y_quadrature(const VMGammaParams& p, double t, const Vec& y) {
    require_structured(p, "density_Y_quadrature");
    if (!(t > 0.0)) throw ValidationError("density_Y_quadrature: t must be positive");
    const Index d = p.d();
    if (y.size() != d) throw ValidationError("density_Y_quadrature: y dimension mismatch");
    if ((p.sigma.array() <= 0.0).any())
        throw DomainError("density_Y_quadrature: requires positive diagonal covariance");

    Vec ak(d), ahat(d), c(d);
    double csum = 2.0 * p.b[d];
    for (Index k = 0; k < d; ++k) {
        ak[k] = 1.0 / (2.0 * p.M(k, d) * p.sigma[k]);
        ahat[k] = p.M(k, d) * (p.b[k] / p.M(k, k) + p.mu[k] * p.mu[k] / (2.0 * p.sigma[k]));
        c[k] = t * p.b[k];
        csum += p.M(k, d) * p.mu[k] * p.mu[k] / p.sigma[k];
    }
    const double bs = beta_star(p);
    const double spower = t * p.b.sum() - 0.5 * (d + 2); // exponent of s in the outer integrand

    // inner integral over u in (0,1), endpoint power (1-u)^{c-1} removed by
    // the substitution 1 - u = w^{1/c}
    auto inner = [&](Index k, double s) {
        const double yk2 = y[k] * y[k];
        auto f = [&](double w) {
            const double u = 1.0 - std::pow(w, 1.0 / c[k]);
            if (u <= 0.0 || u >= 1.0) return 0.0;
            const double expo = -ak[k] * u * yk2 / s - ahat[k] * s / u - (c[k] + 0.5) * std::log(u);
            return std::exp(expo) / c[k];
        };
        return integrate(f, 0.0, 1.0, 1e-13, 1e-10).value;
    };

    auto outer_integrand = [&](double s) {
        if (s <= 0.0) return 0.0;
        double v = bs * s + spower * std::log(s);
        if (v > 600.0) return std::numeric_limits<double>::infinity();
        double prod = std::exp(v);
        for (Index k = 0; k < d; ++k) {
            if (prod == 0.0) break;
            prod *= inner(k, s);
        }
        return prod;
    };

    // decay rate of the outer tail is csum/2
    double s_up = 2.0 * (60.0 + std::max(spower, 0.0)) / csum;
    for (int it = 0; it < 4; ++it)
        s_up = 2.0 * (60.0 + std::max(spower, 0.0) * std::log(std::max(s_up, 2.0))) / csum;
    const auto q = integrate(outer_integrand, 0.0, s_up, 1e-14, 1e-8, 40);

    double lc = log_cstar(p, t) - 0.5 * d * std::log(2.0 * std::numbers::pi);
    for (Index k = 0; k < d; ++k)
        lc += (c[k] - 0.5) * std::log(p.M(k, d)) - 0.5 * std::log(p.sigma[k]) + p.mu[k] * y[k] / p.sigma[k];
    return std::exp(lc) * q.value;
}

double vg1_density(double b, double mu, double sigma, double t, double y) {
    if (!(sigma > 0.0) || !(b > 0.0) || !(t > 0.0))
        throw ValidationError("vg1_density: requires b, sigma, t positive");
    const double nu = (2.0 * b * t - 1.0) / 2.0;
    const double beta = 2.0 * b + mu * mu / sigma;
    const double logpref = 0.5 * std::log(2.0) + b * t * std::log(b) + mu * y / sigma -
                           0.5 * std::log(std::numbers::pi) - 0.5 * std::log(sigma) -
                           log_gamma_fn(b * t);
    const double q = y * y / sigma;
    if (q == 0.0) {
        if (nu <= 0.0) return std::numeric_limits<double>::infinity();
        return std::exp(logpref - nu * std::log(beta) + (nu - 1.0) * std::log(2.0) + log_gamma_fn(nu));
    }
    const double arg = std::sqrt(beta * q);
    return std::exp(logpref + 0.5 * nu * (std::log(q) - std::log(beta)) - arg) *
           bessel_k_scaled(std::abs(nu), arg);
}

} // namespace vmg
