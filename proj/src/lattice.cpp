#include "vmg/lattice.hpp"

#include "vmg/fft.hpp"
#include "vmg/quadrature.hpp"

#include <cmath>
#include <sstream>

namespace vmg {

namespace {

constexpr std::array<double, 3> kGl3Nodes = {-0.7745966692414834, 0.0, 0.7745966692414834};
constexpr std::array<double, 3> kGl3W = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
constexpr std::array<double, 5> kGl5Nodes = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                             0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kGl5W = {0.2369268850561891, 0.4786286704993665,
                                         0.5688888888888889, 0.4786286704993665,
                                         0.2369268850561891};

template <class F>
double gl_cell(F&& f, double x0, double x1, double y0, double y1, bool fine) {
    const double cx = 0.5 * (x0 + x1), hx = 0.5 * (x1 - x0);
    const double cy = 0.5 * (y0 + y1), hy = 0.5 * (y1 - y0);
    double sum = 0.0;
    if (fine) {
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j)
                sum += kGl5W[i] * kGl5W[j] * f(cx + hx * kGl5Nodes[i], cy + hy * kGl5Nodes[j]);
    } else {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                sum += kGl3W[i] * kGl3W[j] * f(cx + hx * kGl3Nodes[i], cy + hy * kGl3Nodes[j]);
    }
    return sum * hx * hy;
}

// Tensor Gauss-Legendre with recursive 2x2 refinement; the integrand is
// smooth except for steep growth toward the origin-nearest corner of cells
// adjacent to the center, which the subdivision resolves.
template <class F>
double integrate_cell(F&& f, double x0, double x1, double y0, double y1, double rel_tol,
                      int depth = 0) {
    const double coarse = gl_cell(f, x0, x1, y0, y1, false);
    const double fine = gl_cell(f, x0, x1, y0, y1, true);
    if (std::abs(fine - coarse) <= rel_tol * std::max(std::abs(fine), 1e-300) || depth >= 14)
        return fine;
    const double xm = 0.5 * (x0 + x1), ym = 0.5 * (y0 + y1);
    return integrate_cell(f, x0, xm, y0, ym, rel_tol, depth + 1) +
           integrate_cell(f, xm, x1, y0, ym, rel_tol, depth + 1) +
           integrate_cell(f, x0, xm, ym, y1, rel_tol, depth + 1) +
           integrate_cell(f, xm, x1, ym, y1, rel_tol, depth + 1);
}

} // namespace

Lattice build_lattice(const MarketModel& qmarket, const LatticeSpec& spec) {
    const auto& p = qmarket.params;
    if (p.d() != 2) throw ValidationError("build_lattice: implemented for d = 2");
    if (spec.n1 < 3 || spec.n2 < 3 || spec.n1 % 2 == 0 || spec.n2 % 2 == 0)
        throw ValidationError("build_lattice: node counts must be odd and at least 3");
    if (!(spec.step1 > 0.0) || !(spec.step2 > 0.0) || !(spec.dt > 0.0))
        throw ValidationError("build_lattice: steps and dt must be positive");

    const int h1 = spec.n1 / 2, h2 = spec.n2 / 2;
    const double d1 = spec.step1, d2 = spec.step2;
    Lattice lat;
    lat.spec = spec;
    lat.kernel = Mat::Zero(spec.n1, spec.n2);

    const auto comps = levy_components(p);
    Vec ys1(1), ys2(2);
    for (const auto& comp : comps) {
        if (comp.dim() == 2) {
            auto f = [&](double x, double y) {
                ys2[0] = x;
                ys2[1] = y;
                return comp.density(ys2);
            };
            for (int a = -h1; a <= h1; ++a)
                for (int b = -h2; b <= h2; ++b) {
                    if (a == 0 && b == 0) continue;
                    const double v = integrate_cell(f, (a - 0.5) * d1, (a + 0.5) * d1,
                                                    (b - 0.5) * d2, (b + 0.5) * d2, 1e-9);
                    lat.kernel(a + h1, b + h2) += v;
                }
        } else {
            const Index axis = comp.support[0];
            auto f = [&](double x) {
                ys1[0] = x;
                return comp.density(ys1);
            };
            const int half = axis == 0 ? h1 : h2;
            const double step = axis == 0 ? d1 : d2;
            for (int a = -half; a <= half; ++a) {
                if (a == 0) continue;
                const double v =
                    integrate(f, (a - 0.5) * step, (a + 0.5) * step, 1e-16, 1e-11).value;
                if (axis == 0)
                    lat.kernel(a + h1, h2) += v;
                else
                    lat.kernel(h1, a + h2) += v;
            }
        }
    }

    lat.kernel *= spec.dt;
    const double jump_mass = lat.kernel.sum();
    if (jump_mass >= 1.0) {
        std::ostringstream os;
        os << "build_lattice: off-center mass " << jump_mass << " >= 1; reduce dt";
        throw ValidationError(os.str());
    }
    lat.p0 = 1.0 - jump_mass;
    lat.kernel(h1, h2) = lat.p0;

    // first-moment patch: shift mass between the center's direct neighbors so
    // the kernel's one-step mean matches dt * sum_l mu ⋄ M_l exactly
    const Vec target = spec.dt * p.mu.cwiseProduct(p.M.rowwise().sum());
    Vec mean = Vec::Zero(2);
    for (int i = 0; i < spec.n1; ++i)
        for (int j = 0; j < spec.n2; ++j) {
            mean[0] += lat.kernel(i, j) * (i - h1) * d1;
            mean[1] += lat.kernel(i, j) * (j - h2) * d2;
        }
    lat.mean_patch = Vec(2);
    lat.mean_patch << (target[0] - mean[0]) / (2.0 * d1), (target[1] - mean[1]) / (2.0 * d2);
    lat.kernel(h1 + 1, h2) += lat.mean_patch[0];
    lat.kernel(h1 - 1, h2) -= lat.mean_patch[0];
    lat.kernel(h1, h2 + 1) += lat.mean_patch[1];
    lat.kernel(h1, h2 - 1) -= lat.mean_patch[1];
    if (lat.kernel(h1 + 1, h2) < 0.0 || lat.kernel(h1 - 1, h2) < 0.0 ||
        lat.kernel(h1, h2 + 1) < 0.0 || lat.kernel(h1, h2 - 1) < 0.0)
        throw ValidationError("build_lattice: moment correction exceeds neighbor mass");

    for (int i = 0; i < spec.n1; ++i)
        for (int j = 0; j < spec.n2; ++j)
            if (std::abs(i - h1) > h1 / 2 || std::abs(j - h2) > h2 / 2)
                lat.tail_mass += lat.kernel(i, j);
    return lat;
}

Mat apply_kernel_gather(const Mat& kernel, const Mat& v) {
    const int n1 = static_cast<int>(v.rows()), n2 = static_cast<int>(v.cols());
    const int h1 = static_cast<int>(kernel.rows()) / 2, h2 = static_cast<int>(kernel.cols()) / 2;
    Mat out = Mat::Zero(n1, n2);
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
            double acc = 0.0;
            for (int a = -h1; a <= h1; ++a) {
                const int ii = std::clamp(i + a, 0, n1 - 1);
                for (int b = -h2; b <= h2; ++b) {
                    const int jj = std::clamp(j + b, 0, n2 - 1);
                    acc += kernel(a + h1, b + h2) * v(ii, jj);
                }
            }
            out(i, j) = acc;
        }
    return out;
}

Mat apply_kernel_scatter(const Mat& kernel, const Mat& dist) {
    const int n1 = static_cast<int>(dist.rows()), n2 = static_cast<int>(dist.cols());
    const int h1 = static_cast<int>(kernel.rows()) / 2, h2 = static_cast<int>(kernel.cols()) / 2;
    Mat out = Mat::Zero(n1, n2);
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
            const double m = dist(i, j);
            if (m == 0.0) continue;
            for (int a = -h1; a <= h1; ++a) {
                const int ii = std::clamp(i + a, 0, n1 - 1);
                for (int b = -h2; b <= h2; ++b) {
                    const int jj = std::clamp(j + b, 0, n2 - 1);
                    out(ii, jj) += kernel(a + h1, b + h2) * m;
                }
            }
        }
    return out;
}

namespace {

int next_pow2(int n) {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

// FFT workspace for repeated kernel application; both directions run one
// circular convolution sized to hold the full linear support, so results
// equal the direct loops up to floating-point roundoff.
struct KernelFFT {
    int n1, n2, h1, h2, f1, f2;
    CMat khat;

    KernelFFT(const Mat& kernel, int rows, int cols)
        : n1(rows), n2(cols), h1(static_cast<int>(kernel.rows()) / 2),
          h2(static_cast<int>(kernel.cols()) / 2) {
        f1 = next_pow2(n1 + 2 * h1);
        f2 = next_pow2(n2 + 2 * h2);
        khat = CMat::Zero(f1, f2);
        for (int i = 0; i < kernel.rows(); ++i)
            for (int j = 0; j < kernel.cols(); ++j) khat(i, j) = kernel(i, j);
        fft2_pow2(khat, -1);
    }

    Mat gather(const Mat& v) const {
        CMat w = CMat::Zero(f1, f2);
        for (int u = 0; u < n1 + 2 * h1; ++u) {
            const int i = std::clamp(u - h1, 0, n1 - 1);
            for (int t = 0; t < n2 + 2 * h2; ++t) w(u, t) = v(i, std::clamp(t - h2, 0, n2 - 1));
        }
        fft2_pow2(w, -1);
        w.array() *= khat.array().conjugate();
        fft2_pow2(w, 1);
        const double scale = 1.0 / (static_cast<double>(f1) * f2);
        Mat out(n1, n2);
        for (int i = 0; i < n1; ++i)
            for (int j = 0; j < n2; ++j) out(i, j) = w(i, j).real() * scale;
        return out;
    }

    Mat scatter(const Mat& dist) const {
        CMat w = CMat::Zero(f1, f2);
        for (int i = 0; i < n1; ++i)
            for (int j = 0; j < n2; ++j) w(i, j) = dist(i, j);
        fft2_pow2(w, -1);
        w.array() *= khat.array();
        fft2_pow2(w, 1);
        const double scale = 1.0 / (static_cast<double>(f1) * f2);
        Mat out = Mat::Zero(n1, n2);
        for (int u = 0; u < n1 + 2 * h1; ++u) {
            const int i = std::clamp(u - h1, 0, n1 - 1);
            for (int t = 0; t < n2 + 2 * h2; ++t)
                out(i, std::clamp(t - h2, 0, n2 - 1)) += w(u, t).real() * scale;
        }
        return out;
    }
};

// node -> log-return map: R_k(node, t) = drift_k t + (A y)_k
struct NodeMap {
    Mat x1, x2; // (A y)_k over the node grid
    Vec drift;

    NodeMap(const MarketModel& market, const LatticeSpec& spec) {
        const int h1 = spec.n1 / 2, h2 = spec.n2 / 2;
        x1.resize(spec.n1, spec.n2);
        x2.resize(spec.n1, spec.n2);
        for (int i = 0; i < spec.n1; ++i)
            for (int j = 0; j < spec.n2; ++j) {
                const double y1 = (i - h1) * spec.step1;
                const double y2 = (j - h2) * spec.step2;
                x1(i, j) = market.A(0, 0) * y1 + market.A(0, 1) * y2;
                x2(i, j) = market.A(1, 0) * y1 + market.A(1, 1) * y2;
            }
        drift = market.m - market.q + market.kappa;
    }

    void payoff_grid(const MarketModel& market, const OptionSpec& opt, double t, Mat& out) const {
        const double s01 = market.s0[0], s02 = market.s0[1];
        const double d1 = drift[0] * t, d2 = drift[1] * t;
        const bool best = opt.kind == OptionSpec::Kind::best_of_put;
        for (int i = 0; i < x1.rows(); ++i)
            for (int j = 0; j < x1.cols(); ++j) {
                const double sa = s01 * std::exp(d1 + x1(i, j));
                const double sb = s02 * std::exp(d2 + x2(i, j));
                const double pivot = best ? std::max(sa, sb) : std::min(sa, sb);
                out(i, j) = std::max(opt.strike - pivot, 0.0);
            }
    }
};

} // namespace

PriceResult price_lattice(const MarketModel& qmarket, const OptionSpec& option,
                          const Lattice& lattice) {
    if (qmarket.k() != 2) throw ValidationError("price_lattice: implemented for k = 2");
    const auto& spec = lattice.spec;
    const double ratio = option.maturity / spec.dt;
    const long n_steps = std::lround(ratio);
    if (n_steps < 1 || std::abs(n_steps * spec.dt - option.maturity) > 1e-12)
        throw ValidationError("price_lattice: dt must divide the maturity");

    const KernelFFT fft(lattice.kernel, spec.n1, spec.n2);
    const NodeMap nodes(qmarket, spec);
    const double disc = std::exp(-qmarket.r * spec.dt);

    PriceResult out;
    out.method = "lattice";
    out.diagnostics["steps"] = static_cast<double>(n_steps);
    out.diagnostics["p0"] = lattice.p0;
    out.diagnostics["kernel_tail_mass"] = lattice.tail_mass;

    if (option.style == OptionSpec::Style::american) {
        Mat value(spec.n1, spec.n2), exercise(spec.n1, spec.n2);
        nodes.payoff_grid(qmarket, option, option.maturity, value);
        for (long step = n_steps - 1; step >= 0; --step) {
            value = disc * fft.gather(value);
            nodes.payoff_grid(qmarket, option, step * spec.dt, exercise);
            value = value.cwiseMax(exercise);
        }
        out.price = value(spec.n1 / 2, spec.n2 / 2);
    } else {
        Mat dist = Mat::Zero(spec.n1, spec.n2);
        dist(spec.n1 / 2, spec.n2 / 2) = 1.0;
        for (long step = 0; step < n_steps; ++step) dist = fft.scatter(dist);
        Mat terminal(spec.n1, spec.n2);
        nodes.payoff_grid(qmarket, option, option.maturity, terminal);
        std::vector<double> terms(static_cast<std::size_t>(spec.n1) * spec.n2);
        std::size_t idx = 0;
        double boundary = 0.0;
        for (int i = 0; i < spec.n1; ++i)
            for (int j = 0; j < spec.n2; ++j, ++idx) {
                terms[idx] = dist(i, j) * terminal(i, j);
                if (i == 0 || j == 0 || i == spec.n1 - 1 || j == spec.n2 - 1) boundary += dist(i, j);
            }
        out.price = std::exp(-qmarket.r * option.maturity) * pairwise_sum(terms);
        out.diagnostics["boundary_mass"] = boundary;
    }
    return out;
}

PriceResult price_lattice(const MarketModel& qmarket, const OptionSpec& option,
                          const LatticeSpec& spec) {
    return price_lattice(qmarket, option, build_lattice(qmarket, spec));
}

} // namespace vmg
