#pragma once

#include "vmg/types.hpp"

#include <array>
#include <cmath>
#include <functional>

namespace vmg {

struct QuadResult {
    double value = 0.0;
    double error = 0.0; // error estimate
    long evaluations = 0;
    bool converged = false;
};

namespace detail {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1] (positive half; symmetric).
inline constexpr std::array<double, 8> kGkNodes = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodW = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr std::array<double, 4> kGaussW = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
inline void gk15(F&& f, double a, double b, double& value, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kGkNodes[i]);
        fv[14 - i] = f(c + h * kGkNodes[i]);
    }
    fv[7] = f(c);
    double kron = kKronrodW[7] * fv[7];
    double gauss = kGaussW[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        kron += kKronrodW[i] * (fv[i] + fv[14 - i]);
        if (i % 2 == 1) gauss += kGaussW[i / 2] * (fv[i] + fv[14 - i]);
    }
    value = kron * h;
    const double diff = std::abs(kron - gauss) * std::abs(h);
    // standard QUADPACK-style sharpened error estimate
    err = diff == 0.0 ? 0.0 : diff * std::min(1.0, std::pow(200.0 * diff / std::abs(value + 1e-300), 1.5));
    if (err == 0.0) err = diff;
}

} // namespace detail

// Adaptive Gauss-Kronrod integration of f over [a, b].
template <class F>
QuadResult integrate(F&& f, double a, double b, double abs_tol = 1e-10, double rel_tol = 1e-10,
                     int max_depth = 48) {
    QuadResult out;
    struct Panel {
        double a, b, value, error;
        int depth;
    };
    double v0, e0;
    detail::gk15(f, a, b, v0, e0);
    out.evaluations += 15;
    std::vector<Panel> active{{a, b, v0, e0, 0}};
    double total = v0, total_err = e0;
    while (!active.empty()) {
        if (total_err <= abs_tol || total_err <= rel_tol * std::abs(total)) break;
        // split the worst panel
        std::size_t worst = 0;
        for (std::size_t i = 1; i < active.size(); ++i)
            if (active[i].error > active[worst].error) worst = i;
        Panel p = active[worst];
        active.erase(active.begin() + static_cast<long>(worst));
        if (p.depth >= max_depth) {
            // cannot refine further; keep its contribution
            active.push_back(p);
            break;
        }
        const double mid = 0.5 * (p.a + p.b);
        double vl, el, vr, er;
        detail::gk15(f, p.a, mid, vl, el);
        detail::gk15(f, mid, p.b, vr, er);
        out.evaluations += 30;
        total += vl + vr - p.value;
        total_err += el + er - p.error;
        active.push_back({p.a, mid, vl, el, p.depth + 1});
        active.push_back({mid, p.b, vr, er, p.depth + 1});
        if (active.size() > 4000) break; // safety valve
    }
    out.value = total;
    out.error = total_err;
    out.converged = total_err <= std::max(abs_tol, rel_tol * std::abs(total));
    return out;
}

} // namespace vmg
