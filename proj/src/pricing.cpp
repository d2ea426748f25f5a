#include "vmg/pricing.hpp"

#include "vmg/sampling.hpp"

#include <cmath>
#include <sstream>

namespace vmg {

OptionSpec make_option(OptionSpec::Kind kind, OptionSpec::Style style, double strike,
                       double maturity) {
    if (!(strike > 0.0)) throw ValidationError("make_option: strike must be positive");
    if (!(maturity > 0.0)) throw ValidationError("make_option: maturity must be positive");
    return OptionSpec{kind, style, strike, maturity};
}

double payoff(const OptionSpec& spec, const Vec& s) {
    const double pivot =
        spec.kind == OptionSpec::Kind::best_of_put ? s.maxCoeff() : s.minCoeff();
    return std::max(spec.strike - pivot, 0.0);
}

PriceResult price_european_fourier(const MarketModel& qmarket, const OptionSpec& option,
                                   const GridRequest& request) {
    if (option.style != OptionSpec::Style::european)
        throw ValidationError("price_european_fourier: European style only");
    const DensityGrid grid = density_R_fft(qmarket, option.maturity, request);
    if (std::abs(grid.raw_mass - 1.0) > 1e-2) {
        std::ostringstream os;
        os << "price_european_fourier: density grid mass " << grid.raw_mass
           << " deviates from 1 beyond 1e-2";
        throw DomainError(os.str());
    }
    std::vector<double> terms(static_cast<std::size_t>(grid.n1) * grid.n2);
    Vec s(2);
    std::size_t idx = 0;
    for (int i = 0; i < grid.n1; ++i)
        for (int j = 0; j < grid.n2; ++j, ++idx) {
            s[0] = qmarket.s0[0] * std::exp(grid.y1(i));
            s[1] = qmarket.s0[1] * std::exp(grid.y2(j));
            terms[idx] = payoff(option, s) * grid.values(i, j);
        }
    PriceResult out;
    out.method = "fourier";
    out.price = std::exp(-qmarket.r * option.maturity) * pairwise_sum(terms) * grid.cell_volume();
    out.diagnostics["grid_mass"] = grid.raw_mass;
    out.diagnostics["clipped_mass"] = grid.clipped_mass;
    out.diagnostics["nyquist_modulus"] = grid.nyquist_modulus;
    return out;
}

PriceResult price_monte_carlo(const MarketModel& qmarket, const OptionSpec& option,
                              std::int64_t n_paths, std::uint64_t seed) {
    if (option.style != OptionSpec::Style::european)
        throw ValidationError("price_monte_carlo: European style only");
    if (n_paths < 1) throw ValidationError("price_monte_carlo: need at least one path");
    const double t = option.maturity;
    double sum = 0.0, comp = 0.0, sumsq = 0.0;
    Vec s(qmarket.k());
    for (std::int64_t path = 0; path < n_paths; ++path) {
        Rng rng = Rng::for_stream(seed, static_cast<std::uint64_t>(path));
        const Vec r = sample_r(qmarket, t, rng);
        s = qmarket.s0.array() * r.array().exp();
        const double v = payoff(option, s);
        // Kahan-compensated accumulation keeps the mean independent of batching
        const double y = v - comp;
        const double tt = sum + y;
        comp = (tt - sum) - y;
        sum = tt;
        sumsq += v * v;
    }
    const double n = static_cast<double>(n_paths);
    const double mean = sum / n;
    const double var = std::max(0.0, sumsq / n - mean * mean);
    const double disc = std::exp(-qmarket.r * t);
    PriceResult out;
    out.method = "monte_carlo";
    out.price = disc * mean;
    out.std_error = disc * std::sqrt(var / n);
    out.diagnostics["paths"] = n;
    return out;
}

} // namespace vmg
