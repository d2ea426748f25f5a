#pragma once

#include "vmg/density.hpp"
#include "vmg/transforms.hpp"
#include "vmg/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace vmg {

struct OptionSpec {
    enum class Kind { best_of_put, worst_of_put };
    enum class Style { european, american };
    Kind kind = Kind::best_of_put;
    Style style = Style::european;
    double strike = 100.0;
    double maturity = 0.25;
};

OptionSpec make_option(OptionSpec::Kind kind, OptionSpec::Style style, double strike,
                       double maturity);

// (K - max_i S_i)^+ for best-of, (K - min_i S_i)^+ for worst-of.
double payoff(const OptionSpec& spec, const Vec& s);

struct PriceResult {
    double price = 0.0;
    std::optional<double> std_error;
    std::string method;
    std::map<std::string, double> diagnostics;
};

// European price by integrating the payoff against the Fourier-inverted
// density of R(T). Throws DomainError when the raw grid mass deviates from 1
// by more than 1e-2.
PriceResult price_european_fourier(const MarketModel& qmarket, const OptionSpec& option,
                                   const GridRequest& request = {512, 512, 8.0});

// European price by terminal superposition sampling; deterministic given the
// seed and independent of any parallel scheduling.
PriceResult price_monte_carlo(const MarketModel& qmarket, const OptionSpec& option,
                              std::int64_t n_paths, std::uint64_t seed);

} // namespace vmg
