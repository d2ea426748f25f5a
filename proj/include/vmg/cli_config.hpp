#pragma once

#include "vmg/density.hpp"
#include "vmg/lattice.hpp"
#include "vmg/transforms.hpp"

#include <optional>
#include <string>

namespace vmg {

// JSON model description consumed by the command-line tool. Carries either an
// explicit loading matrix A or a scalar rho expanded to the symmetric root of
// (1 rho; rho 1) -- never both.
struct ModelConfig {
    int schema = 1;
    VMGammaParams params;
    Mat A;
    std::optional<double> rho;
    Vec m, q, s0;
    double r = 0.0;
    LatticeSpec lattice;
    GridRequest grid;
};

ModelConfig parse_config(const std::string& text);

MarketModel to_market(const ModelConfig& config);

} // namespace vmg
