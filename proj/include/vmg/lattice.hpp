#pragma once

#include "vmg/levy.hpp"
#include "vmg/pricing.hpp"

namespace vmg {

struct LatticeSpec {
    int n1 = 127, n2 = 127; // odd node counts so a center node exists
    double step1 = 4.92e-3; // state-space spacing of the first coordinate
    double step2 = 8.37e-3;
    double dt = 1.25e-3;    // time increment in years
};

// One-step transition kernel over relative node offsets, derived from the
// Levy measure: off-center cells carry dt times the Levy mass of their cell
// (area integrals of the full-support component plus line integrals of the
// axis components), the center carries the complement, and a first-moment
// patch on the center's neighbors matches the exact one-step mean.
struct Lattice {
    LatticeSpec spec;
    Mat kernel;      // n1 x n2, offset (i - h1, j - h2); sums to one
    double p0 = 0.0; // central mass
    Vec mean_patch;  // applied correction masses per axis
    double tail_mass = 0.0; // kernel mass beyond half the grid radius
};

Lattice build_lattice(const MarketModel& qmarket, const LatticeSpec& spec);

// Backward-induction step: out(x) = sum_off kernel(off) v(clamp(x + off)).
// Transitions leaving the grid are lumped onto the nearest boundary node.
Mat apply_kernel_gather(const Mat& kernel, const Mat& v);

// Adjoint forward step on a probability array (mass-preserving scatter).
Mat apply_kernel_scatter(const Mat& kernel, const Mat& dist);

// American: backward induction over N = T/dt steps on the fixed node grid.
// European: the exact adjoint evaluation, propagating the node distribution
// forward once and integrating the terminal payoff (identical to backward
// induction without early exercise, up to floating point).
PriceResult price_lattice(const MarketModel& qmarket, const OptionSpec& option,
                          const Lattice& lattice);
PriceResult price_lattice(const MarketModel& qmarket, const OptionSpec& option,
                          const LatticeSpec& spec = {});

} // namespace vmg
