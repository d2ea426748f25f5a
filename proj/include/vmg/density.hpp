#pragma once

#include "vmg/transforms.hpp"
#include "vmg/types.hpp"

namespace vmg {

struct GridRequest {
    int n1 = 256;            // per-axis counts, powers of two
    int n2 = 256;
    double extent_sds = 8.0; // half-extent in analytic standard deviations
};

// Density of the log-return vector R(t) on a rectangular grid of cell
// centers, obtained by discrete Fourier inversion of the characteristic
// function exp(i t <theta, m-q+kappa> + t psi_Y(A' theta)).
struct DensityGrid {
    Vec origin;  // first cell center per axis
    Vec spacing;
    int n1 = 0, n2 = 0;
    Mat values;  // n1 x n2, nonnegative, normalized to unit mass
    double t = 0.0;
    double raw_mass = 0.0;      // Riemann mass before cleanup
    double clipped_mass = 0.0;  // magnitude of negative lobes removed
    double nyquist_modulus = 0.0;
    bool aliasing_warning = false;

    double cell_volume() const { return spacing[0] * spacing[1]; }
    double y1(int i) const { return origin[0] + i * spacing[0]; }
    double y2(int j) const { return origin[1] + j * spacing[1]; }
    // Riemann mean and covariance of the stored density
    Vec grid_mean() const;
    Mat grid_cov() const;
};

DensityGrid density_R_fft(const MarketModel& market, double t, const GridRequest& request = {});

// True iff the parameters have the layout M = (diag | dense last column) with
// n = d + 1 and all diagonal and last-column entries strictly positive.
bool is_structured(const VMGammaParams& p);

// Transition density of the subordinator T(t) at tau, for structured
// parameters; zero when any coordinate of tau is nonpositive.
double density_T_quadrature(const VMGammaParams& sparams, double t, const Vec& tau);

// Transition density of Y(t) at y for structured parameters with positive
// diagonal covariance; one outer integral with per-coordinate inner integrals.
double density_Y_quadrature(const VMGammaParams& sparams, double t, const Vec& y);

// Univariate variance-gamma density.
double vg1_density(double b, double mu, double sigma, double t, double y);

} // namespace vmg
