#pragma once

namespace vmg {

// Modified Bessel function of the second kind, K_nu(x) for real order.
// K is even in nu, so the order is taken as |nu|. Throws DomainError for
// x <= 0 or non-finite input. Underflows gracefully to 0 for very large x.
double bessel_k(double nu, double x);

// e^x * K_nu(x). Stable for large x where K itself underflows.
double bessel_k_scaled(double nu, double x);

// K-hat variant r^nu * K_nu(r); finite limit 2^{nu-1} Gamma(nu) as r -> 0+.
// Requires nu > 0, r > 0.
double k_hat(double nu, double r);

// log Gamma(x) for x > 0.
double log_gamma_fn(double x);

} // namespace vmg
