#include "vmg/special_functions.hpp"

#include "oracles.hpp"
#include "vmg/types.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace vmg;

namespace {
#include "besselk_reference.inc"
}

TEST_CASE("bessel_k half-integer closed forms") {
    // K_{1/2}(x) = sqrt(pi/(2x)) e^{-x}
    CHECK(bessel_k(0.5, 1.0) == doctest::Approx(std::sqrt(std::numbers::pi / 2.0) * std::exp(-1.0))
                                    .epsilon(1e-14));
    CHECK(bessel_k(0.5, 4.0) ==
          doctest::Approx(std::sqrt(std::numbers::pi / 8.0) * std::exp(-4.0)).epsilon(1e-14));
    for (double x : {1e-3, 0.01, 0.1, 1.0, 10.0, 100.0, 300.0}) {
        const double exact = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x);
        CHECK(bessel_k(0.5, x) == doctest::Approx(exact).epsilon(1e-12));
    }
}

TEST_CASE("bessel_k matches the frozen high-precision table") {
    for (const auto& ref : kBesselRef) {
        const double got = bessel_k_scaled(ref.nu, ref.x);
        CHECK_MESSAGE(std::abs(got / ref.scaled - 1.0) < 1e-10,
                      "nu=", ref.nu, " x=", ref.x, " got=", got, " want=", ref.scaled);
    }
}

TEST_CASE("bessel_k against the integral-representation oracle") {
    CHECK(bessel_k(1.0, 1.0) ==
          doctest::Approx(oracle::bessel_k_quadrature(1.0, 1.0)).epsilon(1e-10));
    Rng rng(987654321u);
    for (int i = 0; i < 20; ++i) {
        const double nu = 10.0 * rng.uniform();
        const double x = 0.05 + 60.0 * rng.uniform();
        const double want = oracle::bessel_k_scaled_quadrature(nu, x);
        const double got = bessel_k_scaled(nu, x);
        CHECK_MESSAGE(std::abs(got / want - 1.0) < 1e-9, "nu=", nu, " x=", x);
    }
}

TEST_CASE("bessel_k recurrence residual") {
    for (double nu : {1.0, 1.5, 2.0, 3.0}) {
        for (int i = 0; i < 100; ++i) {
            const double x = 0.1 + (50.0 - 0.1) * i / 99.0;
            const double up = bessel_k(nu + 1.0, x);
            const double down = bessel_k(nu - 1.0, x);
            const double mid = bessel_k(nu, x);
            CHECK(std::abs(up - down - (2.0 * nu / x) * mid) <= 1e-9 * up);
        }
    }
}

TEST_CASE("bessel_k large-argument behavior and monotonicity") {
    for (double nu : {0.0, 1.0, 2.0, 3.0}) {
        const double ratio = bessel_k_scaled(nu, 200.0) / bessel_k_scaled(0.5, 200.0);
        CHECK(std::abs(ratio - 1.0) < 0.01);
    }
    for (double nu : {0.0, 0.7, 1.0, 2.3}) {
        double prev = bessel_k(nu, 0.05);
        for (int i = 1; i <= 60; ++i) {
            const double x = 0.05 + i * 0.5;
            const double cur = bessel_k(nu, x);
            CHECK(cur < prev);
            prev = cur;
        }
    }
}

TEST_CASE("bessel_k domain errors and underflow") {
    CHECK_THROWS_AS(bessel_k(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(bessel_k(1.0, -2.0), DomainError);
    CHECK_THROWS_AS(bessel_k(1.0, std::nan("")), DomainError);
    CHECK(bessel_k(1.0, 800.0) == 0.0); // graceful underflow
    CHECK(bessel_k_scaled(1.0, 800.0) > 0.0);
}

TEST_CASE("k_hat variant") {
    // r^nu K_nu(r) at r = 2, nu = 1/2
    CHECK(k_hat(0.5, 2.0) ==
          doctest::Approx(std::sqrt(2.0) * bessel_k(0.5, 2.0)).epsilon(1e-14));
    CHECK(k_hat(0.5, 1.0) == doctest::Approx(bessel_k(0.5, 1.0)).epsilon(1e-14));
    // small-argument limit 2^{nu-1} Gamma(nu)
    CHECK(std::abs(k_hat(1.0, 1e-8) - 1.0) < 1e-6);
    CHECK(k_hat(2.5, 1e-9) ==
          doctest::Approx(std::pow(2.0, 1.5) * std::tgamma(2.5)).epsilon(1e-6));
    CHECK_THROWS_AS(k_hat(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(k_hat(1.0, 0.0), DomainError);
}

TEST_CASE("log_gamma_fn") {
    CHECK(log_gamma_fn(1.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(log_gamma_fn(0.5) == doctest::Approx(0.5 * std::log(std::numbers::pi)).epsilon(1e-14));
    CHECK(log_gamma_fn(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-14));
    CHECK(log_gamma_fn(1e-3) == doctest::Approx(std::lgamma(1e-3)).epsilon(1e-12));
    CHECK_THROWS_AS(log_gamma_fn(0.0), DomainError);
    CHECK_THROWS_AS(log_gamma_fn(-1.0), DomainError);
}
