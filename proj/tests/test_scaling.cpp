#include "ginibre/errors.hpp"
#include "ginibre/scaling.hpp"
#include "ginibre/specfun.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>

using namespace ginibre;

TEST_CASE("profile validation") {
    CHECK_THROWS_AS(DimensionProfile(0, {0}), DomainError);
    CHECK_THROWS_AS(DimensionProfile(3, {}), DomainError);
    CHECK_THROWS_AS(DimensionProfile(3, {0, -1}), DomainError);
    const DimensionProfile p(2, {1, 2, 3});
    CHECK(p.depth() == 3);
    CHECK(p.dim(0) == 2);
    CHECK(p.dim(3) == 5);
}

TEST_CASE("dwr") {
    CHECK(dwr(DimensionProfile(2, {1, 2, 3})) == doctest::Approx(1.2833333333).epsilon(1e-10));
    CHECK(dwr(DimensionProfile(1, {0})) == 2.0);
    CHECK(dwr(DimensionProfile::square(10, 4)) == doctest::Approx(0.5).epsilon(1e-14));
    // strictly decreasing in each v_j
    const double base = dwr(DimensionProfile(5, {1, 2}));
    CHECK(dwr(DimensionProfile(5, {2, 2})) < base);
    CHECK(dwr(DimensionProfile(5, {1, 3})) < base);
}

TEST_CASE("gaussian centering and scale") {
    const auto p = DimensionProfile::square(1, 5);
    CHECK(std::abs(gaussian_center(p, 1) - 6 * digamma(1.0)) < 1e-12);
    CHECK(gaussian_center(p, 1) == doctest::Approx(-3.4633).epsilon(1e-4));
    CHECK(std::abs(gaussian_scale(p, 1) - std::numbers::pi) < 1e-9);
    const auto q = DimensionProfile::square(3, 4);
    CHECK(std::abs(gaussian_center(q, 3) - 5 * digamma(1.0)) < 1e-12);
    const double psi4 = 1 + 0.5 + 1.0 / 3 - std::numbers::egamma;
    CHECK(std::abs(gaussian_center(DimensionProfile(4, {0}), 1) - 2 * psi4) < 1e-6);
    CHECK_THROWS_AS(gaussian_center(q, 0), DomainError);
    CHECK_THROWS_AS(gaussian_scale(q, 4), DomainError);
}

TEST_CASE("solve_z0 closed forms") {
    for (int M : {1, 2, 4, 7}) {
        const double z = solve_z0(DimensionProfile::square(100, M));
        CHECK(std::abs(z - 100.0 / M) <= 1e-9 * (100.0 / M));
    }
    const DimensionProfile p(5, {3, 0, 11});
    const double z = solve_z0(p);
    double s = 0.0;
    for (double a : p.dims()) s += 1.0 / (a + z);
    CHECK(std::abs(s - 1.0 / z) <= 1e-12 / z);
    Z0Diagnostics diag;
    solve_z0(p, 1e-13, &diag);
    CHECK(diag.sign_changes == 1);
}

TEST_CASE("log_lambda") {
    const auto p = DimensionProfile(100, {0});
    CHECK(std::abs(log_lambda(p, 100.0) - std::log(400.0)) < 1e-12);
    const auto q = DimensionProfile::square(100, 4);
    CHECK(log_lambda(q, 25.0) == doctest::Approx(5 * std::log(125.0) - std::log(25.0)).epsilon(1e-12));
    CHECK(log_lambda(q, 25.0) == doctest::Approx(20.9226928616433).epsilon(1e-12));
    const double z0 = solve_z0(q);
    CHECK(std::abs(log_lambda(q, z0 + 1e-12) - log_lambda(q, z0)) <= 1e-10);
    CHECK(std::abs(log_lambda(q, z0 - 1e-12) - log_lambda(q, z0)) <= 1e-10);
}

TEST_CASE("rho modes") {
    const auto p = DimensionProfile(100, {0});
    const auto s = compute_scaling(p);
    // Johnstone soft-edge oracle for Wishart: sigma / mu on the log scale
    const double n = 100, m = 100;
    const double mu = std::pow(std::sqrt(n) + std::sqrt(m), 2);
    const double sigma = (std::sqrt(n) + std::sqrt(m)) * std::cbrt(1 / std::sqrt(n) + 1 / std::sqrt(m));
    CHECK(std::abs(s.rho_airy_corrected - mu / sigma) <= 1e-3 * s.rho_airy_corrected);
    CHECK(std::abs(s.rho_airy_corrected - std::pow(2.0, 2.0 / 3) * std::pow(100.0, 2.0 / 3)) <=
          1e-3 * s.rho_airy_corrected);
    CHECK(std::abs(s.rho_airy_corrected - std::pow(2.0, 2.0 / 3) * s.rho_airy_paper) <= 1e-15 * s.rho_airy_corrected);
    CHECK(s.rho(RhoMode::paper) == s.rho_airy_paper);
    CHECK(s.rho(RhoMode::exact) == s.rho_airy_exact);

    const auto s2 = compute_scaling(DimensionProfile::square(200, 2));
    CHECK(std::abs(s2.rho_airy_exact - s2.rho_airy_corrected) <= 5e-3 * s2.rho_airy_corrected);
}

TEST_CASE("third-derivative normalization") {
    for (const auto& p : {DimensionProfile::square(50, 1), DimensionProfile::square(80, 2), DimensionProfile(60, {3, 5})}) {
        const auto s = compute_scaling(p);
        const double f3 = phase_third_derivative(p, s.z0);
        CHECK(std::abs(f3 * std::pow(s.rho_airy_exact, 3) - 2.0) < 1e-12);
        CHECK(std::abs(f3 * std::pow(s.rho_airy_corrected, 3) - 2.0) <= 2.0 * 5.0 * s.delta);
    }
}

TEST_CASE("scaling invariants") {
    for (const auto& p : {DimensionProfile::square(1, 1), DimensionProfile::square(7, 3), DimensionProfile(300, {0}),
                          DimensionProfile(4, {10, 0, 2})}) {
        const auto s = compute_scaling(p);
        CHECK(s.residual_z0 <= 1e-12 / s.z0);
        CHECK(s.rho_airy_paper > 0);
        CHECK(s.rho_airy_corrected > 0);
        CHECK(s.rho_airy_exact > 0);
    }
}

TEST_CASE("regime classification") {
    CHECK(classify_regime(0.05) == Regime::low);
    CHECK(classify_regime(1.0) == Regime::moderate);
    CHECK(classify_regime(30.0) == Regime::high);
    CHECK(classify_regime(0.2) == Regime::low);
    CHECK(classify_regime(5.0) == Regime::high);
    CHECK_THROWS_AS(classify_regime(1.0, 2.0, 1.0), DomainError);
}

TEST_CASE("rho mode parsing") {
    CHECK(parse_rho_mode("paper") == RhoMode::paper);
    CHECK(parse_rho_mode("corrected") == RhoMode::corrected);
    CHECK(parse_rho_mode("exact") == RhoMode::exact);
    CHECK_THROWS_AS(parse_rho_mode("other"), DomainError);
}

TEST_CASE("EdgeScaling JSON round trip") {
    const auto s = compute_scaling(DimensionProfile(9, {2, 0, 5}));
    const auto j = to_json(s);
    const auto r = scaling_from_json(nlohmann::json::parse(j.dump()));
    CHECK(r.profile == s.profile);
    CHECK(r.delta == s.delta);
    CHECK(r.z0 == s.z0);
    CHECK(r.log_lambda == s.log_lambda);
    CHECK(r.rho_airy_paper == s.rho_airy_paper);
    CHECK(r.rho_airy_corrected == s.rho_airy_corrected);
    CHECK(r.rho_airy_exact == s.rho_airy_exact);
    CHECK(r.residual_z0 == s.residual_z0);
}
