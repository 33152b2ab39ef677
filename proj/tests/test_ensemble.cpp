#include "ginibre/ensemble.hpp"
#include "ginibre/scaling.hpp"
#include "ginibre/specfun.hpp"
#include "ginibre/stats.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <sstream>

using namespace ginibre;

TEST_CASE("sample_ginibre normalization and determinism") {
    double acc = 0.0;
    for (std::uint64_t s = 0; s < 10000; ++s) acc += sample_ginibre(2, 3, s).squaredNorm() / 6.0;
    CHECK(std::abs(acc / 10000 - 1.0) < 0.02);
    CHECK(sample_ginibre(4, 2, 99) == sample_ginibre(4, 2, 99));
    CHECK(sample_ginibre(4, 2, 99) != sample_ginibre(4, 2, 100));
}

TEST_CASE("scalar Ginibre modulus squared is Exp(1)") {
    std::vector<double> x;
    for (std::uint64_t s = 0; s < 100000; ++s) x.push_back(std::norm(sample_ginibre(1, 1, s)(0, 0)));
    const auto m = summarize(x);
    CHECK(std::abs(m.mean - 1.0) < 0.01);
    const auto ks = ks_statistic(x, [](double t) { return t <= 0 ? 0.0 : -std::expm1(-t); });
    CHECK(ks.d <= 0.01);
}

TEST_CASE("seed derivation") {
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
    CHECK(derive_seed(5, 7) == derive_seed(5, 7));
    Rng a(3), b(3);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
    Rng c(4);
    for (int i = 0; i < 1000; ++i) {
        const double u = c.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("simulate_product scalar cases") {
    const auto p = DimensionProfile(1, {0});
    const auto r = simulate_product(p, 12345);
    const double direct = std::log(std::norm(sample_ginibre(1, 1, derive_seed(12345, 1))(0, 0)));
    CHECK(std::abs(r.log_spectrum[0] - direct) < 1e-14);

    const auto q = DimensionProfile::square(1, 10);
    const auto d = run_monte_carlo(q, 5000, 31);
    std::vector<double> top;
    for (const auto& rec : d.records) top.push_back(rec.log_spectrum[0]);
    const auto m = summarize(top);
    CHECK(std::abs(m.mean - 10 * digamma(1.0)) <= 0.15);
    CHECK(std::abs(m.variance - 10 * trigamma(1.0)) <= 0.5);
    // three standard errors
    CHECK(std::abs(m.mean - 10 * digamma(1.0)) <= 3 * std::sqrt(10 * trigamma(1.0) / 5000));
}

TEST_CASE("log det of a 2x2 Ginibre matrix") {
    const auto p = DimensionProfile(2, {0});
    const auto d = run_monte_carlo(p, 10000, 8);
    std::vector<double> sums;
    for (const auto& r : d.records) sums.push_back(r.log_spectrum[0] + r.log_spectrum[1]);
    // independent scalar oracle: |det|^2 ~ Gamma(2) * Gamma(1)
    std::vector<double> oracle;
    Rng g(2718);
    for (int i = 0; i < 10000; ++i) {
        const double e1 = -std::log1p(-g.uniform()), e2 = -std::log1p(-g.uniform()), e3 = -std::log1p(-g.uniform());
        oracle.push_back(std::log(e1 + e2) + std::log(e3));
    }
    const double target = digamma(1.0) + digamma(2.0);
    CHECK(std::abs(summarize(sums).mean - target) < 0.05);
    CHECK(std::abs(summarize(oracle).mean - target) < 0.05);
}

TEST_CASE("run_monte_carlo determinism across workers") {
    const auto p = DimensionProfile(3, {1, 0});
    const auto a = run_monte_carlo(p, 40, 77, {}, 1);
    const auto b = run_monte_carlo(p, 40, 77, {}, 8);
    std::ostringstream sa, sb;
    write_dataset(sa, a);
    write_dataset(sb, b);
    CHECK(sa.str() == sb.str());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].sample_index == static_cast<int>(i));
        CHECK(a.records[i].derived_seed == derive_seed(77, i));
    }
    CHECK_THROWS_AS(run_monte_carlo(p, 0, 1), DomainError);
}

TEST_CASE("dataset round trip and re-run") {
    const auto p = DimensionProfile(2, {0, 3});
    SimulationConfig cfg;
    cfg.ctx.mantissa_bits = 113;
    const auto d = run_monte_carlo(p, 12, 5, cfg, 2);
    std::stringstream ss;
    write_dataset(ss, d);
    const auto r = read_dataset(ss);
    CHECK(r.profile == d.profile);
    CHECK(r.master_seed == d.master_seed);
    CHECK(r.precision_bits == 113);
    CHECK(r.mode == d.mode);
    CHECK(r.records == d.records);
    SimulationConfig cfg2;
    cfg2.ctx.mantissa_bits = r.precision_bits;
    cfg2.mode = r.mode;
    const auto again = run_monte_carlo(r.profile, static_cast<int>(r.records.size()), r.master_seed, cfg2);
    CHECK(again.records == d.records);
}

TEST_CASE("read_dataset rejects malformed input") {
    std::istringstream empty("");
    CHECK_THROWS_AS(read_dataset(empty), DomainError);
    const auto d = run_monte_carlo(DimensionProfile(2, {0}), 3, 1);
    std::ostringstream os;
    write_dataset(os, d);
    std::string text = os.str();
    std::istringstream truncated(text.substr(0, text.rfind('\n', text.size() - 2) + 1));
    CHECK_THROWS(read_dataset(truncated));
}

TEST_CASE("records are strictly descending and flagged reliable") {
    const auto d = run_monte_carlo(DimensionProfile::square(4, 3), 50, 3);
    for (const auto& r : d.records) {
        CHECK(r.reliable_count == 4);
        CHECK_FALSE(r.degenerate);
        for (std::size_t i = 1; i < r.log_spectrum.size(); ++i) CHECK(r.log_spectrum[i] < r.log_spectrum[i - 1]);
    }
}

TEST_CASE("suggested precision covers the predicted spread") {
    const auto p = DimensionProfile::square(4, 300);
    CHECK(suggested_precision_bits(p, 1) == 53);
    const int bits = suggested_precision_bits(p, 2);
    CHECK(bits > 53);
    CHECK(PrecisionContext{bits}.tier_bits() >= 240);
    SimulationConfig cfg;
    cfg.ctx.mantissa_bits = bits;
    const auto r = simulate_product(p, 1, cfg);
    CHECK(r.reliable_count >= 2);
}

TEST_CASE("rescaling") {
    const auto p = DimensionProfile::square(1, 5);
    const double c = gaussian_center(p, 1), s = gaussian_scale(p, 1);
    CHECK(rescale_high_dwr(c, 1, p) == 0.0);
    CHECK(std::abs(rescale_high_dwr(c + s, 1, p) - 1.0) < 1e-14);
    CHECK(std::abs(rescale_high_dwr(-3.46329398940919 + std::numbers::pi, 1, p) - 1.0) < 1e-9);
    CHECK_THROWS_AS(rescale_high_dwr(0.0, 2, p), DomainError);

    const auto sc = compute_scaling(DimensionProfile(100, {0}));
    CHECK(rescale_low_dwr(sc.log_lambda, sc) == 0.0);
    CHECK(std::abs(rescale_low_dwr(sc.log_lambda + 1 / sc.rho_airy_corrected, sc) - 1.0) < 1e-12);
    CHECK(std::abs(rescale_low_dwr(std::log(400.0), sc)) < 1e-9);
}
