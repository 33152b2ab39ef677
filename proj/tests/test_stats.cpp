#include "ginibre/analysis.hpp"
#include "ginibre/ensemble.hpp"
#include "ginibre/errors.hpp"
#include "ginibre/specfun.hpp"
#include "ginibre/stats.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>

using namespace ginibre;

namespace {

// sup over x of |F_n(x) - F(x)| evaluated directly at every sample point and
// its left limit, counting with an O(n) scan per point.
double ks_quadratic(const std::vector<double>& xs, const std::function<double(double)>& F) {
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (double x : xs) {
        double le = 0, lt = 0;
        for (double y : xs) {
            le += y <= x;
            lt += y < x;
        }
        d = std::max({d, std::abs(le / n - F(x)), std::abs(lt / n - F(x))});
    }
    return d;
}

}  // namespace

TEST_CASE("KS statistic against the quadratic oracle") {
    Rng g(123);
    std::vector<double> u;
    for (int i = 0; i < 500; ++i) u.push_back(g.uniform());
    auto F = [](double x) { return std::clamp(x, 0.0, 1.0); };
    const auto r = ks_statistic(u, F);
    CHECK(std::abs(r.d - ks_quadratic(u, F)) <= 1e-12);
    CHECK(r.d == std::max(r.d_plus, r.d_minus));
    CHECK(r.n == 500);
    // skewed reference
    auto G = [](double x) { return std::clamp(x * x, 0.0, 1.0); };
    CHECK(std::abs(ks_statistic(u, G).d - ks_quadratic(u, G)) <= 1e-12);
    CHECK_THROWS_AS(ks_statistic({}, F), DomainError);
}

TEST_CASE("KS of a tiny sample") {
    const auto r = ks_statistic({0.5}, [](double x) { return x; });
    CHECK(r.d == doctest::Approx(0.5));
}

TEST_CASE("moment summary") {
    const auto m = summarize({1.0, 2.0, 3.0, 4.0});
    CHECK(m.mean == 2.5);
    CHECK(m.variance == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
    CHECK(m.min == 1.0);
    CHECK(m.max == 4.0);
    CHECK_THROWS_AS(summarize({}), DomainError);
    // large offset does not destroy the variance
    const auto big = summarize({1e9 + 1, 1e9 + 2, 1e9 + 3});
    CHECK(big.variance == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("tabulated CDF from a density") {
    const auto T = TabulatedCdf::from_density(std_normal_pdf, -9, 9, 60);
    CHECK(std::abs(T.total_mass() - 1.0) < 1e-12);
    double worst = 0.0;
    for (double x = -9; x <= 9; x += 0.013) worst = std::max(worst, std::abs(T(x) - std_normal_cdf(x)));
    // cubic Hermite error is O(h^4)
    CHECK(worst < 5e-5);
    const auto fine = TabulatedCdf::from_density(std_normal_pdf, -9, 9, 300);
    worst = 0.0;
    for (double x = -9; x <= 9; x += 0.013) worst = std::max(worst, std::abs(fine(x) - std_normal_cdf(x)));
    CHECK(worst < 1e-7);
    CHECK(T(-20) == 0.0);
    CHECK(T(20) == T.total_mass());
    CHECK_THROWS_AS(TabulatedCdf({0, 0}, {0, 1}, {1, 1}), DomainError);
    CHECK_THROWS_AS(TabulatedCdf({0, 1}, {0}, {1, 1}), ShapeError);
}

TEST_CASE("analysis pipeline") {
    const auto d = run_monte_carlo(DimensionProfile::square(1, 20), 400, 9);
    const auto r = analyze_dataset(d, Reference::gauss);
    CHECK(r.used == 400);
    CHECK(r.excluded == 0);
    CHECK(std::abs(r.moments.mean) < 0.3);
    CHECK(r.ks.d < 0.15);
    CHECK_THROWS_AS(analyze_dataset(d, Reference::tw2, 2), DomainError);
    CHECK_THROWS_AS(parse_reference("gumbel"), DomainError);
    SampleDataset empty = d;
    empty.records.clear();
    CHECK_THROWS_AS(analyze_dataset(empty, Reference::gauss), DomainError);
    CHECK(tw2_reference_cdf(-20) == 0.0);
    CHECK(tw2_reference_cdf(20) == 1.0);
}
