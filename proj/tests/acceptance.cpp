// Acceptance run: one PASS/FAIL line per criterion. Pass criterion names
// (A1 .. A10, A4b) as arguments to run a subset.

#include "ginibre/analysis.hpp"
#include "ginibre/descent.hpp"
#include "ginibre/ensemble.hpp"
#include "ginibre/fredholm.hpp"
#include "ginibre/kernel.hpp"
#include "ginibre/quadrature.hpp"
#include "ginibre/scaling.hpp"
#include "ginibre/specfun.hpp"
#include "ginibre/stats.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace ginibre;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    std::string id;
    double budget_s;
    std::function<Outcome()> run;
};

int workers() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// Shared by A4 and A4b so both use the identical dataset.
const SampleDataset& a4_dataset() {
    static const SampleDataset d = run_monte_carlo(DimensionProfile(300, {0}), 2000, 4004, {}, workers());
    return d;
}

Outcome a1() {
    std::ostringstream os;
    bool ok = true;
    for (int M : {1, 4}) {
        const double z = solve_z0(DimensionProfile::square(100, M));
        const double e = std::abs(z - 100.0 / M) / (100.0 / M);
        ok &= e <= 1e-9;
        os << "z0(M=" << M << ") rel err " << fmt("%.1e", e) << "; ";
    }
    const auto s = compute_scaling(DimensionProfile(100, {0}));
    const double el = std::abs(s.log_lambda - std::log(400.0));
    const double target = std::pow(2.0, 2.0 / 3.0) * std::pow(100.0, 2.0 / 3.0);
    const double er = std::abs(s.rho_airy_corrected - target) / target;
    ok &= el <= 1e-9 && er <= 1e-3;
    os << "log lambda err " << fmt("%.1e", el) << "; rho rel err " << fmt("%.1e", er);
    return {ok, os.str()};
}

Outcome a2() {
    const auto p = DimensionProfile::square(4, 2400);
    const auto d = run_monte_carlo(p, 2000, 2002, {}, workers());
    const auto r = analyze_dataset(d, Reference::gauss, 1);
    const double sd = r.moments.stddev;
    const bool ok = r.excluded == 0 && std::abs(r.moments.mean) <= 0.10 && std::abs(sd - 1) <= 0.05 && r.ks.d <= 0.05;
    return {ok, "mean " + fmt("%.4f", r.moments.mean) + ", std " + fmt("%.4f", sd) + ", KS " + fmt("%.4f", r.ks.d) +
                    ", excluded " + std::to_string(r.excluded)};
}

Outcome a3() {
    const auto p = DimensionProfile::square(4, 300);
    SimulationConfig cfg;
    cfg.ctx.mantissa_bits = std::max(240, suggested_precision_bits(p, 2));
    const auto d = run_monte_carlo(p, 800, 3003, cfg, workers());
    const auto r = analyze_dataset(d, Reference::gauss, 2);
    const double sd = r.moments.stddev;
    const bool ok = r.excluded == 0 && std::abs(r.moments.mean) <= 0.2 && std::abs(sd - 1) <= 0.12;
    return {ok, "bits " + std::to_string(cfg.ctx.tier_bits()) + ", mean " + fmt("%.4f", r.moments.mean) + ", std " +
                    fmt("%.4f", sd) + ", excluded " + std::to_string(r.excluded)};
}

Outcome a4() {
    const auto r = analyze_dataset(a4_dataset(), Reference::tw2, 1, RhoMode::corrected);
    return {r.ks.d <= 0.06, "corrected rho: KS " + fmt("%.4f", r.ks.d) + ", mean " + fmt("%.4f", r.moments.mean) +
                                ", var " + fmt("%.4f", r.moments.variance)};
}

Outcome a4b() {
    const auto r = analyze_dataset(a4_dataset(), Reference::tw2, 1, RhoMode::paper);
    return {r.ks.d >= 0.2, "paper rho: KS " + fmt("%.4f", r.ks.d)};
}

Outcome a5() {
    const auto p1 = DimensionProfile(1, {0});
    double sup = 0.0;
    for (int i = 0; i <= 140; ++i) {
        const double x = -4.0 + 7.0 * i / 140.0;
        sup = std::max(sup, std::abs(density_finite(p1, x).value - std::exp(x - std::exp(x))));
    }
    const auto p3 = DimensionProfile(1, {0, 0, 0});
    const auto F = TabulatedCdf::from_density(
        [&](double x) { return density_finite(p3, x, KernelMode::residue).value; }, -30.0, 6.0, 84, 6);
    const auto d = run_monte_carlo(p3, 100000, 5005, {}, workers());
    std::vector<double> xs;
    xs.reserve(d.records.size());
    for (const auto& r : d.records) xs.push_back(r.log_spectrum[0]);
    const auto ks = ks_statistic(xs, [&](double x) { return F(x); });
    const bool ok = sup <= 1e-6 && ks.d <= 0.02;
    return {ok, "N=1,M=1 sup err " + fmt("%.2e", sup) + "; N=1,M=3 mass " + fmt("%.8f", F.total_mass()) + ", KS " +
                    fmt("%.4f", ks.d)};
}

double integrate_density(const DimensionProfile& p, double lo, double hi, double width) {
    const auto& g = gauss_legendre(10);
    const int panels = static_cast<int>(std::ceil((hi - lo) / width));
    const double h = (hi - lo) / panels;
    std::vector<double> part(static_cast<std::size_t>(panels), 0.0);
    std::vector<std::jthread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < workers(); ++w)
        pool.emplace_back([&] {
            for (int i; (i = next++) < panels;) {
                double acc = 0.0;
                for (std::size_t q = 0; q < g.x.size(); ++q)
                    acc += g.w[q] * density_finite(p, lo + h * (i + 0.5 * (1 + g.x[q])), KernelMode::residue).value;
                part[static_cast<std::size_t>(i)] = 0.5 * h * acc;
            }
        });
    pool.clear();
    double total = 0.0;
    for (double v : part) total += v;
    return total;
}

Outcome a6() {
    std::ostringstream os;
    bool ok = true;
    for (const auto& p : {DimensionProfile(4, {0, 1}), DimensionProfile(3, {0, 0, 2})}) {
        const double mass = integrate_density(p, -40.0, 15.0, 0.5);
        ok &= std::abs(mass - p.N) <= 1e-3;
        os << p.describe() << ": " << fmt("%.8f", mass) << "; ";
    }
    return {ok, os.str()};
}

Outcome a7() {
    const auto p = DimensionProfile(60, {0});
    const auto s = compute_scaling(p);
    const double rho = s.rho(RhoMode::corrected);
    std::ostringstream os;
    bool ok = true;
    for (double xi : {-1.0, 0.0, 1.0}) {
        const double v = density_finite(p, xi / rho + s.log_lambda).value / rho;
        const double e = std::abs(v - airy_kernel(xi, xi));
        ok &= e <= 0.02;
        os << "xi=" << xi << " diff " << fmt("%.4f", e) << "; ";
    }
    return {ok, os.str()};
}

Outcome a8() {
    const auto p = DimensionProfile::square(2, 60);
    const double c = gaussian_center(p, 1), r = gaussian_scale(p, 1);
    std::ostringstream os;
    bool ok = true;
    for (double xi : {-1.0, 0.0, 1.0}) {
        const double v = r * density_finite(p, c + r * xi).value;
        const double e = std::abs(v - std_normal_pdf(xi));
        ok &= e <= 0.05;
        os << "xi=" << xi << " diff " << fmt("%.4f", e) << "; ";
    }
    return {ok, os.str()};
}

Outcome a9() {
    double worst = 0.0;
    for (int i = 0; i <= 80; ++i) {
        const double s = -6.0 + 0.1 * i;
        worst = std::max(worst, std::abs(tw2_determinant(NystromGrid::build(s, 40)) -
                                         tw2_determinant(NystromGrid::build(s, 80))));
    }
    const auto st = tw2_stats();
    const bool ok = worst <= 1e-8 && std::abs(st.mean + 1.771) <= 0.01 && std::abs(st.variance - 0.813) <= 0.01;
    return {ok, "doubling " + fmt("%.1e", worst) + ", mean " + fmt("%.7f", st.mean) + ", variance " +
                    fmt("%.7f", st.variance)};
}

Outcome a10() {
    std::ostringstream os;
    bool ok = true;
    for (int k : {1, 2, 3}) {
        const auto r = verify_lemma_descent(HighDwrPhase(DimensionProfile::square(6, 40), k), 400);
        ok &= r.pass && r.min_margin > 0;
        os << "k=" << k << " margin " << fmt("%.4f", r.min_margin) << "; ";
    }
    const LowDwrPhase lp(DimensionProfile::square(50, 2));
    const auto v = verify_lemma_vertical(lp, 1.2 * lp.q0, 200);
    ok &= v.pass;
    os << "vertical " << (v.pass ? "ok" : "violated") << "; ";

    // every profile exercised by the unit and acceptance suites
    const std::vector<std::pair<DimensionProfile, int>> high = {
        {DimensionProfile::square(6, 40), 1}, {DimensionProfile::square(6, 40), 2}, {DimensionProfile::square(6, 40), 3},
        {DimensionProfile::square(4, 2400), 1}, {DimensionProfile::square(4, 300), 2}, {DimensionProfile::square(2, 60), 1}};
    const std::vector<DimensionProfile> low = {DimensionProfile(300, {0}), DimensionProfile(60, {0}),
                                               DimensionProfile::square(50, 2), DimensionProfile(100, {0}),
                                               DimensionProfile::square(200, 2)};
    double worst = 0.0;
    for (const auto& [p, k] : high) worst = std::max(worst, saddle_report_high(p, k).max_residual());
    for (const auto& p : low) worst = std::max(worst, saddle_report_low(p).max_residual());
    ok &= worst <= 1e-5;
    os << "max saddle residual " << fmt("%.2e", worst);
    return {ok, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all = {
        {"A1", 1, a1},    {"A2", 120, a2},  {"A3", 1200, a3}, {"A4", 120, a4}, {"A4b", 120, a4b}, {"A5", 60, a5},
        {"A6", 300, a6},  {"A7", 300, a7},  {"A8", 300, a8},  {"A9", 30, a9},  {"A10", 60, a10},
    };
    std::set<std::string> want(argv + 1, argv + argc);
    int failed = 0;
    for (const auto& c : all) {
        if (!want.empty() && !want.count(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        while (o.detail.ends_with("; ")) o.detail.resize(o.detail.size() - 2);
        const bool in_time = dt <= c.budget_s;
        const bool pass = o.pass && in_time;
        failed += !pass;
        std::printf("%-4s %s  %s; %.2f s (budget %.0f s%s)\n", c.id.c_str(), pass ? "PASS" : "FAIL", o.detail.c_str(),
                    dt, c.budget_s, in_time ? "" : ", exceeded");
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
