#include "ginibre/scaling.hpp"

#include "ginibre/errors.hpp"
#include "ginibre/format.hpp"
#include "ginibre/specfun.hpp"

#include <cmath>
#include <sstream>

namespace ginibre {

RhoMode parse_rho_mode(const std::string& s) {
    if (s == "paper") return RhoMode::paper;
    if (s == "corrected") return RhoMode::corrected;
    if (s == "exact") return RhoMode::exact;
    throw DomainError("unknown rho mode '" + s + "' (expected paper|corrected|exact)");
}

std::string to_string(RhoMode m) {
    switch (m) {
        case RhoMode::paper: return "paper";
        case RhoMode::corrected: return "corrected";
        case RhoMode::exact: return "exact";
    }
    return "?";
}

std::string to_string(Regime r) {
    switch (r) {
        case Regime::low: return "low";
        case Regime::moderate: return "moderate";
        case Regime::high: return "high";
    }
    return "?";
}

double EdgeScaling::rho(RhoMode mode) const {
    switch (mode) {
        case RhoMode::paper: return rho_airy_paper;
        case RhoMode::corrected: return rho_airy_corrected;
        case RhoMode::exact: return rho_airy_exact;
    }
    return rho_airy_corrected;
}

double dwr(const DimensionProfile& p) {
    p.validate();
    double s = 0.0;
    for (double a : p.dims()) s += 1.0 / a;
    return s;
}

namespace {

void check_k(const DimensionProfile& p, int k) {
    p.validate();
    if (k < 1 || k > p.N)
        throw DomainError("k = " + std::to_string(k) + " outside [1, N = " + std::to_string(p.N) + "]");
}

// z * (sum 1/(a_j + z) - 1/z); increasing in z, so the root is unique.
double scaled_residual(const std::vector<double>& a, double z) {
    double s = 0.0;
    for (double aj : a) s += z / (aj + z);
    return s - 1.0;
}

}  // namespace

double gaussian_center(const DimensionProfile& p, int k) {
    check_k(p, k);
    double s = 0.0;
    for (double a : p.dims()) s += digamma(a + 1.0 - k);
    return s;
}

double gaussian_scale(const DimensionProfile& p, int k) {
    check_k(p, k);
    double s = 0.0;
    for (double a : p.dims()) s += trigamma(a + 1.0 - k);
    return std::sqrt(s);
}

double solve_z0(const DimensionProfile& p, double tol, Z0Diagnostics* diag) {
    p.validate();
    if (!(tol > 0.0)) throw DomainError("solve_z0: tol must be positive");
    const auto a = p.dims();

    double amin = a[0], amax = a[0];
    for (double aj : a) {
        amin = std::min(amin, aj);
        amax = std::max(amax, aj);
    }
    Z0Diagnostics local;
    Z0Diagnostics& d = diag ? *diag : local;
    d = Z0Diagnostics{};
    const int grid = 241;
    const double lo_g = std::log(amin) - 12.0 * std::log(10.0);
    const double hi_g = std::log(amax) + 12.0 * std::log(10.0);
    for (int i = 0; i < grid; ++i) {
        double z = std::exp(lo_g + (hi_g - lo_g) * i / (grid - 1));
        d.grid.push_back(z);
        d.residual.push_back(scaled_residual(a, z));
        if (i > 0 && (d.residual[i] > 0) != (d.residual[i - 1] > 0)) ++d.sign_changes;
    }

    auto fail = [&](const std::string& why) {
        std::ostringstream os;
        os << "solve_z0 (" << p.describe() << "): " << why << "; scanned z, residual:";
        for (std::size_t i = 0; i < d.grid.size(); i += 20)
            os << " (" << format_real(d.grid[i]) << ", " << format_real(d.residual[i]) << ")";
        throw NumericalError(os.str());
    };

    double lo = 1.0, hi = 1.0;
    for (int it = 0; scaled_residual(a, lo) >= 0.0; ++it) {
        if (it > 2000) fail("lower bracket not found");
        lo *= 0.5;
    }
    for (int it = 0; scaled_residual(a, hi) <= 0.0; ++it) {
        if (it > 2000) fail("upper bracket not found");
        hi *= 2.0;
    }
    double z = 0.5 * (lo + hi);
    for (int it = 0; it < 400; ++it) {
        z = 0.5 * (lo + hi);
        double r = scaled_residual(a, z);
        if (std::fabs(r) <= 0.25 * tol || !(lo < z && z < hi)) break;
        (r < 0.0 ? lo : hi) = z;
    }
    if (std::fabs(scaled_residual(a, z)) > tol) fail("bisection stalled above tolerance");
    if (d.sign_changes != 1) fail("diagnostic scan found " + std::to_string(d.sign_changes) + " sign changes");
    return z;
}

double log_lambda(const DimensionProfile& p, double z0) {
    if (!(z0 > 0.0)) throw DomainError("log_lambda: z0 must be positive");
    double s = -std::log(z0);
    for (double a : p.dims()) s += std::log(a + z0);
    return s;
}

double phase_third_derivative(const DimensionProfile& p, double z0) {
    double s = -tetragamma(z0);
    for (double a : p.dims()) s += tetragamma(z0 + a);
    return s;
}

double rho_airy(const DimensionProfile& p, double z0, RhoMode mode) {
    if (!(z0 > 0.0)) throw DomainError("rho_airy: z0 must be positive");
    if (mode == RhoMode::exact) {
        double f3 = phase_third_derivative(p, z0);
        if (!(f3 > 0.0)) throw NumericalError("rho_airy: F'''(z0) <= 0, z0 inconsistent with profile");
        return std::cbrt(2.0 / f3);
    }
    double S = 0.0;
    for (double a : p.dims()) S += 1.0 / ((a + z0) * (a + z0));
    double D = 1.0 / (z0 * z0) - S;
    if (!(D > 0.0)) throw NumericalError("rho_airy: D = 1/z0^2 - S <= 0, z0 inconsistent with profile");
    double paper = std::cbrt(1.0 / (2.0 * D));
    return mode == RhoMode::paper ? paper : paper * std::cbrt(4.0);
}

Regime classify_regime(double delta, double low_threshold, double high_threshold) {
    if (!(0.0 < low_threshold && low_threshold < high_threshold))
        throw DomainError("classify_regime: need 0 < low_threshold < high_threshold");
    if (delta <= low_threshold) return Regime::low;
    if (delta >= high_threshold) return Regime::high;
    return Regime::moderate;
}

EdgeScaling compute_scaling(const DimensionProfile& p) {
    EdgeScaling s;
    s.profile = p;
    s.delta = dwr(p);
    s.z0 = solve_z0(p);
    s.log_lambda = log_lambda(p, s.z0);
    s.rho_airy_paper = rho_airy(p, s.z0, RhoMode::paper);
    s.rho_airy_corrected = s.rho_airy_paper * std::cbrt(4.0);
    s.rho_airy_exact = rho_airy(p, s.z0, RhoMode::exact);
    double r = -1.0 / s.z0;
    for (double a : p.dims()) r += 1.0 / (a + s.z0);
    s.residual_z0 = std::fabs(r);
    return s;
}

nlohmann::json to_json(const DimensionProfile& p) {
    return {{"N", p.N}, {"v", p.v}};
}

DimensionProfile profile_from_json(const nlohmann::json& j) {
    return DimensionProfile(j.at("N").get<int>(), j.at("v").get<std::vector<int>>());
}

nlohmann::json to_json(const EdgeScaling& s) {
    return {{"profile", to_json(s.profile)},
            {"delta", format_real(s.delta)},
            {"z0", format_real(s.z0)},
            {"log_lambda", format_real(s.log_lambda)},
            {"rho_airy_paper", format_real(s.rho_airy_paper)},
            {"rho_airy_corrected", format_real(s.rho_airy_corrected)},
            {"rho_airy_exact", format_real(s.rho_airy_exact)},
            {"residual_z0", format_real(s.residual_z0)},
            {"regime", to_string(classify_regime(s.delta))}};
}

EdgeScaling scaling_from_json(const nlohmann::json& j) {
    EdgeScaling s;
    s.profile = profile_from_json(j.at("profile"));
    auto r = [&](const char* k) { return parse_real(j.at(k).get<std::string>()); };
    s.delta = r("delta");
    s.z0 = r("z0");
    s.log_lambda = r("log_lambda");
    s.rho_airy_paper = r("rho_airy_paper");
    s.rho_airy_corrected = r("rho_airy_corrected");
    s.rho_airy_exact = r("rho_airy_exact");
    s.residual_z0 = r("residual_z0");
    return s;
}

}  // namespace ginibre
