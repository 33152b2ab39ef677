#pragma once

#include "ginibre/contour.hpp"
#include "ginibre/profile.hpp"
#include "ginibre/scaling.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ginibre {

// Phase of the k-th largest point at high DWR.
struct HighDwrPhase {
    DimensionProfile profile;
    int k = 1;
    double center = 0.0;  // sum psi(N + v_j + 1 - k)
    double rho = 0.0;     // gaussian_scale(profile, k)

    HighDwrPhase(const DimensionProfile& p, int k);
};

// F(t; k) = center * t - sum log(Gamma(t + N + v_j) / Gamma(N + v_j)).
Complex F_high(Complex t, const HighDwrPhase& ph);
double F_high_d1(double t, const HighDwrPhase& ph);
double F_high_d2(double t, const HighDwrPhase& ph);
double F_high_d3(double t, const HighDwrPhase& ph);

// Phase of the largest point at low DWR, in the variable s = z / rho^{3/2}.
struct LowDwrPhase {
    DimensionProfile profile;
    EdgeScaling scaling;
    RhoMode mode = RhoMode::corrected;
    double rho = 0.0;
    double c = 0.0;        // rho^{3/2}
    double v_shift = 0.0;  // sum ln(N + v_j) - (3/2) ln rho - log lambda
    double q0 = 0.0;       // z0 / c
    std::vector<double> a;

    explicit LowDwrPhase(const EdgeScaling& s, RhoMode mode = RhoMode::corrected,
                         std::optional<double> expected_v_shift = std::nullopt);
    explicit LowDwrPhase(const DimensionProfile& p, RhoMode mode = RhoMode::corrected);
};

// f(s) = sum (a_j/c)(1 + cs/a_j) log(1 + cs/a_j) - s (log s - v) - M s
Complex f_low(Complex s, const LowDwrPhase& ph);
Complex f_low_d1(Complex s, const LowDwrPhase& ph);
Complex f_low_d2(Complex s, const LowDwrPhase& ph);
Complex f_low_d3(Complex s, const LowDwrPhase& ph);
// Second and third derivatives keeping only the gamma sums (no log s terms).
double f_low_d2_gamma_only(double s, const LowDwrPhase& ph);
double f_low_d3_gamma_only(double s, const LowDwrPhase& ph);

struct HighDwrContours {
    ContourSpec L_local;         // |Im| <= N^{1/4} rho^{-3/4}
    ContourSpec L_global_lower;  // truncated at -global_extent
    ContourSpec L_global_upper;
    ContourSpec sigma0;       // circle around 1-k, radius 1/rho
    ContourSpec sigma_minus;  // around (-N + 1/2, 1/2 - k)
    ContourSpec sigma_plus;   // around (3/2 - k, 1); empty when k = 1
    double L_re = 0.0;
    double local_half_height = 0.0;
};

HighDwrContours build_highdwr_contours(const HighDwrPhase& ph, double global_extent = 0.0);

struct SegmentMargin {
    std::string contour;
    int segment = 0;
    int samples = 0;
    double min_margin = 0.0;
    Complex argmin{};
};

struct DescentReport {
    DimensionProfile profile;
    int k = 1;
    int samples_per_segment = 0;
    double delta = 0.0;
    double rho = 0.0;
    std::vector<SegmentMargin> segments;
    double min_margin = 0.0;
    bool pass = false;
};

// m(t) = -Re(F(t) - F(1-k)) / (rho^2 |t - 1 + k|) at samples u = i/S,
// i = 0..S, on every segment of Sigma_- and Sigma_+.
DescentReport verify_lemma_descent(const HighDwrPhase& ph, int samples_per_segment);

struct LowDwrOptions {
    double C = 8.0;
    // If -C does not meet the sign condition, scan x2 over (X4, x1).
    bool allow_fallback = true;
    double global_extent = 0.0;  // height of the truncated s-rays (0: auto)
};

struct LowDwrContours {
    ContourSpec C_local_plus, C_local_minus, C_global_upper, C_global_lower;
    ContourSpec Sigma_local_plus, Sigma_local_minus;
    ContourSpec Sigma1_plus, Sigma1_minus, Sigma2_plus, Sigma2_minus, Sigma3_plus, Sigma3_minus, Sigma4;
    double eps1 = 0, eps2 = 0;
    double x1 = 0, y1 = 0, x2 = 0, y2 = 0, x4 = 0;
    std::string x2_source;  // "fixed" or "fallback"

    // The closed t-contour in counterclockwise order.
    ContourSpec sigma() const;
    // The s-contour, bottom to top.
    ContourSpec s_contour() const;
};

LowDwrContours build_lowdwr_contours(const LowDwrPhase& ph, const LowDwrOptions& opt = {});

// d Re f(x + iy)/dy = -Im f'(x + iy)
double dref_dy(double x, double y, const LowDwrPhase& ph);

struct VerticalReport {
    double x0 = 0.0;
    int grid = 0;
    double y_max = 0.0;
    std::vector<double> y, derivative;  // central differences
    double derivative_at_zero = 0.0;
    double antisymmetry_error = 0.0;
    int violations = 0;
    bool pass = false;
};

VerticalReport verify_lemma_vertical(const LowDwrPhase& ph, double x0, int grid, double y_max = 0.0);

struct SaddleResidual {
    std::string name;
    double value = 0.0;
};

struct SaddleReport {
    std::string side;  // "high" or "low"
    DimensionProfile profile;
    int k = 0;
    std::string rho_mode;
    double delta = 0.0;
    std::vector<SaddleResidual> residuals;   // identities, should vanish
    std::vector<SaddleResidual> asymptotic;  // finite-size corrections
    double max_residual() const;
};

SaddleReport saddle_report_high(const DimensionProfile& p, int k);
SaddleReport saddle_report_low(const DimensionProfile& p, RhoMode mode = RhoMode::corrected);

nlohmann::json to_json(const DescentReport& r);
nlohmann::json to_json(const VerticalReport& r);
nlohmann::json to_json(const SaddleReport& r);
SaddleReport saddle_report_from_json(const nlohmann::json& j);
nlohmann::json to_json(const LowDwrContours& c);

}  // namespace ginibre
