#include "ginibre/descent.hpp"

#include "ginibre/errors.hpp"
#include "ginibre/format.hpp"
#include "ginibre/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace ginibre {

namespace {

constexpr double pi = std::numbers::pi;
const Complex I{0.0, 1.0};

bool is_gamma_pole(Complex z) {
    if (z.imag() != 0.0 || z.real() > 0.0) return false;
    return z.real() == std::nearbyint(z.real());
}

// Five-point central difference.
template <class F>
double central_difference(F&& f, double x, double h) {
    return (8.0 * (f(x + h) - f(x - h)) - (f(x + 2.0 * h) - f(x - 2.0 * h))) / (12.0 * h);
}

}  // namespace

// ---------------------------------------------------------------- high DWR

HighDwrPhase::HighDwrPhase(const DimensionProfile& p, int k_) : profile(p), k(k_) {
    p.validate();
    if (k < 1 || k > p.N) throw DomainError("HighDwrPhase: k must satisfy 1 <= k <= N, got " + std::to_string(k));
    center = gaussian_center(p, k);
    rho = gaussian_scale(p, k);
}

Complex F_high(Complex t, const HighDwrPhase& ph) {
    Complex acc = ph.center * t;
    for (double a : ph.profile.dims()) {
        const Complex z = t + a;
        if (is_gamma_pole(z))
            throw DomainError("F_high: t + N + v_j = " + format_real(z.real()) + " is a gamma pole");
        acc -= log_gamma(z) - log_gamma(a);
    }
    return acc;
}

double F_high_d1(double t, const HighDwrPhase& ph) {
    double acc = ph.center;
    for (double a : ph.profile.dims()) acc -= digamma(t + a);
    return acc;
}

double F_high_d2(double t, const HighDwrPhase& ph) {
    double acc = 0.0;
    for (double a : ph.profile.dims()) acc -= trigamma(t + a);
    return acc;
}

double F_high_d3(double t, const HighDwrPhase& ph) {
    double acc = 0.0;
    for (double a : ph.profile.dims()) acc -= tetragamma(t + a);
    return acc;
}

HighDwrContours build_highdwr_contours(const HighDwrPhase& ph, double global_extent) {
    const int N = ph.profile.N;
    const double k = ph.k;
    const double rho = ph.rho;
    HighDwrContours out;
    out.L_re = 1.0 - k + 2.0 / rho;
    out.local_half_height = std::pow(static_cast<double>(N), 0.25) * std::pow(rho, -0.75);
    if (global_extent <= out.local_half_height) global_extent = std::max(10.0 * out.local_half_height, 50.0);
    const double h = out.local_half_height;
    const double x = out.L_re;
    out.L_local = make_contour({Segment::line({x, -h}, {x, h})}, false);
    out.L_global_lower = make_contour({Segment::line({x, -global_extent}, {x, -h})}, false);
    out.L_global_upper = make_contour({Segment::line({x, h}, {x, global_extent})}, false);

    const Complex c0{1.0 - k, 0.0};
    out.sigma0 = make_contour({Segment::arc(c0, c0 + 1.0 / rho, 2.0 * pi)}, true);

    const double a = 0.5 - k;
    const double left = -N + 0.5;
    const Complex qa = 0.25 * I;
    out.sigma_minus = make_contour({Segment::line(a, a - 0.5 + qa), Segment::line(a - 0.5 + qa, left + qa),
                                    Segment::line(left + qa, left - qa), Segment::line(left - qa, a - 0.5 - qa),
                                    Segment::line(a - 0.5 - qa, a)},
                                   true);
    if (ph.k > 1) {
        const double b = 1.5 - k;
        out.sigma_plus = make_contour({Segment::line(b, b + 0.5 - qa), Segment::line(b + 0.5 - qa, 1.0 - qa),
                                       Segment::line(1.0 - qa, 1.0 + qa), Segment::line(1.0 + qa, b + 0.5 + qa),
                                       Segment::line(b + 0.5 + qa, b)},
                                      true);
    }
    return out;
}

DescentReport verify_lemma_descent(const HighDwrPhase& ph, int samples_per_segment) {
    if (samples_per_segment < 1) throw DomainError("verify_lemma_descent: samples_per_segment must be >= 1");
    const auto cs = build_highdwr_contours(ph);
    const Complex t0{1.0 - ph.k, 0.0};
    const Complex F0 = F_high(t0, ph);
    const double rho2 = ph.rho * ph.rho;

    DescentReport rep;
    rep.profile = ph.profile;
    rep.k = ph.k;
    rep.samples_per_segment = samples_per_segment;
    rep.delta = dwr(ph.profile);
    rep.rho = ph.rho;
    rep.min_margin = std::numeric_limits<double>::infinity();

    auto scan = [&](const std::string& name, const ContourSpec& c) {
        for (std::size_t s = 0; s < c.segments.size(); ++s) {
            SegmentMargin sm;
            sm.contour = name;
            sm.segment = static_cast<int>(s) + 1;
            sm.min_margin = std::numeric_limits<double>::infinity();
            for (int i = 0; i <= samples_per_segment; ++i) {
                const Complex t = c.segments[s].point(static_cast<double>(i) / samples_per_segment);
                const double dist = std::abs(t - t0);
                if (dist == 0.0) continue;
                ++sm.samples;
                const double m = -(F_high(t, ph) - F0).real() / (rho2 * dist);
                if (m < sm.min_margin) {
                    sm.min_margin = m;
                    sm.argmin = t;
                }
            }
            rep.min_margin = std::min(rep.min_margin, sm.min_margin);
            rep.segments.push_back(sm);
        }
    };
    scan("sigma_minus", cs.sigma_minus);
    if (!cs.sigma_plus.empty()) scan("sigma_plus", cs.sigma_plus);
    rep.pass = rep.min_margin > 0.0;
    return rep;
}

// ----------------------------------------------------------------- low DWR

LowDwrPhase::LowDwrPhase(const EdgeScaling& s, RhoMode m, std::optional<double> expected_v_shift)
    : profile(s.profile), scaling(s), mode(m), a(s.profile.dims()) {
    rho = s.rho(m);
    if (!(rho > 0.0)) throw DomainError("LowDwrPhase: rho must be positive");
    c = std::pow(rho, 1.5);
    double sum_ln = 0.0;
    for (double x : a) sum_ln += std::log(x);
    v_shift = sum_ln - std::log(c) - s.log_lambda;
    const double check = sum_ln - 1.5 * std::log(rho) - s.log_lambda;
    const double scale = std::max(1.0, std::abs(v_shift));
    if (std::abs(check - v_shift) > 1e-12 * scale)
        throw NumericalError("LowDwrPhase: v_shift recomputation disagrees: " + format_real(v_shift) + " vs " +
                             format_real(check));
    if (expected_v_shift && std::abs(*expected_v_shift - v_shift) > 1e-12 * scale)
        throw ConfigurationError("LowDwrPhase: supplied v_shift " + format_real(*expected_v_shift) +
                                 " does not match recomputed " + format_real(v_shift));
    q0 = s.z0 / c;
}

LowDwrPhase::LowDwrPhase(const DimensionProfile& p, RhoMode m) : LowDwrPhase(compute_scaling(p), m) {}

namespace {

void check_low_domain(Complex s, const LowDwrPhase& ph, const char* who) {
    if (s.imag() != 0.0) return;
    if (s.real() <= 0.0)
        throw DomainError(std::string(who) + ": s = " + format_real(s.real()) + " lies on the branch cut of log s");
    for (double a : ph.a)
        if (1.0 + ph.c * s.real() / a <= 0.0)
            throw DomainError(std::string(who) + ": s = " + format_real(s.real()) + " lies on a log branch cut");
}

}  // namespace

Complex f_low(Complex s, const LowDwrPhase& ph) {
    check_low_domain(s, ph, "f_low");
    Complex acc = 0.0;
    for (double a : ph.a) {
        const Complex w = 1.0 + ph.c * s / a;
        acc += (a / ph.c) * w * std::log(w);
    }
    acc -= s * (std::log(s) - ph.v_shift);
    acc -= static_cast<double>(ph.profile.depth()) * s;
    return acc;
}

Complex f_low_d1(Complex s, const LowDwrPhase& ph) {
    check_low_domain(s, ph, "f_low_d1");
    Complex acc = ph.v_shift - std::log(s);
    for (double a : ph.a) acc += std::log(1.0 + ph.c * s / a);
    return acc;
}

Complex f_low_d2(Complex s, const LowDwrPhase& ph) {
    check_low_domain(s, ph, "f_low_d2");
    Complex acc = -1.0 / s;
    for (double a : ph.a) acc += ph.c / (a + ph.c * s);
    return acc;
}

Complex f_low_d3(Complex s, const LowDwrPhase& ph) {
    check_low_domain(s, ph, "f_low_d3");
    Complex acc = 1.0 / (s * s);
    for (double a : ph.a) {
        const Complex d = a + ph.c * s;
        acc -= ph.c * ph.c / (d * d);
    }
    return acc;
}

double f_low_d2_gamma_only(double s, const LowDwrPhase& ph) {
    double acc = 0.0;
    for (double a : ph.a) acc += ph.c / (a + ph.c * s);
    return acc;
}

double f_low_d3_gamma_only(double s, const LowDwrPhase& ph) {
    double acc = 0.0;
    for (double a : ph.a) {
        const double d = a + ph.c * s;
        acc -= ph.c * ph.c / (d * d);
    }
    return acc;
}

double dref_dy(double x, double y, const LowDwrPhase& ph) { return -f_low_d1(Complex{x, y}, ph).imag(); }

namespace {

std::string derivative_table(double x, const std::vector<double>& ys, const LowDwrPhase& ph) {
    std::ostringstream os;
    os << " [y, dRe f/dy at x = " << format_real(x) << ":";
    for (double y : ys) os << " (" << format_real(y) << ", " << format_real(dref_dy(x, y, ph)) << ")";
    os << "]";
    return os.str();
}

// Smallest y >= y_lo where dRe f(x+iy)/dy changes sign from + to -.
std::optional<double> descent_height(double x, double y_lo, const LowDwrPhase& ph, std::vector<double>* grid) {
    const double y_hi = 1e4 * std::max({1.0, std::abs(x), ph.q0});
    const int n = 400;
    const double r = std::pow(y_hi / y_lo, 1.0 / n);
    double ya = y_lo, ga = dref_dy(x, ya, ph);
    if (grid) grid->push_back(ya);
    if (ga <= 0.0) return std::nullopt;
    for (int i = 1; i <= n; ++i) {
        const double yb = y_lo * std::pow(r, i);
        const double gb = dref_dy(x, yb, ph);
        if (grid && i % 40 == 0) grid->push_back(yb);
        if (gb < 0.0) {
            double lo = ya, hi = yb;
            for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                (dref_dy(x, mid, ph) > 0.0 ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
        ya = yb;
        ga = gb;
    }
    return std::nullopt;
}

// Re f increases leftward along the horizontal run at height y, x in [x4, x2].
bool leftward_increase(double x4, double x2, double y, const LowDwrPhase& ph) {
    const int n = 200;
    for (int i = 0; i <= n; ++i) {
        const double x = x4 + (x2 - x4) * i / n;
        if (!(f_low_d1(Complex{x, y}, ph).real() < 0.0)) return false;
    }
    return true;
}

}  // namespace

LowDwrContours build_lowdwr_contours(const LowDwrPhase& ph, const LowDwrOptions& opt) {
    LowDwrContours out;
    const double inv_c = 1.0 / ph.c;
    const double e1 = std::cbrt(inv_c);
    const double e2 = std::pow(inv_c, 0.3);
    out.eps1 = e1;
    out.eps2 = e2;
    const double q0 = ph.q0;
    const Complex w1 = std::polar(1.0, pi / 3.0);
    const Complex w2 = std::polar(1.0, 2.0 * pi / 3.0);

    // s-side wedge at q0 + eps1, traversed upward.
    const Complex sr{q0 + e1, 0.0};
    out.C_local_minus = make_contour({Segment::line(sr + e2 * std::conj(w1), sr)}, false);
    out.C_local_plus = make_contour({Segment::line(sr, sr + e2 * w1)}, false);
    const double ext = opt.global_extent > 0.0 ? opt.global_extent : std::max(50.0, 20.0 * std::abs(q0));
    const Complex top = sr + e2 * w1, bot = sr + e2 * std::conj(w1);
    out.C_global_upper = make_contour({Segment::line(top, top + I * ext)}, false);
    out.C_global_lower = make_contour({Segment::line(bot - I * ext, bot)}, false);

    // t-side wedge at q0 - eps1.
    const Complex tl{q0 - e1, 0.0};
    const Complex up = tl + e2 * w2, dn = tl + e2 * std::conj(w2);
    out.x1 = q0 - e1 - 0.5 * e2;
    out.x4 = -ph.profile.N * inv_c + 0.5 * inv_c;
    const double y_arm = e2 * std::sqrt(3.0) / 2.0;

    std::vector<double> grid;
    const auto y1 = descent_height(out.x1, y_arm, ph, &grid);
    if (!y1)
        throw NumericalError("build_lowdwr_contours: no root of dRe f/dy above the local arm at x1" +
                             derivative_table(out.x1, grid, ph));
    out.y1 = *y1;

    auto try_x2 = [&](double x2) -> std::optional<double> {
        if (!(x2 > out.x4 && x2 < out.x1 && x2 < 0.0)) return std::nullopt;
        const auto y2 = descent_height(x2, 1e-6 * std::max(1.0, std::abs(x2)), ph, nullptr);
        if (!y2 || !leftward_increase(out.x4, x2, *y2, ph)) return std::nullopt;
        return y2;
    };

    std::optional<double> y2 = try_x2(-opt.C);
    if (y2) {
        out.x2 = -opt.C;
        out.x2_source = "fixed";
    } else {
        if (!opt.allow_fallback) {
            grid.clear();
            for (int i = 1; i <= 8; ++i) grid.push_back(0.25 * i);
            throw NumericalError("build_lowdwr_contours: x2 = -C = " + format_real(-opt.C) +
                                 " violates the sign conditions (admissible x2 lie in (" + format_real(out.x4) +
                                 ", " + format_real(std::min(out.x1, 0.0)) + "))" +
                                 derivative_table(-opt.C, grid, ph));
        }
        const double right = std::min(out.x1, 0.0);
        for (int i = 1; i < 40 && !y2; ++i) {
            const double x2 = out.x4 + (right - out.x4) * i / 40.0;
            y2 = try_x2(x2);
            if (y2) out.x2 = x2;
        }
        if (!y2)
            throw NumericalError("build_lowdwr_contours: no x2 in (" + format_real(out.x4) + ", " +
                                 format_real(right) + ") satisfies the sign conditions");
        out.x2_source = "fallback";
    }
    out.y2 = *y2;

    const Complex p1{out.x1, out.y1}, p2{out.x2, out.y2}, p3{out.x4, out.y2};
    out.Sigma_local_plus = make_contour({Segment::line(tl, up)}, false);
    out.Sigma1_plus = make_contour({Segment::line(up, p1)}, false);
    out.Sigma2_plus = make_contour({Segment::line(p1, p2)}, false);
    out.Sigma3_plus = make_contour({Segment::line(p2, p3)}, false);
    out.Sigma4 = make_contour({Segment::line(p3, std::conj(p3))}, false);
    out.Sigma3_minus = make_contour({Segment::line(std::conj(p3), std::conj(p2))}, false);
    out.Sigma2_minus = make_contour({Segment::line(std::conj(p2), std::conj(p1))}, false);
    out.Sigma1_minus = make_contour({Segment::line(std::conj(p1), dn)}, false);
    out.Sigma_local_minus = make_contour({Segment::line(dn, tl)}, false);
    return out;
}

ContourSpec LowDwrContours::sigma() const {
    std::vector<Segment> segs;
    for (const ContourSpec* c : {&Sigma_local_plus, &Sigma1_plus, &Sigma2_plus, &Sigma3_plus, &Sigma4, &Sigma3_minus,
                                 &Sigma2_minus, &Sigma1_minus, &Sigma_local_minus})
        segs.insert(segs.end(), c->segments.begin(), c->segments.end());
    return make_contour(std::move(segs), true);
}

ContourSpec LowDwrContours::s_contour() const {
    std::vector<Segment> segs;
    for (const ContourSpec* c : {&C_global_lower, &C_local_minus, &C_local_plus, &C_global_upper})
        segs.insert(segs.end(), c->segments.begin(), c->segments.end());
    return make_contour(std::move(segs), false);
}

VerticalReport verify_lemma_vertical(const LowDwrPhase& ph, double x0, int grid, double y_max) {
    if (grid < 1) throw DomainError("verify_lemma_vertical: grid must be >= 1");
    VerticalReport rep;
    rep.x0 = x0;
    rep.grid = grid;
    rep.y_max = y_max > 0.0 ? y_max : 20.0 * std::max(1.0, std::abs(x0));
    auto cd = [&](double y) {
        return central_difference([&](double u) { return f_low(Complex{x0, u}, ph).real(); }, y,
                                  1e-3 * std::max(1.0, std::abs(y)));
    };
    if (!(x0 > ph.q0)) {
        rep.pass = false;
        rep.violations = 1;
        return rep;
    }
    rep.derivative_at_zero = cd(0.0);
    for (int i = -grid; i <= grid; ++i) {
        if (i == 0) continue;
        const double y = rep.y_max * i / grid;
        const double d = cd(y);
        rep.y.push_back(y);
        rep.derivative.push_back(d);
        if ((y > 0.0 && !(d < 0.0)) || (y < 0.0 && !(d > 0.0))) ++rep.violations;
    }
    const std::size_t n = rep.derivative.size();
    for (std::size_t i = 0; i < n / 2; ++i)
        rep.antisymmetry_error = std::max(rep.antisymmetry_error, std::abs(rep.derivative[i] + rep.derivative[n - 1 - i]));
    rep.pass = rep.violations == 0;
    return rep;
}

// ----------------------------------------------------------------- reports

double SaddleReport::max_residual() const {
    double m = 0.0;
    for (const auto& r : residuals) m = std::max(m, std::abs(r.value));
    return m;
}

SaddleReport saddle_report_high(const DimensionProfile& p, int k) {
    const HighDwrPhase ph(p, k);
    const double t0 = 1.0 - k;
    const double h = 1e-4;
    const double fp = F_high(Complex{t0 + h, 0.0}, ph).real();
    const double fm = F_high(Complex{t0 - h, 0.0}, ph).real();
    const double f0 = F_high(Complex{t0, 0.0}, ph).real();
    const double rho2 = ph.rho * ph.rho;

    SaddleReport r;
    r.side = "high";
    r.profile = p;
    r.k = k;
    r.delta = dwr(p);
    r.residuals = {
        {"F1_central", (fp - fm) / (2.0 * h)},
        {"F2_plus_rho2_central_rel", ((fp - 2.0 * f0 + fm) / (h * h) + rho2) / rho2},
        {"F1_analytic", F_high_d1(t0, ph)},
        {"F2_plus_rho2_analytic_rel", (F_high_d2(t0, ph) + rho2) / rho2},
    };
    r.asymptotic = {{"F3_over_rho3", std::abs(F_high_d3(t0, ph)) / (rho2 * ph.rho)}};
    return r;
}

SaddleReport saddle_report_low(const DimensionProfile& p, RhoMode mode) {
    const LowDwrPhase ph(p, mode);
    const double q = ph.q0;
    SaddleReport r;
    r.side = "low";
    r.profile = p;
    r.rho_mode = to_string(mode);
    r.delta = dwr(p);
    const double d1c = central_difference([&](double u) { return f_low(Complex{u, 0.0}, ph).real(); }, q, 1e-3 * q);
    r.residuals = {
        {"f1_central", d1c},
        {"f1_analytic", f_low_d1(Complex{q, 0.0}, ph).real()},
        {"f2_analytic_rel", f_low_d2(Complex{q, 0.0}, ph).real() * q},
    };
    const double f3 = phase_third_derivative(p, ph.scaling.z0);
    const double rc = ph.scaling.rho(RhoMode::corrected);
    r.asymptotic = {
        {"f3_minus_2", f_low_d3(Complex{q, 0.0}, ph).real() - 2.0},
        {"F3_rho3_over_2_minus_1", std::abs(f3 * rc * rc * rc / 2.0 - 1.0)},
    };
    return r;
}

namespace {

nlohmann::json complex_json(Complex z) { return {format_real(z.real()), format_real(z.imag())}; }

nlohmann::json residual_list(const std::vector<SaddleResidual>& v) {
    auto a = nlohmann::json::array();
    for (const auto& r : v) a.push_back({{"name", r.name}, {"value", format_real(r.value)}});
    return a;
}

std::vector<SaddleResidual> residuals_from(const nlohmann::json& a) {
    std::vector<SaddleResidual> out;
    for (const auto& e : a) out.push_back({e.at("name").get<std::string>(), parse_real(e.at("value").get<std::string>())});
    return out;
}

}  // namespace

nlohmann::json to_json(const DescentReport& r) {
    nlohmann::json j;
    j["type"] = "lemma_descent";
    j["profile"] = to_json(r.profile);
    j["k"] = r.k;
    j["delta"] = format_real(r.delta);
    j["rho"] = format_real(r.rho);
    j["samples_per_segment"] = r.samples_per_segment;
    auto segs = nlohmann::json::array();
    for (const auto& s : r.segments)
        segs.push_back({{"contour", s.contour},
                        {"segment", s.segment},
                        {"samples", s.samples},
                        {"min_margin", format_real(s.min_margin)},
                        {"argmin", complex_json(s.argmin)}});
    j["segments"] = segs;
    j["min_margin"] = format_real(r.min_margin);
    j["pass"] = r.pass;
    return j;
}

nlohmann::json to_json(const VerticalReport& r) {
    nlohmann::json j;
    j["type"] = "lemma_vertical";
    j["x0"] = format_real(r.x0);
    j["grid"] = r.grid;
    j["y_max"] = format_real(r.y_max);
    j["derivative_at_zero"] = format_real(r.derivative_at_zero);
    j["antisymmetry_error"] = format_real(r.antisymmetry_error);
    j["violations"] = r.violations;
    j["y"] = format_reals(r.y);
    j["derivative"] = format_reals(r.derivative);
    j["pass"] = r.pass;
    return j;
}

nlohmann::json to_json(const SaddleReport& r) {
    nlohmann::json j;
    j["type"] = "saddle_report";
    j["side"] = r.side;
    j["profile"] = to_json(r.profile);
    j["k"] = r.k;
    j["rho_mode"] = r.rho_mode;
    j["delta"] = format_real(r.delta);
    j["residuals"] = residual_list(r.residuals);
    j["asymptotic"] = residual_list(r.asymptotic);
    j["max_residual"] = format_real(r.max_residual());
    return j;
}

SaddleReport saddle_report_from_json(const nlohmann::json& j) {
    if (j.value("type", "") != "saddle_report") throw DomainError("saddle_report_from_json: wrong report type");
    SaddleReport r;
    r.side = j.at("side").get<std::string>();
    r.profile = profile_from_json(j.at("profile"));
    r.k = j.at("k").get<int>();
    r.rho_mode = j.at("rho_mode").get<std::string>();
    r.delta = parse_real(j.at("delta").get<std::string>());
    r.residuals = residuals_from(j.at("residuals"));
    r.asymptotic = residuals_from(j.at("asymptotic"));
    return r;
}

nlohmann::json to_json(const LowDwrContours& c) {
    return {{"eps1", format_real(c.eps1)}, {"eps2", format_real(c.eps2)}, {"x1", format_real(c.x1)},
            {"y1", format_real(c.y1)},     {"x2", format_real(c.x2)},     {"y2", format_real(c.y2)},
            {"x4", format_real(c.x4)},     {"x2_source", c.x2_source}};
}

}  // namespace ginibre
