#include "ginibre/kernel.hpp"

#include "ginibre/errors.hpp"
#include "ginibre/format.hpp"
#include "ginibre/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace ginibre {

namespace {

constexpr double pi = std::numbers::pi;
const Complex two_pi_i(0.0, 2.0 * pi);

// Root of f on [lo, hi] given a sign change; geometric bisection for
// brackets spanning many decades.
template <class F>
double bisect(F f, double lo, double hi, bool geometric) {
    double flo = f(lo);
    for (int it = 0; it < 300; ++it) {
        const double mid = geometric ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        const double fm = f(mid);
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

struct KernelPhase {
    int N;
    std::vector<double> a;

    explicit KernelPhase(const DimensionProfile& p) : N(p.N), a(p.dims()) {}

    // e^{-ys} prod Gamma(s + a_j) / Gamma(s)
    Complex logA(Complex s, double y) const {
        Complex r = -y * s - log_gamma(s);
        for (double aj : a) r += log_gamma(s + aj);
        return r;
    }
    // e^{xt} Gamma(t) / prod Gamma(t + a_j)
    Complex logB(Complex t, double x) const {
        Complex r = x * t + log_gamma(t);
        for (double aj : a) r -= log_gamma(t + aj);
        return r;
    }
    // h = d/du [sum log Gamma(u + a_j) - log Gamma(u)] and its derivatives
    double h(double u) const {
        double r = -digamma(u);
        for (double aj : a) r += digamma(u + aj);
        return r;
    }
    double hp(double u) const {
        double r = -trigamma(u);
        for (double aj : a) r += trigamma(u + aj);
        return r;
    }
    double hpp(double u) const {
        double r = -tetragamma(u);
        for (double aj : a) r += tetragamma(u + aj);
        return r;
    }
};

struct Geometry {
    char option = 'R';  // 'R': s-line right of the t-loop, 'L': left of it
    double cs = 0, ct = 0, H = 0, aL = 0, T = 0, w = 0;
};

ContourSpec rectangle(double ct, double H, double aL) {
    const Complex c0(ct, -H), c1(ct, H), c2(aL, H), c3(aL, -H);
    return make_contour({Segment::line(c0, c1), Segment::line(c1, c2), Segment::line(c2, c3), Segment::line(c3, c0)},
                        true);
}

double loop_peak(const KernelPhase& ph, double x, const ContourSpec& loop) {
    double m = -std::numeric_limits<double>::infinity();
    for (Complex t : loop.sample(24)) m = std::max(m, ph.logB(t, x).real());
    return m;
}

// Contour placement: the t-loop crosses the real axis where the phase of
// e^{xt}Gamma(t)/prod Gamma(t+a_j) is smallest, and the s-line where that
// of its s counterpart is; both are read off h(u) = x.
Geometry choose_geometry(const KernelPhase& ph, double x, double y, const QuadConfig& cfg) {
    const double zs = bisect([&](double u) { return ph.hp(u); }, 1e-8, 1e8, true);
    const double w = std::cbrt(2.0 / ph.hpp(zs));
    const double hmin = ph.h(zs);
    double c1 = zs, c2 = zs;
    if (x > hmin + 1e-12) c1 = bisect([&](double u) { return ph.h(u) - x; }, 1e-300, zs, true);
    if (y > hmin + 1e-12) c2 = bisect([&](double u) { return ph.h(u) - y; }, zs, 1e300, true);

    Geometry g;
    g.w = w;
    g.aL = -ph.N + 0.5;
    std::vector<double> Hs;
    for (double k = -3.0; k < 6.0; k += 0.5) Hs.push_back(w * std::pow(2.0, k));
    auto best_loop = [&](double ct, double& H) {
        double best = std::numeric_limits<double>::infinity();
        for (double h : Hs) {
            const double c = loop_peak(ph, x, rectangle(ct, h, g.aL));
            if (c < best) {
                best = c;
                H = h;
            }
        }
        return best;
    };
    const double ctR = std::max(std::min(c1, zs - 0.5 * w), std::min(0.5 * zs, 0.5));
    const double csR = std::max(c2, zs + 0.5 * w);
    double HR = w, HL = w;
    const double costR = best_loop(ctR, HR) + ph.logA(csR, y).real();
    const double csL = -ph.N + 0.25;
    const double ctL = std::max(std::min(zs, 0.5), 0.25);
    const double costL = best_loop(ctL, HL) + ph.logA(csL, y).real();
    if (costR <= costL) {
        g.option = 'R';
        g.cs = csR;
        g.ct = ctR;
        g.H = HR;
    } else {
        g.option = 'L';
        g.cs = csL;
        g.ct = ctL;
        g.H = HL;
    }
    const double drop = -std::log(cfg.tail_threshold);
    const double ref = ph.logA(g.cs, y).real();
    double T = std::max(w, 1.0);
    for (int it = 0; ph.logA(Complex(g.cs, T), y).real() > ref - drop; ++it) {
        if (it > 200) throw NumericalError("kernel_finite: s-line tail did not decay");
        T *= 1.5;
    }
    g.T = T;
    return g;
}

struct Nodes {
    std::vector<Complex> z, f;  // f already includes weight and scaled integrand
};

Nodes make_nodes(const ContourSpec& c, const std::vector<Panel>& panels, int order,
                 const std::function<Complex(Complex)>& f) {
    Nodes n;
    for (const auto& q : panel_nodes(c, panels, order)) {
        n.z.push_back(q.z);
        n.f.push_back(q.w * f(q.z));
    }
    return n;
}

Complex double_sum(const Nodes& s, const Nodes& t) {
    Complex acc = 0.0;
    for (std::size_t i = 0; i < s.z.size(); ++i) {
        Complex row = 0.0;
        for (std::size_t j = 0; j < t.z.size(); ++j) row += t.f[j] / (s.z[i] - t.z[j]);
        acc += s.f[i] * row;
    }
    return acc;
}

[[noreturn]] void refinement_failure(const char* which, const RefinementResult& r, const DimensionProfile& p,
                                     double x, double y) {
    std::ostringstream os;
    os << "kernel_finite (" << p.describe() << ", x=" << format_real(x) << ", y=" << format_real(y) << "): " << which
       << " refinement did not converge: " << r.diagnostic << " (" << r.panels.size() << " panels)";
    throw NumericalError(os.str());
}

double scaled_limit(const ContourSpec& other, Complex z) {
    return std::max(1e-3, 0.75 * other.distance_to(z));
}

}  // namespace

KernelMode parse_kernel_mode(const std::string& s) {
    if (s == "quadrature") return KernelMode::quadrature;
    if (s == "residue") return KernelMode::residue;
    throw DomainError("unknown kernel mode '" + s + "' (expected quadrature|residue)");
}

std::string to_string(KernelMode m) {
    return m == KernelMode::quadrature ? "quadrature" : "residue";
}

void QuadConfig::validate() const {
    if (nodes_per_panel < 4 || nodes_per_panel > 200) throw DomainError("QuadConfig: nodes_per_panel in [4, 200]");
    if (!(abs_tol > 0)) throw DomainError("QuadConfig: abs_tol must be positive");
    if (!(hankel_offset > 0 && hankel_offset < 1)) throw DomainError("QuadConfig: hankel_offset must lie in (0, 1)");
    if (!(hankel_cap > 0 && hankel_cap < 1)) throw DomainError("QuadConfig: hankel_cap must lie in (0, 1)");
    if (!(tail_threshold > 0 && tail_threshold < 1)) throw DomainError("QuadConfig: tail_threshold in (0, 1)");
    if (!(panel_tol > 0)) throw DomainError("QuadConfig: panel_tol must be positive");
}

ContourSpec build_hankel(const QuadConfig& cfg, double pole_edge, const std::function<double(Complex)>& log_modulus) {
    cfg.validate();
    const double d = cfg.hankel_offset;
    const double apex = pole_edge + cfg.hankel_cap;
    const double c = apex - d;
    auto lm = log_modulus ? log_modulus : [pole_edge](Complex s) { return log_gamma(s - pole_edge).real(); };
    double peak = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 32; ++i) {
        const double th = -0.5 * pi + pi * i / 32.0;
        peak = std::max(peak, lm(Complex(c, 0) + d * std::exp(Complex(0, th))));
    }
    const double drop = -std::log(cfg.tail_threshold);
    double T = std::max(4.0, std::fabs(c) + 4.0);
    for (double r = -c; r <= T; r += 0.5) peak = std::max(peak, lm(Complex(-r, d)));
    for (int it = 0;; ++it) {
        if (it > 400) throw NumericalError("build_hankel: integrand tail does not decay");
        const double lo = std::max(lm(Complex(-T, d)), lm(Complex(-T, -d)));
        if (lo < peak - drop) break;
        peak = std::max(peak, lo);
        T *= 1.25;
    }
    RefinementPolicy pol;
    pol.max_panel_length = 1.0;
    pol.max_depth = cfg.max_depth;
    pol.panel_tol = cfg.panel_tol;
    return make_contour({Segment::line(Complex(-T, -d), Complex(c, -d)), Segment::arc(Complex(c, 0), Complex(c, -d), pi),
                         Segment::line(Complex(c, d), Complex(-T, d))},
                        false, pol);
}

ContourSpec build_sigma(int N, double margin, const ContourSpec* avoid) {
    if (N < 1) throw DomainError("build_sigma: N must be >= 1");
    if (!(margin > 0 && margin < 0.5)) throw DomainError("build_sigma: margin must lie in (0, 0.5)");
    ContourSpec c = rectangle(margin, margin, 1.0 - N - margin);
    c.policy.max_panel_length = 0.5;
    if (avoid && contours_intersect(c, *avoid)) {
        std::ostringstream os;
        os << "build_sigma: rectangle around {0, ..., " << 1 - N << "} with margin " << format_real(margin)
           << " intersects the s-contour";
        throw ConfigurationError(os.str());
    }
    return c;
}

KernelEvaluation kernel_finite(const DimensionProfile& p, double x, double y, KernelMode mode, const QuadConfig& cfg) {
    p.validate();
    cfg.validate();
    if (!std::isfinite(x) || !std::isfinite(y)) throw DomainError("kernel_finite: non-finite argument");
    if (mode == KernelMode::residue && p.N > 64) throw DomainError("kernel_finite: residue mode requires N <= 64");
    const KernelPhase ph(p);
    const Geometry g = choose_geometry(ph, x, y, cfg);
    const int order = cfg.nodes_per_panel;

    RefinementPolicy pol;
    pol.max_depth = cfg.max_depth;
    pol.panel_tol = cfg.panel_tol;

    ContourSpec sc;
    ContourSpec tc;
    if (cfg.s_path == SPath::hankel) {
        sc = build_hankel(cfg, -p.N, [&](Complex s) { return ph.logA(s, y).real(); });
        tc = build_sigma(p.N, 0.25, &sc);
    } else {
        pol.max_panel_length = std::max(0.25, g.T / 16.0);
        sc = make_contour({Segment::line(Complex(g.cs, -g.T), Complex(g.cs, g.T))}, false, pol);
        tc = rectangle(g.ct, g.H, g.aL);
    }
    sc.policy.panel_tol = cfg.panel_tol;
    sc.policy.max_depth = cfg.max_depth;
    tc.policy = pol;
    tc.policy.max_panel_length = std::max(0.25, (g.ct - g.aL + 2 * g.H) / 16.0);

    Complex ref_s = ph.logA(Complex(g.cs, 0.0), y);
    if (cfg.s_path == SPath::hankel) {
        double m = -std::numeric_limits<double>::infinity();
        for (Complex s : sc.sample(16)) m = std::max(m, ph.logA(s, y).real());
        ref_s = m;
    }
    const double ra = ref_s.real();
    auto fa = [&](Complex s) { return std::exp(ph.logA(s, y) - ra); };

    KernelEvaluation out;
    if (mode == KernelMode::residue) {
        // t-residues at -m: c_m e^{-mx} / (s + m)
        std::vector<double> lt(static_cast<std::size_t>(p.N));
        double L = -std::numeric_limits<double>::infinity();
        for (int m = 0; m < p.N; ++m) {
            double v = -log_gamma(m + 1.0) - m * x;
            for (double aj : ph.a) v -= log_gamma(aj - m);
            lt[static_cast<std::size_t>(m)] = v;
            L = std::max(L, v);
        }
        auto tsum = [&](Complex s, double* absval) {
            Complex acc = 0.0;
            double aa = 0.0;
            for (int m = 0; m < p.N; ++m) {
                const double c = ((m % 2) ? -1.0 : 1.0) * std::exp(lt[static_cast<std::size_t>(m)] - L);
                const Complex term = c / (s + static_cast<double>(m));
                acc += term;
                aa += std::abs(term);
            }
            if (absval) *absval = aa;
            return acc;
        };
        auto f = [&](Complex s) { return fa(s) * tsum(s, nullptr); };
        RefinementResult rs = refine_panels(sc, f, order);
        if (!rs.converged) refinement_failure("s-contour", rs, p, x, y);
        auto integrate = [&](const std::vector<Panel>& panels, double* cancel) {
            Complex acc = 0.0;
            double canc = 0.0;
            for (const auto& q : panel_nodes(sc, panels, order)) {
                double aa = 0.0;
                const Complex a = q.w * fa(q.z);
                acc += a * tsum(q.z, &aa);
                canc += std::abs(a) * aa;
            }
            if (cancel) *cancel = canc;
            return acc;
        };
        double canc = 0.0;
        std::vector<Panel> panels = rs.panels;
        const Complex scale = std::exp(Complex(ra + L, 0.0)) / two_pi_i;
        Complex k1 = integrate(panels, nullptr) * scale;
        Complex k2;
        for (int pass = 0;; ++pass) {
            panels = bisect_all(panels);
            k2 = integrate(panels, &canc) * scale;
            if (std::abs(k2 - k1) <= cfg.abs_tol || pass >= 2) break;
            k1 = k2;
        }
        out.value = k2.real();
        out.imag_leak = std::fabs(k2.imag());
        out.est_error = std::abs(k2 - k1) + 4.0 * std::numeric_limits<double>::epsilon() * canc * std::abs(scale);
    } else {
        double rb = -std::numeric_limits<double>::infinity();
        for (Complex t : tc.sample(24)) rb = std::max(rb, ph.logB(t, x).real());
        auto fb = [&](Complex t) { return std::exp(ph.logB(t, x) - rb); };
        RefinementResult rs = refine_panels(sc, fa, order, [&](Complex z) { return scaled_limit(tc, z); });
        if (!rs.converged) refinement_failure("s-contour", rs, p, x, y);
        RefinementResult rt = refine_panels(tc, fb, order, [&](Complex z) { return scaled_limit(sc, z); });
        if (!rt.converged) refinement_failure("t-contour", rt, p, x, y);
        const Complex scale = std::exp(Complex(ra + rb, 0.0)) / (two_pi_i * two_pi_i);
        std::vector<Panel> ps = rs.panels, pt = rt.panels;
        Complex k1 = double_sum(make_nodes(sc, ps, order, fa), make_nodes(tc, pt, order, fb)) * scale;
        Complex k2;
        for (int pass = 0;; ++pass) {
            ps = bisect_all(ps);
            pt = bisect_all(pt);
            k2 = double_sum(make_nodes(sc, ps, order, fa), make_nodes(tc, pt, order, fb)) * scale;
            if (std::abs(k2 - k1) <= cfg.abs_tol || pass >= 1) break;
            k1 = k2;
        }
        out.value = k2.real();
        out.imag_leak = std::fabs(k2.imag());
        out.est_error = std::abs(k2 - k1);
    }
    if (!std::isfinite(out.value)) {
        std::ostringstream os;
        os << "kernel_finite (" << p.describe() << ", x=" << format_real(x) << ", y=" << format_real(y)
           << "): non-finite result";
        throw NumericalError(os.str());
    }
    if (out.est_error > cfg.abs_tol || out.imag_leak > 10.0 * cfg.abs_tol) {
        std::ostringstream os;
        os << "kernel_finite (" << p.describe() << ", x=" << format_real(x) << ", y=" << format_real(y)
           << ", " << to_string(mode) << "): not converged to abs_tol " << format_real(cfg.abs_tol)
           << ": est_error " << format_real(out.est_error) << ", imag_leak " << format_real(out.imag_leak)
           << ", geometry " << g.option << " cs=" << format_real(g.cs) << " ct=" << format_real(g.ct)
           << " H=" << format_real(g.H) << " T=" << format_real(g.T);
        throw NumericalError(os.str());
    }
    return out;
}

KernelEvaluation density_finite(const DimensionProfile& p, double x, KernelMode mode, const QuadConfig& cfg) {
    return kernel_finite(p, x, x, mode, cfg);
}

double airy_kernel(double x, double y) {
    if (std::fabs(x) > 40.0 || std::fabs(y) > 40.0) throw DomainError("airy_kernel: |x|, |y| must be <= 40");
    if (std::fabs(x - y) <= 1e-6) {
        const double m = 0.5 * (x + y);
        double a, ap;
        airy(m, a, ap);
        return ap * ap - m * a * a;
    }
    double ax, apx, ay, apy;
    airy(x, ax, apx);
    airy(y, ay, apy);
    return (ax * apy - apx * ay) / (x - y);
}

double airy_kernel_contour(double x, double y, const QuadConfig& cfg) {
    if (std::fabs(x) > 40.0 || std::fabs(y) > 40.0) throw DomainError("airy_kernel: |x|, |y| must be <= 40");
    cfg.validate();
    // gamma_R: 1 + r e^{-/+ i pi/3}, upward; gamma_L = -gamma_R mirrored, upward.
    const Complex up = std::exp(Complex(0, pi / 3)), dn = std::conj(up);
    auto lu = [&](Complex u) { return u * u * u / 3.0 - x * u; };
    auto ll = [&](Complex l) { return -l * l * l / 3.0 + y * l; };
    const double drop = -std::log(cfg.tail_threshold);
    auto reach = [&](auto&& phase, Complex base, Complex dir) {
        double peak = phase(base).real();
        double R = 1.0;
        for (double r = 0; r <= 12.0; r += 0.25) peak = std::max(peak, phase(base + r * dir).real());
        while (phase(base + R * dir).real() > peak - drop) R *= 1.2;
        return R;
    };
    const double Ru = std::max(reach(lu, Complex(1, 0), up), reach(lu, Complex(1, 0), dn));
    const Complex lup = -std::conj(up), ldn = -std::conj(dn);  // e^{2 pi i/3}, e^{-2 pi i/3}
    const double Rl = std::max(reach(ll, Complex(-1, 0), lup), reach(ll, Complex(-1, 0), ldn));
    RefinementPolicy pol;
    pol.max_panel_length = 0.5;
    pol.panel_tol = cfg.panel_tol;
    pol.max_depth = cfg.max_depth;
    ContourSpec gr = make_contour({Segment::line(1.0 + Ru * dn, 1.0), Segment::line(1.0, 1.0 + Ru * up)}, false, pol);
    ContourSpec gl =
        make_contour({Segment::line(-1.0 + Rl * ldn, -1.0), Segment::line(-1.0, -1.0 + Rl * lup)}, false, pol);
    double pu = -std::numeric_limits<double>::infinity(), pl = pu;
    for (Complex z : gr.sample(32)) pu = std::max(pu, lu(z).real());
    for (Complex z : gl.sample(32)) pl = std::max(pl, ll(z).real());
    auto fu = [&](Complex u) { return std::exp(lu(u) - pu); };
    auto fl = [&](Complex l) { return std::exp(ll(l) - pl); };
    const int order = cfg.nodes_per_panel;
    RefinementResult ru = refine_panels(gr, fu, order);
    RefinementResult rl = refine_panels(gl, fl, order);
    if (!ru.converged || !rl.converged) throw NumericalError("airy_kernel_contour: refinement did not converge");
    const Complex v = double_sum(make_nodes(gr, ru.panels, order, fu), make_nodes(gl, rl.panels, order, fl)) *
                      std::exp(Complex(pu + pl, 0)) / (two_pi_i * two_pi_i);
    return v.real();
}

double correlation(const std::vector<double>& points, const KernelFunction& kernel) {
    const int n = static_cast<int>(points.size());
    if (n < 1 || n > 8) throw DomainError("correlation: need 1 <= n <= 8 points");
    Eigen::MatrixXd k(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) k(i, j) = kernel(points[static_cast<std::size_t>(i)], points[static_cast<std::size_t>(j)]);
    if (n == 1) return k(0, 0);
    return k.partialPivLu().determinant();
}

}  // namespace ginibre
