#include "ginibre/contour.hpp"

#include "ginibre/errors.hpp"
#include "ginibre/format.hpp"
#include "ginibre/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace ginibre {

Segment Segment::line(Complex a, Complex b) {
    Segment s;
    s.kind = Kind::line;
    s.start = a;
    s.end = b;
    return s;
}

Segment Segment::arc(Complex center, Complex start, double sweep) {
    Segment s;
    s.kind = Kind::arc;
    s.center = center;
    s.start = start;
    s.sweep = sweep;
    s.end = center + (start - center) * std::exp(Complex(0.0, sweep));
    return s;
}

Complex Segment::point(double u) const {
    if (kind == Kind::line) return start + u * (end - start);
    if (u == 1.0) return end;
    return center + (start - center) * std::exp(Complex(0.0, sweep * u));
}

Complex Segment::tangent(double u) const {
    if (kind == Kind::line) return end - start;
    return Complex(0.0, sweep) * (start - center) * std::exp(Complex(0.0, sweep * u));
}

double Segment::length() const {
    if (kind == Kind::line) return std::abs(end - start);
    return std::abs(start - center) * std::fabs(sweep);
}

double ContourSpec::length() const {
    double s = 0.0;
    for (const auto& g : segments) s += g.length();
    return s;
}

void ContourSpec::validate() const {
    auto near = [](Complex a, Complex b) { return std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(a)); };
    for (std::size_t i = 1; i < segments.size(); ++i) {
        if (!near(segments[i - 1].end, segments[i].start)) {
            std::ostringstream os;
            os << "contour: segment " << i << " ends at (" << format_real(segments[i - 1].end.real()) << ", "
               << format_real(segments[i - 1].end.imag()) << ") but segment " << i + 1 << " starts at ("
               << format_real(segments[i].start.real()) << ", " << format_real(segments[i].start.imag()) << ")";
            throw ConfigurationError(os.str());
        }
    }
    if (closed && !segments.empty() && !near(segments.back().end, segments.front().start))
        throw ConfigurationError("contour: closed contour does not end at its start");
}

std::vector<Complex> ContourSpec::sample(int per_segment) const {
    std::vector<Complex> pts;
    for (std::size_t s = 0; s < segments.size(); ++s) {
        const auto& g = segments[s];
        const int n = std::max(per_segment, g.kind == Segment::Kind::arc ? 4 * per_segment : 1);
        for (int i = (s == 0 ? 0 : 1); i <= n; ++i) pts.push_back(g.point(static_cast<double>(i) / n));
    }
    return pts;
}

namespace {

double point_segment_distance(Complex p, Complex a, Complex b) {
    const Complex d = b - a;
    const double len2 = std::norm(d);
    double t = len2 > 0 ? ((p - a) * std::conj(d)).real() / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (a + t * d));
}

double cross(Complex a, Complex b) {
    return a.real() * b.imag() - a.imag() * b.real();
}

bool segments_cross(Complex p1, Complex p2, Complex q1, Complex q2) {
    const double d1 = cross(q2 - q1, p1 - q1), d2 = cross(q2 - q1, p2 - q1);
    const double d3 = cross(p2 - p1, q1 - p1), d4 = cross(p2 - p1, q2 - p1);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

double segment_segment_distance(Complex p1, Complex p2, Complex q1, Complex q2) {
    if (segments_cross(p1, p2, q1, q2)) return 0.0;
    return std::min({point_segment_distance(p1, q1, q2), point_segment_distance(p2, q1, q2),
                     point_segment_distance(q1, p1, p2), point_segment_distance(q2, p1, p2)});
}

}  // namespace

double ContourSpec::distance_to(Complex z) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& g : segments) {
        if (g.kind == Segment::Kind::line) {
            best = std::min(best, point_segment_distance(z, g.start, g.end));
        } else {
            const double r = std::abs(g.start - g.center);
            // nearest point on the full circle, if it lies on the arc
            const double th0 = std::arg(g.start - g.center);
            double th = std::arg(z - g.center) - th0;
            const double tau = 2.0 * std::numbers::pi;
            if (g.sweep >= 0) {
                th = std::fmod(std::fmod(th, tau) + tau, tau);
                if (th <= g.sweep) best = std::min(best, std::fabs(std::abs(z - g.center) - r));
            } else {
                th = std::fmod(std::fmod(-th, tau) + tau, tau);
                if (th <= -g.sweep) best = std::min(best, std::fabs(std::abs(z - g.center) - r));
            }
            best = std::min({best, std::abs(z - g.start), std::abs(z - g.end)});
        }
    }
    return best;
}

int ContourSpec::winding_number(Complex z) const {
    const auto pts = sample(256);
    double total = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) total += std::arg((pts[i] - z) / (pts[i - 1] - z));
    if (!closed && !pts.empty()) total += std::arg((pts.front() - z) / (pts.back() - z));
    return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

ContourSpec ContourSpec::reversed() const {
    ContourSpec r = *this;
    r.segments.clear();
    for (auto it = segments.rbegin(); it != segments.rend(); ++it) {
        if (it->kind == Segment::Kind::line)
            r.segments.push_back(Segment::line(it->end, it->start));
        else
            r.segments.push_back(Segment::arc(it->center, it->end, -it->sweep));
    }
    r.positive = !positive;
    return r;
}

ContourSpec make_contour(std::vector<Segment> segs, bool closed, RefinementPolicy policy) {
    ContourSpec c;
    c.segments = std::move(segs);
    c.closed = closed;
    c.policy = policy;
    c.validate();
    return c;
}

double contour_distance(const ContourSpec& a, const ContourSpec& b) {
    const auto pa = a.sample(48), pb = b.sample(48);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < pa.size(); ++i)
        for (std::size_t j = 1; j < pb.size(); ++j)
            best = std::min(best, segment_segment_distance(pa[i - 1], pa[i], pb[j - 1], pb[j]));
    return best;
}

bool contours_intersect(const ContourSpec& a, const ContourSpec& b, double clearance) {
    return contour_distance(a, b) <= clearance;
}

std::vector<Panel> initial_panels(const ContourSpec& c) {
    std::vector<Panel> out;
    const double hmax = c.policy.max_panel_length;
    for (std::size_t s = 0; s < c.segments.size(); ++s) {
        const double len = c.segments[s].length();
        const int n = std::max(1, static_cast<int>(std::ceil(len / hmax)));
        for (int i = 0; i < n; ++i) out.push_back({s, static_cast<double>(i) / n, static_cast<double>(i + 1) / n});
    }
    return out;
}

std::vector<QuadNode> panel_nodes(const ContourSpec& c, const std::vector<Panel>& panels, int order) {
    const GaussRule& g = gauss_legendre(order);
    std::vector<QuadNode> out;
    out.reserve(panels.size() * g.x.size());
    for (const auto& p : panels) {
        const Segment& seg = c.segments[p.segment];
        const double h = 0.5 * (p.u1 - p.u0), m = 0.5 * (p.u0 + p.u1);
        for (std::size_t i = 0; i < g.x.size(); ++i) {
            const double u = m + h * g.x[i];
            out.push_back({seg.point(u), g.w[i] * h * seg.tangent(u)});
        }
    }
    return out;
}

std::vector<Panel> bisect_all(const std::vector<Panel>& panels) {
    std::vector<Panel> out;
    out.reserve(2 * panels.size());
    for (const auto& p : panels) {
        const double m = 0.5 * (p.u0 + p.u1);
        out.push_back({p.segment, p.u0, m});
        out.push_back({p.segment, m, p.u1});
    }
    return out;
}

namespace {

struct PanelEval {
    Complex full, halves;
    double abs_halves;
};

PanelEval eval_panel(const ContourSpec& c, const Panel& p, const std::function<Complex(Complex)>& f,
                     const GaussRule& g) {
    const Segment& seg = c.segments[p.segment];
    auto rule = [&](double a, double b, double* absval) {
        const double h = 0.5 * (b - a), m = 0.5 * (a + b);
        Complex s = 0.0;
        double sa = 0.0;
        for (std::size_t i = 0; i < g.x.size(); ++i) {
            const double u = m + h * g.x[i];
            const Complex v = g.w[i] * h * seg.tangent(u) * f(seg.point(u));
            s += v;
            sa += std::abs(v);
        }
        if (absval) *absval = sa;
        return s;
    };
    const double mid = 0.5 * (p.u0 + p.u1);
    double a1 = 0, a2 = 0;
    PanelEval e;
    e.full = rule(p.u0, p.u1, nullptr);
    e.halves = rule(p.u0, mid, &a1) + rule(mid, p.u1, &a2);
    e.abs_halves = a1 + a2;
    return e;
}

}  // namespace

RefinementResult refine_panels(const ContourSpec& c, const std::function<Complex(Complex)>& f, int order,
                               const std::function<double(Complex)>& length_limit) {
    const GaussRule& g = gauss_legendre(order);
    RefinementResult res;
    std::vector<Panel> work = initial_panels(c);
    double l1 = 0.0;
    for (const auto& p : work) l1 += eval_panel(c, p, f, g).abs_halves;
    if (!(l1 > 0.0) || !std::isfinite(l1)) {
        if (!std::isfinite(l1)) {
            res.converged = false;
            res.diagnostic = "integrand not finite on the initial panels";
        }
        res.panels = work;
        res.l1 = l1;
        return res;
    }
    const double tol = c.policy.panel_tol * l1;

    // Depth-first with an explicit stack keeps panels in contour order.
    struct Item {
        Panel p;
        int depth;
    };
    std::vector<Item> stack;
    for (auto it = work.rbegin(); it != work.rend(); ++it) stack.push_back({*it, 0});
    double total_abs = 0.0;
    while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        const Segment& seg = c.segments[it.p.segment];
        const Complex a = seg.point(it.p.u0), b = seg.point(it.p.u1);
        const double len = seg.length() * (it.p.u1 - it.p.u0);
        bool ok_len = len <= c.policy.max_panel_length * (1.0 + 1e-12);
        if (ok_len && length_limit) ok_len = len <= length_limit(seg.point(0.5 * (it.p.u0 + it.p.u1)));
        PanelEval e{};
        bool ok_err = false;
        if (ok_len) {
            e = eval_panel(c, it.p, f, g);
            const double d = std::abs(e.full - e.halves);
            ok_err = std::isfinite(d) && d <= tol;
        }
        if ((ok_len && ok_err) || it.depth >= c.policy.max_depth) {
            if (!(ok_len && ok_err)) {
                if (res.converged) {
                    std::ostringstream os;
                    os << "panel on segment " << it.p.segment << " between (" << format_real(a.real()) << ", "
                       << format_real(a.imag()) << ") and (" << format_real(b.real()) << ", "
                       << format_real(b.imag()) << ") unresolved at depth " << it.depth;
                    res.diagnostic = os.str();
                }
                res.converged = false;
                if (!ok_len) e = eval_panel(c, it.p, f, g);
            }
            res.est_error += std::abs(e.full - e.halves);
            total_abs += e.abs_halves;
            res.panels.push_back(it.p);
            continue;
        }
        const double m = 0.5 * (it.p.u0 + it.p.u1);
        stack.push_back({{it.p.segment, m, it.p.u1}, it.depth + 1});
        stack.push_back({{it.p.segment, it.p.u0, m}, it.depth + 1});
    }
    res.l1 = total_abs;
    return res;
}

}  // namespace ginibre
