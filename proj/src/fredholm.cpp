#include "ginibre/fredholm.hpp"

#include "ginibre/errors.hpp"
#include "ginibre/format.hpp"
#include "ginibre/quadrature.hpp"
#include "ginibre/specfun.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace ginibre {

namespace {

// Nodes beyond this carry kernel mass below exp(-(4/3) 60^{3/2}).
constexpr double node_cutoff = 60.0;

double determinant(const Eigen::MatrixXd& a) {
    if (a.rows() == 0) return 1.0;
    return a.partialPivLu().determinant();
}

}  // namespace

NystromGrid NystromGrid::build(double s, int m, double L) {
    const GaussRule& g = gauss_legendre(m);
    NystromGrid out;
    out.s = s;
    out.m = m;
    out.L = L;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
        const double u = g.x[i];
        const double x = s + L * (1.0 + u) / (1.0 - u);
        if (x > node_cutoff) continue;
        out.nodes.push_back(x);
        out.weights.push_back(g.w[i] * 2.0 * L / ((1.0 - u) * (1.0 - u)));
    }
    return out;
}

double tw2_determinant(const NystromGrid& g) {
    const std::size_t n = g.nodes.size();
    std::vector<double> ai(n), aip(n), sw(n);
    for (std::size_t i = 0; i < n; ++i) {
        airy(g.nodes[i], ai[i], aip[i]);
        sw[i] = std::sqrt(g.weights[i]);
    }
    Eigen::MatrixXd a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double k;
            if (i == j) {
                k = aip[i] * aip[i] - g.nodes[i] * ai[i] * ai[i];
            } else {
                k = (ai[i] * aip[j] - aip[i] * ai[j]) / (g.nodes[i] - g.nodes[j]);
            }
            a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (i == j ? 1.0 : 0.0) - sw[i] * k * sw[j];
        }
    }
    return determinant(a);
}

double tw2_determinant(const NystromGrid& g, const KernelFunction& kernel) {
    const auto n = static_cast<Eigen::Index>(g.nodes.size());
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
            a(i, j) = (i == j ? 1.0 : 0.0) -
                      std::sqrt(g.weights[ui]) * kernel(g.nodes[ui], g.nodes[uj]) * std::sqrt(g.weights[uj]);
        }
    return determinant(a);
}

Tw2Value tw2_cdf(double s, int m, double conv_tol) {
    if (!(s >= -12.0 && s <= 10.0)) throw DomainError("tw2_cdf: s must lie in [-12, 10], got " + format_real(s));
    if (m < 10) throw DomainError("tw2_cdf: m must be >= 10");
    const double f1 = tw2_determinant(NystromGrid::build(s, m));
    const double f2 = tw2_determinant(NystromGrid::build(s, 2 * m));
    Tw2Value v;
    v.est_error = std::fabs(f1 - f2);
    // F2 is a probability; rounding can leave tiny negative values deep in the left tail.
    v.value = std::clamp(f1, 0.0, 1.0);
    if (!(v.est_error <= conv_tol))
        throw NumericalError("tw2_cdf: determinant at s = " + format_real(s) + " not converged with m = " +
                             std::to_string(m) + " (doubling changes it by " + format_real(v.est_error) + ")");
    return v;
}

namespace {

struct Moments {
    double mean, variance;
};

// E[X] = int_0^inf (1-F) - int_{-inf}^0 F; E[X^2] = 2 int_0^inf x(1-F) - 2 int_{-inf}^0 x F.
Moments moments(int m) {
    auto F = [m](double s) { return tw2_determinant(NystromGrid::build(s, m)); };
    const int panels = 24, order = 20;
    double m1 = 0.0, m2 = 0.0;
    const GaussRule& g = gauss_legendre(order);
    auto accumulate = [&](double a, double b, bool left) {
        const double h = (b - a) / panels;
        for (int p = 0; p < panels; ++p) {
            const double c = a + (p + 0.5) * h;
            for (std::size_t i = 0; i < g.x.size(); ++i) {
                const double x = c + 0.5 * h * g.x[i];
                const double w = 0.5 * h * g.w[i];
                const double f = F(x);
                if (left) {
                    m1 -= w * f;
                    m2 -= 2.0 * w * x * f;
                } else {
                    m1 += w * (1.0 - f);
                    m2 += 2.0 * w * x * (1.0 - f);
                }
            }
        }
    };
    accumulate(-12.0, 0.0, true);
    accumulate(0.0, 10.0, false);
    return {m1, m2 - m1 * m1};
}

}  // namespace

Tw2Stats tw2_stats(int m, double conv_tol) {
    if (m < 40) throw DomainError("tw2_stats: m must be >= 40");
    const Moments a = moments(m), b = moments(2 * m);
    Tw2Stats st;
    st.mean = a.mean;
    st.variance = a.variance;
    st.est_error = std::max(std::fabs(a.mean - b.mean), std::fabs(a.variance - b.variance));
    if (!(st.est_error <= conv_tol))
        throw NumericalError("tw2_stats: moments not converged under node doubling (change " +
                             format_real(st.est_error) + ")");
    return st;
}

}  // namespace ginibre
