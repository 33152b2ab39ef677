#include "ginibre/stats.hpp"

#include "ginibre/errors.hpp"
#include "ginibre/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace ginibre {

KsResult ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw DomainError("ks_statistic: empty sample");
    std::sort(samples.begin(), samples.end());
    KsResult r;
    r.n = samples.size();
    const double n = static_cast<double>(r.n);
    for (std::size_t i = 0; i < r.n; ++i) {
        const double F = cdf(samples[i]);
        r.d_plus = std::max(r.d_plus, (i + 1) / n - F);
        r.d_minus = std::max(r.d_minus, F - i / n);
    }
    r.d = std::max(r.d_plus, r.d_minus);
    return r;
}

MomentSummary summarize(const std::vector<double>& xs) {
    if (xs.empty()) throw DomainError("summarize: empty sample");
    MomentSummary s;
    s.n = xs.size();
    s.min = *std::min_element(xs.begin(), xs.end());
    s.max = *std::max_element(xs.begin(), xs.end());
    // Welford
    double m = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double d = xs[i] - m;
        m += d / static_cast<double>(i + 1);
        m2 += d * (xs[i] - m);
    }
    s.mean = m;
    s.variance = s.n > 1 ? m2 / static_cast<double>(s.n - 1) : 0.0;
    s.stddev = std::sqrt(s.variance);
    return s;
}

TabulatedCdf::TabulatedCdf(std::vector<double> x, std::vector<double> F, std::vector<double> f)
    : x_(std::move(x)), F_(std::move(F)), f_(std::move(f)) {
    if (x_.size() < 2 || F_.size() != x_.size() || f_.size() != x_.size())
        throw ShapeError("TabulatedCdf: grid, values and slopes must have equal length >= 2");
    for (std::size_t i = 1; i < x_.size(); ++i)
        if (!(x_[i] > x_[i - 1])) throw DomainError("TabulatedCdf: grid must be strictly increasing");
}

TabulatedCdf TabulatedCdf::from_density(const std::function<double(double)>& density, double lo, double hi,
                                        int cells, int order) {
    if (!(hi > lo) || cells < 1) throw DomainError("TabulatedCdf::from_density: need lo < hi and cells >= 1");
    const auto& rule = gauss_legendre(order);
    std::vector<double> x(cells + 1), F(cells + 1, 0.0), f(cells + 1);
    const double h = (hi - lo) / cells;
    for (int i = 0; i <= cells; ++i) {
        x[i] = lo + h * i;
        f[i] = density(x[i]);
    }
    for (int i = 0; i < cells; ++i) {
        double acc = 0.0;
        for (std::size_t q = 0; q < rule.x.size(); ++q)
            acc += rule.w[q] * density(x[i] + 0.5 * h * (1.0 + rule.x[q]));
        F[i + 1] = F[i] + 0.5 * h * acc;
    }
    return TabulatedCdf(std::move(x), std::move(F), std::move(f));
}

double TabulatedCdf::operator()(double x) const {
    if (x <= x_.front()) return F_.front();
    if (x >= x_.back()) return F_.back();
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * F_[i] + (t3 - 2 * t2 + t) * h * f_[i] + (-2 * t3 + 3 * t2) * F_[i + 1] +
           (t3 - t2) * h * f_[i + 1];
}

}  // namespace ginibre
