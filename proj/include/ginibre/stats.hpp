#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace ginibre {

struct KsResult {
    double d = 0.0;
    double d_plus = 0.0;   // sup (F_n - F)
    double d_minus = 0.0;  // sup (F - F_n)
    std::size_t n = 0;
};

// One-sample Kolmogorov-Smirnov distance against a continuous CDF.
KsResult ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

struct MomentSummary {
    std::size_t n = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased
    double stddev = 0.0;
    double min = 0.0;
    double max = 0.0;
};

MomentSummary summarize(const std::vector<double>& xs);

// CDF tabulated on a grid from a density, with cubic Hermite interpolation
// (values from the running integral, slopes from the density itself).
class TabulatedCdf {
public:
    TabulatedCdf(std::vector<double> x, std::vector<double> F, std::vector<double> f);
    // Integrates `density` over [lo, hi] on `cells` equal cells with an
    // order-`order` Gauss-Legendre rule per cell. Mass below lo is taken as 0.
    static TabulatedCdf from_density(const std::function<double(double)>& density, double lo, double hi, int cells,
                                     int order = 10);

    double operator()(double x) const;
    double total_mass() const { return F_.back(); }
    const std::vector<double>& grid() const { return x_; }

private:
    std::vector<double> x_, F_, f_;
};

}  // namespace ginibre
