#pragma once

#include "ginibre/kernel.hpp"

#include <vector>

namespace ginibre {

// Gauss-Legendre nodes mapped to (s, inf) by x = s + L(1+u)/(1-u).
struct NystromGrid {
    double s = 0.0;
    int m = 0;
    double L = 4.0;
    std::vector<double> nodes;    // increasing
    std::vector<double> weights;  // positive

    static NystromGrid build(double s, int m, double L = 4.0);
};

struct Tw2Value {
    double value = 0.0;
    double est_error = 0.0;  // |F(m) - F(2m)|
};

// det(I - W^{1/2} K W^{1/2}) on the grid, closed-form or supplied kernel.
double tw2_determinant(const NystromGrid& g);
double tw2_determinant(const NystromGrid& g, const KernelFunction& kernel);

// Requires -12 <= s <= 10 and m >= 10; throws NumericalError when the m and
// 2m determinants differ by more than conv_tol.
Tw2Value tw2_cdf(double s, int m = 40, double conv_tol = 1e-6);

struct Tw2Stats {
    double mean = 0.0;
    double variance = 0.0;
    double est_error = 0.0;  // max change of mean/variance under node doubling
};

Tw2Stats tw2_stats(int m = 40, double conv_tol = 1e-6);

}  // namespace ginibre
