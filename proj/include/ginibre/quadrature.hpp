#pragma once

#include <functional>
#include <vector>

namespace ginibre {

struct GaussRule {
    std::vector<double> x;  // nodes on [-1, 1], increasing
    std::vector<double> w;
};

// n-point Gauss-Legendre rule (Newton on the Legendre recurrence); cached.
const GaussRule& gauss_legendre(int n);

// Composite Gauss-Legendre on [a, b] with `panels` equal panels.
double integrate_panels(const std::function<double(double)>& f, double a, double b, int panels, int order = 20);

}  // namespace ginibre
