#pragma once

#include "ginibre/contour.hpp"
#include "ginibre/profile.hpp"

#include <functional>
#include <string>
#include <vector>

namespace ginibre {

enum class KernelMode { quadrature, residue };
// vertical: adapted line Re s = c (default); hankel: the literal Hankel
// contour around (-inf, -N].
enum class SPath { vertical, hankel };

KernelMode parse_kernel_mode(const std::string& s);
std::string to_string(KernelMode m);

struct QuadConfig {
    int nodes_per_panel = 20;
    double abs_tol = 1e-9;
    double hankel_offset = 0.5;    // delta
    double hankel_cap = 0.25;      // r0
    double tail_threshold = 1e-20; // relative size of the discarded tails
    double panel_tol = 1e-14;
    int max_depth = 40;
    SPath s_path = SPath::vertical;

    void validate() const;
};

struct KernelEvaluation {
    double value = 0.0;
    double imag_leak = 0.0;
    double est_error = 0.0;
};

// Hankel contour around (-inf, pole_edge]: rays at Im = -/+ delta from -T to
// apex - delta, joined by a semicircle of radius delta whose rightmost point
// is the apex pole_edge + r0. T grows until log_modulus at the ray ends is
// ln(tail_threshold) below its peak; the default log_modulus is
// ln|Gamma(s - pole_edge)|.
ContourSpec build_hankel(const QuadConfig& cfg, double pole_edge = -1.0,
                         const std::function<double(Complex)>& log_modulus = {});

// Rectangle with corners 1-N-margin -/+ i margin, margin -/+ i margin,
// traversed counterclockwise. Throws ConfigurationError if it meets `avoid`.
ContourSpec build_sigma(int N, double margin = 0.25, const ContourSpec* avoid = nullptr);

KernelEvaluation kernel_finite(const DimensionProfile& p, double x, double y,
                               KernelMode mode = KernelMode::quadrature, const QuadConfig& cfg = {});
KernelEvaluation density_finite(const DimensionProfile& p, double x, KernelMode mode = KernelMode::quadrature,
                                const QuadConfig& cfg = {});

double airy_kernel(double x, double y);
double airy_kernel_contour(double x, double y, const QuadConfig& cfg = {});

using KernelFunction = std::function<double(double, double)>;
// det[K(x_i, x_j)] for 1 <= n <= 8 points.
double correlation(const std::vector<double>& points, const KernelFunction& kernel);

}  // namespace ginibre
