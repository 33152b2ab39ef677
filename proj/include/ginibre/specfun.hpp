#pragma once

#include <complex>

namespace ginibre {

using Complex = std::complex<double>;

// A logarithm of Gamma(z). Principal branch (continuation from the positive
// axis) for Re z >= 0.5; any branch elsewhere, which is harmless because
// every caller exponentiates sums of these values.
Complex log_gamma(Complex z);
double log_gamma(double x);  // real x > 0

double digamma(double x);
double trigamma(double x);
double tetragamma(double x);

// Supported range -40 <= x <= 200.
double airy_ai(double x);
double airy_ai_prime(double x);
void airy(double x, double& ai, double& aip);

double std_normal_pdf(double x);
double std_normal_cdf(double x);

// Thresholds used by the Airy evaluator; exposed for the overlap tests.
namespace airy_detail {
inline constexpr double crossover = 8.0;
void series(double x, double& ai, double& aip);
void asymptotic(double x, double& ai, double& aip);
}  // namespace airy_detail

}  // namespace ginibre
