#include "ginibre/specfun.hpp"

#include "ginibre/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace ginibre {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double half_log_two_pi = 0.91893853320467274178032973640562;

// B_{2k} / (2k (2k-1)), k = 1..10
constexpr double stirling_coef[] = {
    1.0 / 12.0,          -1.0 / 360.0,          1.0 / 1260.0,           -1.0 / 1680.0,
    1.0 / 1188.0,        -691.0 / 360360.0,     1.0 / 156.0,            -3617.0 / 122400.0,
    43867.0 / 244188.0,  -174611.0 / 125400.0};

// Bernoulli numbers B_{2k}, k = 1..8
constexpr double bernoulli[] = {1.0 / 6.0,   -1.0 / 30.0, 1.0 / 42.0,   -1.0 / 30.0,
                                5.0 / 66.0,  -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0};

Complex stirling(Complex z) {
    Complex zi = 1.0 / z;
    Complex zi2 = zi * zi;
    Complex sum = 0.0;
    Complex p = zi;
    for (double c : stirling_coef) {
        sum += c * p;
        p *= zi2;
    }
    return (z - 0.5) * std::log(z) - z + half_log_two_pi + sum;
}

// log Gamma for Re z >= 0.5.
Complex log_gamma_right(Complex z) {
    Complex shift = 0.0;
    while (std::abs(z) < 12.0) {
        shift += std::log(z);
        z += 1.0;
    }
    return stirling(z) - shift;
}

// log sin(pi z), stable for large |Im z|; branch unimportant.
Complex log_sin_pi(Complex z) {
    double n = std::round(z.real());
    Complex f(z.real() - n, z.imag());
    Complex sign_log = (static_cast<long long>(n) % 2 != 0) ? Complex(0.0, pi) : Complex(0.0, 0.0);
    if (std::abs(f.imag()) < 5.0) return std::log(std::sin(pi * f)) + sign_log;
    // sin(pi f) = (e^{i pi f} - e^{-i pi f}) / (2i)
    if (f.imag() > 0) {
        Complex e = std::exp(Complex(0.0, 2.0 * pi) * f);  // small
        return Complex(0.0, -pi) * f + std::log(Complex(0.0, 0.5)) + std::log(1.0 - e) + sign_log;
    }
    Complex e = std::exp(Complex(0.0, -2.0 * pi) * f);
    return Complex(0.0, pi) * f + std::log(Complex(0.0, -0.5)) + std::log(1.0 - e) + sign_log;
}

[[noreturn]] void pole(const char* what, double x) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": pole or invalid argument at " << x;
    throw DomainError(os.str());
}

}  // namespace

Complex log_gamma(Complex z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) pole("log_gamma", z.real());
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())) pole("log_gamma", z.real());
    if (z.real() >= 0.5) return log_gamma_right(z);
    // Reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
    return std::log(pi) - log_sin_pi(z) - log_gamma_right(1.0 - z);
}

double log_gamma(double x) {
    if (!(x > 0.0)) pole("log_gamma", x);
    return log_gamma(Complex(x, 0.0)).real();
}

double digamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) pole("digamma", x);
    double acc = 0.0;
    while (x < 10.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    double xi2 = 1.0 / (x * x);
    double p = xi2;
    double tail = 0.0;
    for (int k = 1; k <= 8; ++k) {
        tail += bernoulli[k - 1] / (2.0 * k) * p;
        p *= xi2;
    }
    return acc + std::log(x) - 0.5 / x - tail;
}

double trigamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) pole("trigamma", x);
    double acc = 0.0;
    while (x < 10.0) {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    double xi = 1.0 / x;
    double xi2 = xi * xi;
    double p = xi2 * xi;
    double tail = 0.0;
    for (int k = 1; k <= 8; ++k) {
        tail += bernoulli[k - 1] * p;
        p *= xi2;
    }
    return acc + xi + 0.5 * xi2 + tail;
}

double tetragamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) pole("tetragamma", x);
    double acc = 0.0;
    while (x < 10.0) {
        acc -= 2.0 / (x * x * x);
        x += 1.0;
    }
    double xi = 1.0 / x;
    double xi2 = xi * xi;
    double p = xi2 * xi2;
    double tail = 0.0;
    for (int k = 1; k <= 8; ++k) {
        tail += (2.0 * k + 1.0) * bernoulli[k - 1] * p;
        p *= xi2;
    }
    return acc - xi2 - xi2 * xi - tail;
}

namespace airy_detail {

// Maclaurin series evaluated in extended precision; the two power series
// grow like exp(2/3 |x|^{3/2}) so the extra bits absorb the cancellation.
void series(double xd, double& ai, double& aip) {
    using L = long double;
    const L x = xd;
    const L c1 = 0.355028053887817239260063186004183176L;  // Ai(0)
    const L c2 = 0.258819403792806798405183560189203963L;  // -Ai'(0)
    const L x3 = x * x * x;
    // f = sum 3^k (1/3)_k x^{3k}/(3k)!, g = sum 3^k (2/3)_k x^{3k+1}/(3k+1)!
    L tf = 1.0L, tg = x, f = tf, g = tg;
    L tdf = x * x / 2.0L, tdg = 1.0L;  // first nonzero terms of f', g'
    L df = tdf, dg = tdg;
    for (int k = 1; k < 200; ++k) {
        const L a = 3.0L * k;
        tf *= x3 / ((a - 1.0L) * a);
        tg *= x3 / (a * (a + 1.0L));
        tdg *= x3 / (a * (a - 2.0L));
        f += tf;
        g += tg;
        dg += tdg;
        if (k >= 2) {
            tdf *= x3 / ((a - 3.0L) * (a - 1.0L));
            df += tdf;
        }
        const L scale = std::fabs(f) + std::fabs(g) + std::fabs(df) + std::fabs(dg);
        if (k > 60 && std::fabs(tf) + std::fabs(tg) + std::fabs(tdf) + std::fabs(tdg) < 1e-22L * scale) break;
    }
    ai = static_cast<double>(c1 * f - c2 * g);
    aip = static_cast<double>(c1 * df - c2 * dg);
}

void asymptotic(double xd, double& ai, double& aip) {
    const double z = std::fabs(xd);
    const double zeta = 2.0 / 3.0 * z * std::sqrt(z);
    const double z14 = std::sqrt(std::sqrt(z));
    // u_k, v_k coefficients; truncate at the smallest term.
    double u[40], v[40];
    u[0] = 1.0;
    v[0] = 1.0;
    int kmax = 1;
    for (int k = 1; k < 40; ++k) {
        u[k] = u[k - 1] * (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / ((2.0 * k - 1.0) * 216.0 * k);
        v[k] = -(6.0 * k + 1.0) / (6.0 * k - 1.0) * u[k];
        kmax = k;
        if (std::fabs(u[k]) / std::pow(zeta, k) < 1e-18) break;
        if (k > 1 && std::fabs(u[k]) / zeta > std::fabs(u[k - 1])) {
            kmax = k - 1;
            break;
        }
    }
    if (xd > 0) {
        double su = 0.0, sv = 0.0, p = 1.0;
        for (int k = 0; k <= kmax; ++k) {
            const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
            su += sgn * u[k] * p;
            sv += sgn * v[k] * p;
            p /= zeta;
        }
        const double e = std::exp(-zeta);
        ai = e / (2.0 * std::sqrt(pi) * z14) * su;
        aip = -z14 * e / (2.0 * std::sqrt(pi)) * sv;
        return;
    }
    double pu = 0.0, qu = 0.0, pv = 0.0, qv = 0.0;
    double p = 1.0;
    for (int k = 0; k <= kmax; ++k) {
        const int m = k / 2;
        const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
        if (k % 2 == 0) {
            pu += sgn * u[k] * p;
            pv += sgn * v[k] * p;
        } else {
            qu += sgn * u[k] * p;
            qv += sgn * v[k] * p;
        }
        p /= zeta;
    }
    const double th = zeta - pi / 4.0;
    const double c = std::cos(th), s = std::sin(th);
    ai = (c * pu + s * qu) / (std::sqrt(pi) * z14);
    aip = z14 / std::sqrt(pi) * (s * pv - c * qv);
}

}  // namespace airy_detail

void airy(double x, double& ai, double& aip) {
    if (!(x >= -40.0 && x <= 200.0)) pole("airy_ai (supported range [-40, 200])", x);
    if (std::fabs(x) < airy_detail::crossover)
        airy_detail::series(x, ai, aip);
    else
        airy_detail::asymptotic(x, ai, aip);
}

double airy_ai(double x) {
    double a, ap;
    airy(x, a, ap);
    return a;
}

double airy_ai_prime(double x) {
    double a, ap;
    airy(x, a, ap);
    return ap;
}

double std_normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * pi);
}

double std_normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

}  // namespace ginibre
