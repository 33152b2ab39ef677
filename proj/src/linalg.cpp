#include "ginibre/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace ginibre {

SpectrumMode parse_spectrum_mode(const std::string& s) {
    if (s == "dense") return SpectrumMode::dense;
    if (s == "qr_sweep") return SpectrumMode::qr_sweep;
    throw DomainError("unknown spectrum mode '" + s + "' (expected dense|qr_sweep)");
}

std::string to_string(SpectrumMode m) {
    return m == SpectrumMode::dense ? "dense" : "qr_sweep";
}

Eigen::Index check_chain(const std::vector<ComplexMatrix>& factors) {
    if (factors.empty()) throw DomainError("product_log_spectrum: empty factor list");
    for (std::size_t j = 1; j < factors.size(); ++j) {
        if (factors[j].cols() != factors[j - 1].rows())
            throw ShapeError("factor " + std::to_string(j + 1) + " has " + std::to_string(factors[j].cols()) +
                             " columns but factor " + std::to_string(j) + " has " +
                             std::to_string(factors[j - 1].rows()) + " rows");
    }
    const Eigen::Index n = factors.front().cols();
    for (std::size_t j = 0; j < factors.size(); ++j)
        if (factors[j].rows() < n)
            throw ShapeError("factor " + std::to_string(j + 1) + " has fewer rows than the product width " +
                             std::to_string(n));
    return n;
}

namespace {

// Matrices wider than this use the Gram eigenvalue route in double.
constexpr Eigen::Index jacobi_width_limit = 64;

template <class Real>
double to_double(const Real& x) {
    return static_cast<double>(x);
}

// Scales y by a power of two near 1/max|entry| and returns the exponent removed.
template <class Real>
long renormalize(CMatrix<Real>& y) {
    using std::sqrt;
    Real mx = 0;
    for (Eigen::Index j = 0; j < y.cols(); ++j)
        for (Eigen::Index i = 0; i < y.rows(); ++i) mx = std::max(mx, abs2(y(i, j)));
    if (mx == 0) throw NumericalError("product_log_spectrum: product underflowed to zero");
    int e = 0;
    using std::frexp;
    frexp(sqrt(mx), &e);
    using std::ldexp;
    const Real s = ldexp(Real(1), -e);
    y *= std::complex<Real>(s, Real(0));
    return e;
}

template <class Real>
int count_reliable(const std::vector<double>& values, double eps, double amplification, bool squared) {
    // log error of value i ~ amplification * eps * (sigma_1/sigma_i)^(1 or 2)
    int r = 0;
    for (double x : values) {
        double ratio = 0.5 * (values.front() - x);  // ln(sigma_1/sigma_i)
        if (squared) ratio *= 2.0;
        double logerr = std::log(amplification * eps) + ratio;
        if (std::isfinite(x) && logerr <= std::log(reliability_budget))
            ++r;
        else
            break;
    }
    return r;
}

template <class Real>
LogSpectrum dense_spectrum(const std::vector<ComplexMatrix>& factors) {
    using std::log;
    using C = std::complex<Real>;
    CMatrix<Real> y = factors.front().template cast<C>();
    long exponent = renormalize(y);
    for (std::size_t j = 1; j < factors.size(); ++j) {
        CMatrix<Real> next = factors[j].template cast<C>() * y;
        y.swap(next);
        exponent += renormalize(y);
    }
    const double shift = 2.0 * static_cast<double>(exponent) * std::log(2.0);
    const double eps = to_double(std::numeric_limits<Real>::epsilon());
    const double amp = 4.0 * static_cast<double>(factors.size() + 1);
    LogSpectrum out;
    if constexpr (std::is_same_v<Real, double>) {
        if (y.cols() > jacobi_width_limit) {
            // lower triangle only; the eigensolver reads nothing else
            CMatrix<double> g = CMatrix<double>::Zero(y.cols(), y.cols());
            g.selfadjointView<Eigen::Lower>().rankUpdate(y.adjoint());
            Eigen::SelfAdjointEigenSolver<CMatrix<double>> es(g, Eigen::EigenvaluesOnly);
            if (es.info() != Eigen::Success) throw NumericalError("product_log_spectrum: Gram eigensolver failed");
            const auto& ev = es.eigenvalues();
            const double floor = std::numeric_limits<double>::min();
            for (Eigen::Index i = ev.size() - 1; i >= 0; --i)
                out.values.push_back(std::log(std::max(ev(i), floor)) + shift);
            out.reliable_count =
                count_reliable<double>(out.values, eps, amp + static_cast<double>(y.cols()), true);
            return out;
        }
    }
    SvdResult<Real> svd = jacobi_svd<Real>(y);
    out.iterations = svd.sweeps;
    for (const Real& s : svd.sigma) {
        if (s == 0)
            out.values.push_back(-std::numeric_limits<double>::infinity());
        else
            out.values.push_back(2.0 * to_double(Real(log(s))) + shift);
    }
    out.reliable_count = count_reliable<Real>(out.values, eps, amp, false);
    return out;
}

template <class Real>
void accumulate_log_diag(const CMatrix<Real>& r, std::vector<double>& acc) {
    using std::log;
    for (Eigen::Index i = 0; i < r.rows(); ++i) acc[static_cast<std::size_t>(i)] += to_double(Real(log(r(i, i).real())));
}

// One QR sweep of frame q through the chain; forward uses X_1..X_M, backward
// uses X_M^H..X_1^H. Returns the accumulated sum of log R-diagonals.
template <class Real>
std::vector<double> sweep(const std::vector<ComplexMatrix>& factors, CMatrix<Real>& q, bool forward) {
    using C = std::complex<Real>;
    std::vector<double> acc(static_cast<std::size_t>(q.cols()), 0.0);
    const std::size_t m = factors.size();
    for (std::size_t s = 0; s < m; ++s) {
        const std::size_t j = forward ? s : m - 1 - s;
        CMatrix<Real> z = forward ? CMatrix<Real>(factors[j].template cast<C>() * q)
                                  : CMatrix<Real>(factors[j].adjoint().template cast<C>() * q);
        QrResult<Real> qr = householder_qr<Real>(z);
        for (Eigen::Index i = 0; i < qr.R.rows(); ++i)
            if (qr.R(i, i).real() == 0) throw NumericalError("qr_sweep: rank-deficient step");
        accumulate_log_diag(qr.R, acc);
        q.swap(qr.Q);
    }
    return acc;
}

template <class Real>
LogSpectrum qr_spectrum(const std::vector<ComplexMatrix>& factors, Eigen::Index n) {
    const int max_passes = 4000;
    CMatrix<Real> q = CMatrix<Real>::Identity(n, n);
    std::vector<double> prev;
    LogSpectrum out;
    for (int pass = 1; pass <= max_passes; ++pass) {
        std::vector<double> cur = sweep<Real>(factors, q, pass % 2 == 1);
        out.iterations = pass;
        if (!prev.empty()) {
            double scale = 1.0, diff = 0.0;
            for (std::size_t i = 0; i < cur.size(); ++i) {
                scale = std::max(scale, std::fabs(cur[i]));
                diff = std::max(diff, std::fabs(cur[i] - prev[i]));
            }
            if (diff <= 1e-12 * scale * static_cast<double>(factors.size())) {
                out.values.resize(cur.size());
                for (std::size_t i = 0; i < cur.size(); ++i) out.values[i] = 2.0 * cur[i];
                std::sort(out.values.begin(), out.values.end(), std::greater<>());
                out.reliable_count = static_cast<int>(out.values.size());
                return out;
            }
        }
        prev = std::move(cur);
    }
    throw NumericalError("qr_sweep: R-diagonal sums did not settle after " + std::to_string(max_passes) +
                         " passes (near-degenerate singular values)");
}

}  // namespace

LogSpectrum product_log_spectrum(const std::vector<ComplexMatrix>& factors, SpectrumMode mode,
                                 const PrecisionContext& ctx) {
    const Eigen::Index n = check_chain(factors);
    return with_precision(ctx, [&](auto tag) -> LogSpectrum {
        using Real = decltype(tag);
        if (mode == SpectrumMode::dense) return dense_spectrum<Real>(factors);
        return qr_spectrum<Real>(factors, n);
    });
}

double log_gram_determinant(const std::vector<ComplexMatrix>& factors, const PrecisionContext& ctx) {
    const Eigen::Index n = check_chain(factors);
    return with_precision(ctx, [&](auto tag) -> double {
        using Real = decltype(tag);
        CMatrix<Real> q = CMatrix<Real>::Identity(n, n);
        std::vector<double> acc = sweep<Real>(factors, q, true);
        double s = 0.0;
        for (double a : acc) s += 2.0 * a;
        return s;
    });
}

}  // namespace ginibre
