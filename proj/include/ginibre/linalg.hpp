#pragma once

#include "ginibre/errors.hpp"
#include "ginibre/precision.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace ginibre {

template <class Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
using ComplexMatrix = CMatrix<double>;

template <class Real>
Real abs2(const std::complex<Real>& z) {
    return z.real() * z.real() + z.imag() * z.imag();
}

template <class Real>
Real column_norm2(const CMatrix<Real>& a, Eigen::Index j) {
    Real s = 0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) s += abs2(a(i, j));
    return s;
}

template <class Real>
struct QrResult {
    CMatrix<Real> Q;  // rows x cols, orthonormal columns
    CMatrix<Real> R;  // cols x cols, upper triangular, real nonnegative diagonal
};

template <class Real>
QrResult<Real> householder_qr(const CMatrix<Real>& A) {
    using std::sqrt;
    using C = std::complex<Real>;
    const Eigen::Index m = A.rows(), n = A.cols();
    if (m < n)
        throw ShapeError("householder_qr: rows (" + std::to_string(m) + ") < cols (" + std::to_string(n) + ")");
    CMatrix<Real> R = A;
    std::vector<Eigen::Matrix<C, Eigen::Dynamic, 1>> vs(static_cast<std::size_t>(n));
    std::vector<Real> beta(static_cast<std::size_t>(n), Real(0));
    for (Eigen::Index k = 0; k < n; ++k) {
        auto x = R.col(k).segment(k, m - k);
        Real xn2 = 0;
        for (Eigen::Index i = 0; i < x.size(); ++i) xn2 += abs2(x(i));
        if (xn2 == 0) continue;
        const Real xn = sqrt(xn2);
        const Real a0 = sqrt(abs2(x(0)));
        const C phase = a0 == 0 ? C(1) : x(0) / a0;
        const C alpha = -phase * xn;
        Eigen::Matrix<C, Eigen::Dynamic, 1> v = x;
        v(0) -= alpha;
        Real vn2 = 0;
        for (Eigen::Index i = 0; i < v.size(); ++i) vn2 += abs2(v(i));
        if (vn2 == 0) continue;
        const Real b = Real(2) / vn2;
        auto blk = R.block(k, k, m - k, n - k);
        Eigen::Matrix<C, 1, Eigen::Dynamic> w = v.adjoint() * blk;
        blk -= (v * b) * w;
        vs[static_cast<std::size_t>(k)] = std::move(v);
        beta[static_cast<std::size_t>(k)] = b;
    }
    CMatrix<Real> Q = CMatrix<Real>::Identity(m, n);
    for (Eigen::Index k = n - 1; k >= 0; --k) {
        const auto& v = vs[static_cast<std::size_t>(k)];
        if (beta[static_cast<std::size_t>(k)] == 0) continue;
        auto blk = Q.block(k, 0, m - k, n);
        Eigen::Matrix<C, 1, Eigen::Dynamic> w = v.adjoint() * blk;
        blk -= (v * beta[static_cast<std::size_t>(k)]) * w;
    }
    CMatrix<Real> Rn = CMatrix<Real>::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j) Rn(i, j) = R(i, j);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Real r = sqrt(abs2(Rn(k, k)));
        if (r == 0) continue;
        const C d = Rn(k, k) / r;
        Rn.row(k) *= std::conj(d);
        Rn(k, k) = C(r, Real(0));
        Q.col(k) *= d;
    }
    return {std::move(Q), std::move(Rn)};
}

template <class Real>
struct SvdResult {
    std::vector<Real> sigma;  // descending
    CMatrix<Real> U;          // rows x min(rows, cols), if requested
    CMatrix<Real> V;          // cols x min(rows, cols), if requested
    int sweeps = 0;
};

struct JacobiOptions {
    int max_sweeps = 30;
    bool vectors = false;
};

// Threshold on |<w_p, w_q>| / (|w_p| |w_q|) at which a column pair counts
// as orthogonal: sqrt(rows) * eps.
template <class Real>
Real jacobi_tolerance(Eigen::Index rows) {
    using std::sqrt;
    return sqrt(Real(static_cast<double>(rows))) * std::numeric_limits<Real>::epsilon();
}

template <class Real>
SvdResult<Real> jacobi_svd(const CMatrix<Real>& A, JacobiOptions opt = {}) {
    using std::sqrt;
    using std::abs;
    using C = std::complex<Real>;
    if (A.rows() < A.cols()) {
        SvdResult<Real> t = jacobi_svd<Real>(A.adjoint(), opt);
        std::swap(t.U, t.V);
        return t;
    }
    const Eigen::Index m = A.rows(), n = A.cols();
    CMatrix<Real> W = A;
    CMatrix<Real> V;
    if (opt.vectors) V = CMatrix<Real>::Identity(n, n);
    std::vector<Real> nrm(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j) nrm[static_cast<std::size_t>(j)] = column_norm2(W, j);
    const Real tol = jacobi_tolerance<Real>(m);

    SvdResult<Real> out;
    bool converged = n < 2;
    for (int sweep = 1; sweep <= opt.max_sweeps && !converged; ++sweep) {
        out.sweeps = sweep;
        bool rotated = false;
        for (Eigen::Index p = 0; p + 1 < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                Real& a = nrm[static_cast<std::size_t>(p)];
                Real& b = nrm[static_cast<std::size_t>(q)];
                if (a == 0 || b == 0) continue;
                C g{Real(0), Real(0)};
                for (Eigen::Index i = 0; i < m; ++i) g += std::conj(W(i, p)) * W(i, q);
                const Real gm = sqrt(abs2(g));
                if (gm <= tol * sqrt(a * b)) continue;
                rotated = true;
                const C e = std::conj(g / gm);
                const Real zeta = (b - a) / (2 * gm);
                const Real t = (zeta >= 0 ? Real(1) : Real(-1)) / (abs(zeta) + sqrt(1 + zeta * zeta));
                const Real cs = 1 / sqrt(1 + t * t);
                const Real sn = cs * t;
                for (Eigen::Index i = 0; i < m; ++i) {
                    const C wp = W(i, p), wq = W(i, q) * e;
                    W(i, p) = cs * wp - sn * wq;
                    W(i, q) = sn * wp + cs * wq;
                }
                if (opt.vectors) {
                    for (Eigen::Index i = 0; i < n; ++i) {
                        const C vp = V(i, p), vq = V(i, q) * e;
                        V(i, p) = cs * vp - sn * vq;
                        V(i, q) = sn * vp + cs * vq;
                    }
                }
                a = column_norm2(W, p);
                b = column_norm2(W, q);
            }
        }
        converged = !rotated;
    }
    if (!converged)
        throw NumericalError("jacobi_svd: no convergence after " + std::to_string(opt.max_sweeps) + " sweeps");

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index(0));
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
        return nrm[static_cast<std::size_t>(i)] > nrm[static_cast<std::size_t>(j)];
    });
    out.sigma.reserve(static_cast<std::size_t>(n));
    if (opt.vectors) {
        out.U = CMatrix<Real>::Zero(m, n);
        out.V = CMatrix<Real>::Zero(n, n);
    }
    for (Eigen::Index c = 0; c < n; ++c) {
        const Eigen::Index j = order[static_cast<std::size_t>(c)];
        const Real s = sqrt(column_norm2(W, j));
        out.sigma.push_back(s);
        if (opt.vectors) {
            if (s != 0) out.U.col(c) = W.col(j) / C(s);
            out.V.col(c) = V.col(j);
        }
    }
    return out;
}

enum class SpectrumMode { dense, qr_sweep };

SpectrumMode parse_spectrum_mode(const std::string& s);
std::string to_string(SpectrumMode m);

struct LogSpectrum {
    std::vector<double> values;  // 2 ln sigma_i, descending
    int reliable_count = 0;
    int iterations = 0;  // Jacobi sweeps (dense) or QR passes (qr_sweep)
};

// Log-error budget below which a value counts as reliable.
inline constexpr double reliability_budget = 1e-9;

// Checks that cols(factor j+1) == rows(factor j); returns the product width.
Eigen::Index check_chain(const std::vector<ComplexMatrix>& factors);

// Y = X_M ... X_1 with X_1 = factors.front().
LogSpectrum product_log_spectrum(const std::vector<ComplexMatrix>& factors, SpectrumMode mode,
                                 const PrecisionContext& ctx);

// ln det(Y^H Y) from one forward QR sweep.
double log_gram_determinant(const std::vector<ComplexMatrix>& factors, const PrecisionContext& ctx);

}  // namespace ginibre
