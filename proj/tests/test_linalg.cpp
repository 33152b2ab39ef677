#include "ginibre/ensemble.hpp"
#include "ginibre/linalg.hpp"

#include "doctest.h"

#include <Eigen/SVD>

#include <cmath>

using namespace ginibre;

namespace {

std::vector<ComplexMatrix> ginibre_chain(int N, int M, std::uint64_t seed) {
    std::vector<ComplexMatrix> f;
    for (int j = 0; j < M; ++j) f.push_back(sample_ginibre(N, N, derive_seed(seed, static_cast<std::uint64_t>(j))));
    return f;
}

double offdiag_identity(const ComplexMatrix& Q) {
    return (Q.adjoint() * Q - ComplexMatrix::Identity(Q.cols(), Q.cols())).norm();
}

}  // namespace

TEST_CASE("householder_qr basics") {
    const ComplexMatrix I3 = ComplexMatrix::Identity(3, 3);
    const auto qr = householder_qr<double>(I3);
    CHECK((qr.Q - I3).norm() < 1e-15);
    CHECK((qr.R - I3).norm() < 1e-15);

    ComplexMatrix D = ComplexMatrix::Zero(2, 2);
    D(0, 0) = 2;
    D(1, 1) = 3;
    const auto qd = householder_qr<double>(D);
    CHECK(std::abs(qd.R(0, 0) - 2.0) < 1e-15);
    CHECK(std::abs(qd.R(1, 1) - 3.0) < 1e-15);

    const ComplexMatrix A = sample_ginibre(5, 3, 42);
    const auto q = householder_qr<double>(A);
    CHECK((A - q.Q * q.R).norm() <= 1e-12 * A.norm());
    CHECK(offdiag_identity(q.Q) <= 1e-12);
    for (int i = 0; i < 3; ++i) {
        CHECK(q.R(i, i).imag() == 0.0);
        CHECK(q.R(i, i).real() >= 0.0);
        for (int j = 0; j < i; ++j) CHECK(q.R(i, j) == std::complex<double>(0.0));
    }
    CHECK_THROWS_AS(householder_qr<double>(sample_ginibre(2, 3, 1)), ShapeError);
}

TEST_CASE("householder_qr at 113 bits") {
    using R = SoftReal<113>;
    const ComplexMatrix A = sample_ginibre(6, 4, 7);
    const CMatrix<R> Ah = A.cast<std::complex<R>>();
    const auto q = householder_qr<R>(Ah);
    const CMatrix<R> E = Ah - q.Q * q.R;
    R e = 0;
    for (Eigen::Index i = 0; i < E.size(); ++i) e += abs2(E(i));
    CHECK(static_cast<double>(sqrt(e)) < 1e-30);
}

TEST_CASE("jacobi_svd basics") {
    ComplexMatrix D = ComplexMatrix::Zero(3, 3);
    D(0, 0) = 1;
    D(1, 1) = 3;
    D(2, 2) = 2;
    const auto s = jacobi_svd<double>(D);
    CHECK(s.sigma == std::vector<double>{3.0, 2.0, 1.0});

    const auto qr = householder_qr<double>(sample_ginibre(4, 4, 3));
    for (double v : jacobi_svd<double>(qr.Q).sigma) CHECK(std::abs(v - 1.0) < 1e-12);
}

TEST_CASE("jacobi_svd 3x2 against the characteristic polynomial") {
    const ComplexMatrix A = sample_ginibre(3, 2, 11);
    const ComplexMatrix G = A.adjoint() * A;
    const double tr = (G(0, 0) + G(1, 1)).real();
    const double det = (G(0, 0) * G(1, 1) - G(0, 1) * G(1, 0)).real();
    const double disc = std::sqrt(tr * tr - 4 * det);
    const double l1 = 0.5 * (tr + disc), l2 = det / l1;
    const auto s = jacobi_svd<double>(A);
    REQUIRE(s.sigma.size() == 2);
    CHECK(std::abs(s.sigma[0] * s.sigma[0] - l1) <= 1e-10 * l1);
    CHECK(std::abs(s.sigma[1] * s.sigma[1] - l2) <= 1e-10 * l2);
}

TEST_CASE("jacobi_svd against Eigen BDCSVD and vectors") {
    for (auto [m, n] : {std::pair{7, 7}, std::pair{9, 4}, std::pair{3, 8}}) {
        const ComplexMatrix A = sample_ginibre(m, n, 100 + m * n);
        JacobiOptions opt;
        opt.vectors = true;
        const auto s = jacobi_svd<double>(A, opt);
        Eigen::BDCSVD<ComplexMatrix> ref(A);
        for (std::size_t i = 0; i < s.sigma.size(); ++i)
            CHECK(std::abs(s.sigma[i] - ref.singularValues()(static_cast<Eigen::Index>(i))) <= 1e-12 * s.sigma[0]);
        Eigen::VectorXd sv = Eigen::Map<const Eigen::VectorXd>(s.sigma.data(), static_cast<Eigen::Index>(s.sigma.size()));
        const ComplexMatrix rec = s.U * sv.cast<std::complex<double>>().asDiagonal() * s.V.adjoint();
        CHECK((rec - A).norm() <= 1e-12 * A.norm());
    }
}

TEST_CASE("jacobi_svd keeps relative accuracy on column-scaled input") {
    ComplexMatrix A = sample_ginibre(5, 3, 9);
    A.col(1) *= 1e-8;
    A.col(2) *= 1e-15;
    const auto lo = jacobi_svd<double>(A);
    using R = SoftReal<113>;
    const auto hi = jacobi_svd<R>(A.cast<std::complex<R>>());
    for (std::size_t i = 0; i < 3; ++i) {
        const double h = static_cast<double>(hi.sigma[i]);
        CHECK(std::abs(lo.sigma[i] - h) <= 1e-10 * h);
    }
}

TEST_CASE("product_log_spectrum identities") {
    const PrecisionContext ctx;
    const ComplexMatrix X = sample_ginibre(4, 4, 5);
    const auto one = product_log_spectrum({X}, SpectrumMode::dense, ctx);
    const auto s = jacobi_svd<double>(X);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(one.values[i] - 2 * std::log(s.sigma[i])) < 1e-13);

    const ComplexMatrix I3 = ComplexMatrix::Identity(3, 3);
    for (auto mode : {SpectrumMode::dense, SpectrumMode::qr_sweep}) {
        const auto z = product_log_spectrum({I3, I3, I3}, mode, ctx);
        for (double v : z.values) CHECK(std::abs(v) < 1e-14);
    }
    CHECK_THROWS_AS(product_log_spectrum({}, SpectrumMode::dense, ctx), DomainError);
    CHECK_THROWS_AS(product_log_spectrum({sample_ginibre(3, 2, 1), sample_ginibre(3, 2, 2)}, SpectrumMode::dense, ctx),
                    ShapeError);
}

TEST_CASE("product_log_spectrum: 53 bits against 240 bits") {
    const auto f = ginibre_chain(3, 20, 2024);
    const auto lo = product_log_spectrum(f, SpectrumMode::dense, PrecisionContext{53});
    PrecisionContext hi_ctx;
    hi_ctx.mantissa_bits = 240;
    const auto hi = product_log_spectrum(f, SpectrumMode::dense, hi_ctx);
    CHECK(hi.reliable_count == 3);
    CHECK(lo.reliable_count >= 1);
    for (int i = 0; i < lo.reliable_count; ++i) CHECK(std::abs(lo.values[i] - hi.values[i]) <= 1e-8);
    // refinement: 240-bit values differ from 53-bit ones only where 53 bits is unreliable
    for (int i = 0; i < 3; ++i) CHECK(std::isfinite(hi.values[i]));
}

TEST_CASE("sum of log spectrum equals log det of the Gram matrix") {
    for (int M : {1, 5, 30}) {
        const auto f = ginibre_chain(4, M, 77 + M);
        PrecisionContext ctx;
        ctx.mantissa_bits = M > 5 ? 240 : 53;
        const auto s = product_log_spectrum(f, SpectrumMode::dense, ctx);
        REQUIRE(s.reliable_count == 4);
        double sum = 0.0;
        for (double v : s.values) sum += v;
        CHECK(std::abs(sum - log_gram_determinant(f, PrecisionContext{})) <= 1e-8 * std::max(1.0, std::abs(sum)));
    }
}

TEST_CASE("dense and qr_sweep agree on the top value") {
    for (int N : {1, 2, 4})
        for (int M : {1, 10, 50}) {
            const auto f = ginibre_chain(N, M, 1000 + 10 * N + M);
            const auto d = product_log_spectrum(f, SpectrumMode::dense, PrecisionContext{});
            const auto q = product_log_spectrum(f, SpectrumMode::qr_sweep, PrecisionContext{});
            CAPTURE(N);
            CAPTURE(M);
            CHECK(std::abs(d.values[0] - q.values[0]) <= 1e-6);
            CHECK(q.reliable_count == N);
        }
}

TEST_CASE("rectangular chains") {
    // shapes (N+v_j) x (N+v_{j-1}) with N = 2, v = (1, 3)
    std::vector<ComplexMatrix> f = {sample_ginibre(3, 2, 1), sample_ginibre(5, 3, 2)};
    CHECK(check_chain(f) == 2);
    const auto d = product_log_spectrum(f, SpectrumMode::dense, PrecisionContext{});
    CHECK(d.values.size() == 2);
    const ComplexMatrix Y = f[1] * f[0];
    const auto s = jacobi_svd<double>(Y);
    CHECK(std::abs(d.values[0] - 2 * std::log(s.sigma[0])) < 1e-12);
    CHECK(std::abs(d.values[1] - 2 * std::log(s.sigma[1])) < 1e-12);
}

TEST_CASE("precision context") {
    CHECK(PrecisionContext{53}.tier_bits() == 53);
    CHECK(PrecisionContext{54}.tier_bits() == 113);
    CHECK(PrecisionContext{209}.tier_bits() == 240);
    CHECK_THROWS_AS(PrecisionContext{52}.tier_bits(), DomainError);
    CHECK_THROWS_AS(PrecisionContext{4096}.tier_bits(), DomainError);
}

TEST_CASE("spectrum mode parsing") {
    CHECK(parse_spectrum_mode("dense") == SpectrumMode::dense);
    CHECK(parse_spectrum_mode("qr_sweep") == SpectrumMode::qr_sweep);
    CHECK_THROWS_AS(parse_spectrum_mode("svd"), DomainError);
}
