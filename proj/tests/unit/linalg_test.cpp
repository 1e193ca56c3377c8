#include <cmath>
#include <numbers>

#include "unit/test_util.hpp"

using namespace mzjm;
using mzjm::testing::kBaseSeed;
using mzjm::testing::random_hermitian;
using mzjm::testing::seed_tag;

namespace {

double reconstruction_error(const CMatrix &a, const EigDecomposition &eig) {
    const CMatrix lambda = CMatrix::diagonal(eig.eigenvalues);
    return max_abs_diff(a, eig.eigenvectors * lambda * eig.eigenvectors.adjoint());
}

}  // namespace

TEST(HermitianEig, DiagonalInputGivesPermutedIdentity) {
    const CMatrix a{{1.0, 0.0}, {0.0, -1.0}};
    const auto eig = hermitian_eig(a);
    ASSERT_EQ(eig.eigenvalues.size(), 2u);
    EXPECT_DOUBLE_EQ(eig.eigenvalues[0], -1.0);
    EXPECT_DOUBLE_EQ(eig.eigenvalues[1], 1.0);
    const CMatrix swap{{0.0, 1.0}, {1.0, 0.0}};
    EXPECT_LE(max_abs_diff(eig.eigenvectors, swap), 1e-15);
}

TEST(HermitianEig, PauliXSpectrumAndPhaseConvention) {
    const auto eig = hermitian_eig(pauli_x());
    EXPECT_NEAR(eig.eigenvalues[0], -1.0, 1e-14);
    EXPECT_NEAR(eig.eigenvalues[1], 1.0, 1e-14);
    const double h = 1.0 / std::numbers::sqrt2;
    // (|0> - |1>)/sqrt2 and (|0> + |1>)/sqrt2, first component real positive
    const CMatrix expected{{h, h}, {-h, h}};
    EXPECT_LE(max_abs_diff(eig.eigenvectors, expected), 1e-14);
}

TEST(HermitianEig, FrozenThreeByThreeSpectrum) {
    // Reference spectrum from numpy.linalg.eigvalsh.
    const CMatrix a{{2.0, cplx{1.0, -1.0}, cplx{0.0, 0.5}},
                    {cplx{1.0, 1.0}, -1.0, 0.3},
                    {cplx{0.0, -0.5}, 0.3, 0.7}};
    const auto eig = hermitian_eig(a);
    EXPECT_NEAR(eig.eigenvalues[0], -1.6416310555129758, 1e-12);
    EXPECT_NEAR(eig.eigenvalues[1], 0.698242028736756, 1e-12);
    EXPECT_NEAR(eig.eigenvalues[2], 2.6433890267762199, 1e-12);
    EXPECT_NEAR(trace_norm(a), 4.9832621110259518, 1e-12);
}

TEST(HermitianEig, RandomReconstructionOrthonormalityAndResidual) {
    Rng rng(kBaseSeed);
    for (std::size_t dim = 2; dim <= 8; ++dim) {
        for (int trial = 0; trial < 200; ++trial) {
            SCOPED_TRACE(seed_tag(kBaseSeed) + " dim=" + std::to_string(dim) + " trial=" + std::to_string(trial));
            const CMatrix a = random_hermitian(dim, rng);
            const auto eig = hermitian_eig(a);
            EXPECT_LE(reconstruction_error(a, eig), 1e-10);
            EXPECT_LE(max_abs_diff(eig.eigenvectors.adjoint() * eig.eigenvectors, CMatrix::identity(dim)), 1e-10);
            EXPECT_TRUE(std::is_sorted(eig.eigenvalues.begin(), eig.eigenvalues.end()));
            const double scale = a.frobenius_norm();
            for (std::size_t k = 0; k < dim; ++k) {
                double residual = 0.0;
                for (std::size_t i = 0; i < dim; ++i) {
                    cplx av{0.0, 0.0};
                    for (std::size_t j = 0; j < dim; ++j) av += a(i, j) * eig.eigenvectors(j, k);
                    residual += std::norm(av - eig.eigenvalues[k] * eig.eigenvectors(i, k));
                }
                EXPECT_LE(std::sqrt(residual), 1e-10 * scale);
            }
        }
    }
}

TEST(HermitianEig, DeterministicAndPhaseFixed) {
    Rng rng(kBaseSeed + 1);
    const CMatrix a = random_hermitian(5, rng);
    const auto first = hermitian_eig(a);
    const auto second = hermitian_eig(a);
    EXPECT_EQ(first.eigenvalues, second.eigenvalues);
    EXPECT_EQ(first.eigenvectors, second.eigenvectors);
    for (std::size_t k = 0; k < 5; ++k) {
        for (std::size_t i = 0; i < 5; ++i) {
            const cplx c = first.eigenvectors(i, k);
            if (std::abs(c) > 1e-10) {
                EXPECT_GT(c.real(), 0.0);
                EXPECT_NEAR(c.imag(), 0.0, 1e-15);
                break;
            }
        }
    }
}

TEST(HermitianEig, DegenerateSpectrum) {
    Rng rng(kBaseSeed + 2);
    const CMatrix u = random_unitary(4, rng);
    const std::vector<double> values{0.5, 0.5, -1.0, 2.0};
    const CMatrix a = conjugate_by(u, CMatrix::diagonal(values));
    const auto eig = hermitian_eig(a);
    EXPECT_NEAR(eig.eigenvalues[0], -1.0, 1e-12);
    EXPECT_NEAR(eig.eigenvalues[1], 0.5, 1e-12);
    EXPECT_NEAR(eig.eigenvalues[2], 0.5, 1e-12);
    EXPECT_NEAR(eig.eigenvalues[3], 2.0, 1e-12);
    EXPECT_LE(reconstruction_error(a, eig), 1e-10);
    EXPECT_NO_THROW(hermitian_eig(CMatrix::zero(3)));
    EXPECT_NO_THROW(hermitian_eig(CMatrix::identity(8)));
}

TEST(HermitianEig, RejectsNonHermitian) {
    const CMatrix a{{1.0, 1.0}, {0.0, 1.0}};
    try {
        hermitian_eig(a);
        FAIL() << "expected NotHermitian";
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotHermitian);
    }
    EXPECT_THROW(trace_norm(a), Error);
}

TEST(TraceNorm, ClosedFormCases) {
    EXPECT_DOUBLE_EQ(trace_norm(CMatrix::zero(3)), 0.0);
    EXPECT_NEAR(trace_norm(pauli_z()), 2.0, 1e-15);
    // 2x2 closed form: eigenvalues t/2 +- sqrt(((a-d)/2)^2 + |b|^2).
    Rng rng(kBaseSeed + 3);
    for (int trial = 0; trial < 1000; ++trial) {
        const CMatrix a = random_hermitian(2, rng);
        const double mean = 0.5 * (a(0, 0) + a(1, 1)).real();
        const double radius = std::hypot(0.5 * (a(0, 0) - a(1, 1)).real(), std::abs(a(0, 1)));
        EXPECT_NEAR(trace_norm(a), std::abs(mean + radius) + std::abs(mean - radius), 1e-12);
    }
}

TEST(TraceNorm, BoundsAndUnitaryInvariance) {
    Rng rng(kBaseSeed + 4);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t dim = 2 + static_cast<std::size_t>(trial % 7);
        SCOPED_TRACE(seed_tag(kBaseSeed + 4) + " trial=" + std::to_string(trial));
        const CMatrix a = random_hermitian(dim, rng);
        const CMatrix u = random_unitary(dim, rng);
        const double norm = trace_norm(a);
        EXPECT_GE(norm + 1e-12, std::abs(a.trace()));
        // Variational bound |tr(U A)| <= ||A||_1.
        EXPECT_GE(norm + 1e-12, std::abs((u * a).trace()));
        EXPECT_NEAR(trace_norm(conjugate_by(u, a)), norm, 1e-10 * std::max(1.0, norm));
    }
}

TEST(Kron, IdentityAndPartialTrace) {
    EXPECT_EQ(kron(CMatrix::identity(2), CMatrix::identity(2)), CMatrix::identity(4));
    Rng rng(kBaseSeed + 5);
    for (std::size_t d = 2; d <= 8; ++d) {
        const QubitState rho = random_qubit_state(rng);
        const CMatrix rho_d = random_detector_state(d, rng);
        EXPECT_LE(max_abs_diff(partial_trace_detector(kron(rho.matrix(), rho_d), d), rho.matrix()), 1e-14);

        const CMatrix x = random_hermitian(d, rng);
        EXPECT_LE(max_abs_diff(partial_trace_detector(kron(rho.matrix(), x), d), x.trace() * rho.matrix()), 1e-12);

        const CMatrix m = random_hermitian(2 * d, rng);
        EXPECT_NEAR(std::abs(partial_trace_detector(m, d).trace() - m.trace()), 0.0, 1e-12);
    }
}

TEST(Kron, PartialTraceDimensionMismatch) {
    try {
        partial_trace_detector(CMatrix::identity(6), 4);
        FAIL() << "expected DimensionMismatch";
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
    }
    EXPECT_THROW(CMatrix::identity(2) * CMatrix::identity(3), Error);
}

TEST(Fidelity, IdentityUnitaryAndMaximallyMixed) {
    Rng rng(kBaseSeed + 6);
    for (int trial = 0; trial < 200; ++trial) {
        const QubitState rho = random_qubit_state(rng);
        EXPECT_NEAR(fidelity_unitary_pair(rho.matrix(), CMatrix::identity(2)), 1.0, 1e-12);
        EXPECT_NEAR(fidelity_unitary_pair(0.5 * CMatrix::identity(2), random_unitary(2, rng)), 1.0, 1e-12);
    }
}

TEST(Fidelity, HalfRadiusQuarterTurn) {
    // a = 0.25, b = 0  ->  F = sqrt(1 - (a - b)/2) = sqrt(0.875)
    const QubitState rho = QubitState::from_bloch({0.0, 0.0, 0.5});
    const double f = fidelity_unitary_pair(rho.matrix(), mzjm::testing::x_rotation(std::numbers::pi / 2.0));
    EXPECT_NEAR(f, std::sqrt(0.875), 1e-14);
}

TEST(Fidelity, MatchesUhlmannRouteAndStaysInUnitInterval) {
    Rng rng(kBaseSeed + 7);
    for (int trial = 0; trial < 10000; ++trial) {
        const CMatrix rho = random_detector_state(2, rng);
        const CMatrix u = random_unitary(2, rng);
        const double f = fidelity_unitary_pair(rho, u);
        ASSERT_GE(f, 0.0);
        ASSERT_LE(f, 1.0);
        if (trial % 20 == 0) {
            // F = tr sqrt(sqrt(rho) sigma sqrt(rho)) via two eigendecompositions.
            const auto eig = hermitian_eig(rho);
            std::vector<double> roots;
            for (double l : eig.eigenvalues) roots.push_back(std::sqrt(std::max(0.0, l)));
            const CMatrix sqrt_rho = eig.eigenvectors * CMatrix::diagonal(roots) * eig.eigenvectors.adjoint();
            CMatrix inner = sqrt_rho * conjugate_by(u, rho) * sqrt_rho;
            inner = 0.5 * (inner + inner.adjoint());
            double uhlmann = 0.0;
            for (double l : hermitian_eig(inner).eigenvalues) uhlmann += std::sqrt(std::max(0.0, l));
            EXPECT_NEAR(f, uhlmann, 1e-7) << seed_tag(kBaseSeed + 7) << " trial=" << trial;
        }
    }
}

TEST(Fidelity, ValidatesInputs) {
    const CMatrix not_psd{{1.5, 0.0}, {0.0, -0.5}};
    try {
        fidelity_unitary_pair(not_psd, CMatrix::identity(2));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidState);
    }
    try {
        fidelity_unitary_pair(0.5 * CMatrix::identity(2), 2.0 * CMatrix::identity(2));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotUnitary);
    }
}
