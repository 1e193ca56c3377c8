#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "mzjm/error.hpp"

namespace mzjm {

using cplx = std::complex<double>;

/// Tolerance used for every Hermiticity / unitarity comparison (max-entry norm).
inline constexpr double kStructureTol = 1e-10;

/// Dense square complex matrix, row-major. Sized for the small operators this
/// library deals with (quanton 2x2, detector up to 8x8, joint 16x16).
class CMatrix {
public:
    CMatrix() = default;
    explicit CMatrix(std::size_t dim);
    CMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static CMatrix zero(std::size_t dim) { return CMatrix(dim); }
    static CMatrix identity(std::size_t dim);
    static CMatrix diagonal(std::span<const double> values);

    std::size_t dim() const noexcept { return dim_; }
    bool empty() const noexcept { return dim_ == 0; }

    cplx &operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
    const cplx &operator()(std::size_t row, std::size_t col) const { return data_[row * dim_ + col]; }

    std::span<const cplx> data() const noexcept { return data_; }

    CMatrix adjoint() const;
    cplx trace() const;
    /// Largest |entry|.
    double max_abs() const;
    double frobenius_norm() const;

    CMatrix &operator+=(const CMatrix &rhs);
    CMatrix &operator-=(const CMatrix &rhs);
    CMatrix &operator*=(cplx scale);

    friend CMatrix operator+(CMatrix lhs, const CMatrix &rhs) { return lhs += rhs; }
    friend CMatrix operator-(CMatrix lhs, const CMatrix &rhs) { return lhs -= rhs; }
    friend CMatrix operator*(CMatrix lhs, cplx scale) { return lhs *= scale; }
    friend CMatrix operator*(cplx scale, CMatrix rhs) { return rhs *= scale; }
    friend CMatrix operator*(const CMatrix &lhs, const CMatrix &rhs);

    friend bool operator==(const CMatrix &, const CMatrix &) = default;

private:
    std::size_t dim_ = 0;
    std::vector<cplx> data_;
};

/// max |a_ij - b_ij|; throws DimensionMismatch on unequal dimensions.
double max_abs_diff(const CMatrix &a, const CMatrix &b);

bool is_hermitian(const CMatrix &a, double tol = kStructureTol);
bool is_unitary(const CMatrix &a, double tol = kStructureTol);

/// Column `col` of `a` as a vector.
std::vector<cplx> column(const CMatrix &a, std::size_t col);

/// <v| A |v> for a column of `basis`.
cplx expectation_in_column(const CMatrix &a, const CMatrix &basis, std::size_t col);

/// U A U^dagger.
CMatrix conjugate_by(const CMatrix &u, const CMatrix &a);

struct EigDecomposition {
    std::vector<double> eigenvalues;  // ascending
    CMatrix eigenvectors;             // orthonormal columns
};

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Eigenvalues come back ascending. Each eigenvector is phase-fixed so that its
/// first component with modulus above 1e-10 is real and positive, which makes
/// the result reproducible for a given input.
///
/// Throws NotHermitian when ||A - A^dagger||_max > 1e-10 and NoConvergence when
/// 100 sweeps do not bring the off-diagonal norm below 1e-12 ||A||_F.
EigDecomposition hermitian_eig(const CMatrix &a);

/// Sum of |eigenvalues|. Throws NotHermitian.
double trace_norm(const CMatrix &a);

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const CMatrix &a);

CMatrix kron(const CMatrix &a, const CMatrix &b);

/// Traces out the second tensor factor of dimension `detector_dim`; the quanton
/// is the first factor. Throws DimensionMismatch unless detector_dim divides
/// the matrix dimension.
CMatrix partial_trace_detector(const CMatrix &m, std::size_t detector_dim);

/// F(rho, U rho U^dagger) for a qubit density matrix via
/// sqrt(tr(rho U rho U^dagger) + 2 det rho). Result is clamped into [0, 1].
/// Throws InvalidState / NotUnitary / BadDimension.
double fidelity_unitary_pair(const CMatrix &rho, const CMatrix &u);

/// Validation shared by every density-matrix input: Hermitian, unit trace and
/// eigenvalues >= -1e-10. Throws InvalidState with a reason otherwise.
void require_density_matrix(const CMatrix &rho, const char *what);

}  // namespace mzjm
