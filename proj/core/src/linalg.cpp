#include "mzjm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace mzjm {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagonalTol = 1e-12;
constexpr double kPhaseFixThreshold = 1e-10;

void require_same_dim(const CMatrix &a, const CMatrix &b, const char *op) {
    if (a.dim() != b.dim()) {
        throw Error(ErrorKind::DimensionMismatch,
                    std::string(op) + ": " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
    }
}

double off_diagonal_norm(const CMatrix &a) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < a.dim(); ++j) {
            if (i != j) sum += std::norm(a(i, j));
        }
    }
    return std::sqrt(sum);
}

// One complex Jacobi rotation annihilating a(p, q). The rotation is
// J = diag(1, conj(e)) * [[c, s], [-s, c]] restricted to (p, q), applied as
// A <- J^dagger A J and V <- V J.
void rotate(CMatrix &a, CMatrix &v, std::size_t p, std::size_t q) {
    const cplx g = a(p, q);
    const double mag = std::abs(g);
    if (mag == 0.0) return;
    const cplx e = g / mag;
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double tau = (aqq - app) / (2.0 * mag);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    const cplx j_pp = c;
    const cplx j_pq = s;
    const cplx j_qp = -s * std::conj(e);
    const cplx j_qq = c * std::conj(e);

    const std::size_t n = a.dim();
    for (std::size_t r = 0; r < n; ++r) {
        const cplx arp = a(r, p);
        const cplx arq = a(r, q);
        a(r, p) = arp * j_pp + arq * j_qp;
        a(r, q) = arp * j_pq + arq * j_qq;
        const cplx vrp = v(r, p);
        const cplx vrq = v(r, q);
        v(r, p) = vrp * j_pp + vrq * j_qp;
        v(r, q) = vrp * j_pq + vrq * j_qq;
    }
    for (std::size_t col = 0; col < n; ++col) {
        const cplx apc = a(p, col);
        const cplx aqc = a(q, col);
        a(p, col) = std::conj(j_pp) * apc + std::conj(j_qp) * aqc;
        a(q, col) = std::conj(j_pq) * apc + std::conj(j_qq) * aqc;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = a(p, p).real();
    a(q, q) = a(q, q).real();
}

}  // namespace

CMatrix::CMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, cplx{0.0, 0.0}) {}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<cplx>> rows) : CMatrix(rows.size()) {
    std::size_t i = 0;
    for (const auto &row : rows) {
        if (row.size() != dim_) {
            throw Error(ErrorKind::DimensionMismatch, "CMatrix literal must be square");
        }
        std::copy(row.begin(), row.end(), data_.begin() + static_cast<std::ptrdiff_t>(i * dim_));
        ++i;
    }
}

CMatrix CMatrix::identity(std::size_t dim) {
    CMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::diagonal(std::span<const double> values) {
    CMatrix m(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
}

CMatrix CMatrix::adjoint() const {
    CMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
    }
    return out;
}

cplx CMatrix::trace() const {
    cplx t{0.0, 0.0};
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

double CMatrix::max_abs() const {
    double m = 0.0;
    for (const auto &z : data_) m = std::max(m, std::abs(z));
    return m;
}

double CMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto &z : data_) s += std::norm(z);
    return std::sqrt(s);
}

CMatrix &CMatrix::operator+=(const CMatrix &rhs) {
    require_same_dim(*this, rhs, "operator+");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
    return *this;
}

CMatrix &CMatrix::operator-=(const CMatrix &rhs) {
    require_same_dim(*this, rhs, "operator-");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
    return *this;
}

CMatrix &CMatrix::operator*=(cplx scale) {
    for (auto &z : data_) z *= scale;
    return *this;
}

CMatrix operator*(const CMatrix &lhs, const CMatrix &rhs) {
    require_same_dim(lhs, rhs, "operator*");
    const std::size_t n = lhs.dim();
    CMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const cplx lik = lhs(i, k);
            if (lik == cplx{}) continue;
            for (std::size_t j = 0; j < n; ++j) out(i, j) += lik * rhs(k, j);
        }
    }
    return out;
}

double max_abs_diff(const CMatrix &a, const CMatrix &b) {
    require_same_dim(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k) m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
    return m;
}

bool is_hermitian(const CMatrix &a, double tol) { return max_abs_diff(a, a.adjoint()) <= tol; }

bool is_unitary(const CMatrix &a, double tol) {
    return max_abs_diff(a.adjoint() * a, CMatrix::identity(a.dim())) <= tol;
}

std::vector<cplx> column(const CMatrix &a, std::size_t col) {
    std::vector<cplx> v(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) v[i] = a(i, col);
    return v;
}

cplx expectation_in_column(const CMatrix &a, const CMatrix &basis, std::size_t col) {
    require_same_dim(a, basis, "expectation_in_column");
    cplx acc{0.0, 0.0};
    const std::size_t n = a.dim();
    for (std::size_t i = 0; i < n; ++i) {
        cplx row{0.0, 0.0};
        for (std::size_t j = 0; j < n; ++j) row += a(i, j) * basis(j, col);
        acc += std::conj(basis(i, col)) * row;
    }
    return acc;
}

CMatrix conjugate_by(const CMatrix &u, const CMatrix &a) { return u * a * u.adjoint(); }

EigDecomposition hermitian_eig(const CMatrix &input) {
    if (!is_hermitian(input)) {
        throw Error(ErrorKind::NotHermitian, "hermitian_eig input deviates from its adjoint");
    }
    const std::size_t n = input.dim();
    // Symmetrize so the rotations see an exactly Hermitian matrix.
    CMatrix a = 0.5 * (input + input.adjoint());
    CMatrix v = CMatrix::identity(n);
    const double scale = a.frobenius_norm();

    double off = off_diagonal_norm(a);
    for (int sweep = 0; sweep < kMaxSweeps && off > 1e-15 * scale; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) rotate(a, v, p, q);
        }
        const double next = off_diagonal_norm(a);
        if (next >= off && next <= kOffDiagonalTol * scale) {
            off = next;
            break;
        }
        off = next;
    }
    if (off > kOffDiagonalTol * scale) {
        throw Error(ErrorKind::NoConvergence,
                    "Jacobi sweeps exceeded cap, off-diagonal norm " + std::to_string(off));
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    EigDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = CMatrix(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = order[k];
        out.eigenvalues[k] = a(src, src).real();
        cplx phase{1.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) {
            const double mag = std::abs(v(i, src));
            if (mag > kPhaseFixThreshold) {
                phase = std::conj(v(i, src)) / mag;
                break;
            }
        }
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, src) * phase;
    }
    return out;
}

double trace_norm(const CMatrix &a) {
    const auto eig = hermitian_eig(a);
    double s = 0.0;
    for (double lambda : eig.eigenvalues) s += std::abs(lambda);
    return s;
}

double min_eigenvalue(const CMatrix &a) {
    const auto eig = hermitian_eig(a);
    return eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.front();
}

CMatrix kron(const CMatrix &a, const CMatrix &b) {
    const std::size_t na = a.dim();
    const std::size_t nb = b.dim();
    CMatrix out(na * nb);
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < na; ++j) {
            const cplx aij = a(i, j);
            for (std::size_t k = 0; k < nb; ++k) {
                for (std::size_t l = 0; l < nb; ++l) out(i * nb + k, j * nb + l) = aij * b(k, l);
            }
        }
    }
    return out;
}

CMatrix partial_trace_detector(const CMatrix &m, std::size_t detector_dim) {
    if (detector_dim == 0 || m.dim() % detector_dim != 0) {
        throw Error(ErrorKind::DimensionMismatch, "partial trace: dimension " + std::to_string(m.dim()) +
                                                      " not divisible by detector dimension " +
                                                      std::to_string(detector_dim));
    }
    const std::size_t nq = m.dim() / detector_dim;
    CMatrix out(nq);
    for (std::size_t a = 0; a < nq; ++a) {
        for (std::size_t b = 0; b < nq; ++b) {
            cplx s{0.0, 0.0};
            for (std::size_t j = 0; j < detector_dim; ++j) s += m(a * detector_dim + j, b * detector_dim + j);
            out(a, b) = s;
        }
    }
    return out;
}

void require_density_matrix(const CMatrix &rho, const char *what) {
    if (rho.empty()) throw Error(ErrorKind::InvalidState, std::string(what) + " is empty");
    if (!is_hermitian(rho)) throw Error(ErrorKind::InvalidState, std::string(what) + " is not Hermitian");
    if (std::abs(rho.trace() - cplx{1.0, 0.0}) > kStructureTol) {
        throw Error(ErrorKind::InvalidState, std::string(what) + " does not have unit trace");
    }
    if (min_eigenvalue(rho) < -kStructureTol) {
        throw Error(ErrorKind::InvalidState, std::string(what) + " has a negative eigenvalue");
    }
}

double fidelity_unitary_pair(const CMatrix &rho, const CMatrix &u) {
    if (rho.dim() != 2 || u.dim() != 2) {
        throw Error(ErrorKind::BadDimension, "fidelity_unitary_pair expects 2x2 inputs");
    }
    require_density_matrix(rho, "detector state");
    if (!is_unitary(u)) throw Error(ErrorKind::NotUnitary, "fidelity_unitary_pair: U is not unitary");

    const CMatrix rotated = conjugate_by(u, rho);
    const double overlap = (rho * rotated).trace().real();
    const double det = (rho(0, 0) * rho(1, 1) - rho(0, 1) * rho(1, 0)).real();
    const double value = std::clamp(overlap + 2.0 * det, 0.0, 1.0);
    return std::sqrt(value);
}

}  // namespace mzjm
