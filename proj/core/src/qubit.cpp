#include "mzjm/qubit.hpp"

#include <algorithm>
#include <string>

namespace mzjm {

namespace {
const cplx kI{0.0, 1.0};
}

const CMatrix &pauli_x() {
    static const CMatrix m{{0.0, 1.0}, {1.0, 0.0}};
    return m;
}

const CMatrix &pauli_y() {
    static const CMatrix m{{0.0, -kI}, {kI, 0.0}};
    return m;
}

const CMatrix &pauli_z() {
    static const CMatrix m{{1.0, 0.0}, {0.0, -1.0}};
    return m;
}

CMatrix bloch_dot_sigma(const BlochVector &b) {
    return CMatrix{{b.z, cplx{b.x, -b.y}}, {cplx{b.x, b.y}, -b.z}};
}

CMatrix pauli_phi(double phi) { return std::cos(phi) * pauli_z() - std::sin(phi) * pauli_y(); }

QubitState::QubitState(CMatrix matrix) : matrix_(std::move(matrix)) {
    if (matrix_.dim() != 2) throw Error(ErrorKind::InvalidState, "quanton state must be 2x2");
    require_density_matrix(matrix_, "quanton state");
}

QubitState QubitState::from_bloch(const BlochVector &r) {
    if (r.norm() > 1.0 + kStructureTol) {
        throw Error(ErrorKind::InvalidState, "Bloch vector longer than 1");
    }
    return QubitState(0.5 * (CMatrix::identity(2) + bloch_dot_sigma(r)));
}

BlochVector QubitState::bloch() const { return decompose_hermitian(matrix_).vector * 2.0; }

Effect::Effect(CMatrix matrix) : matrix_(std::move(matrix)) {
    if (matrix_.dim() != 2) throw Error(ErrorKind::InvalidEffect, "effect must be 2x2");
    if (!is_hermitian(matrix_)) throw Error(ErrorKind::InvalidEffect, "effect is not Hermitian");
    const auto eig = hermitian_eig(matrix_);
    if (eig.eigenvalues.front() < -kStructureTol || eig.eigenvalues.back() > 1.0 + kStructureTol) {
        throw Error(ErrorKind::InvalidEffect, "effect eigenvalues outside [0, 1]");
    }
}

BiasedBloch decompose_hermitian(const CMatrix &m) {
    if (m.dim() != 2) throw Error(ErrorKind::DimensionMismatch, "expected a 2x2 operator");
    BiasedBloch out;
    out.bias = 0.5 * (m(0, 0) + m(1, 1)).real();
    out.vector.x = 0.5 * (m(0, 1) + m(1, 0)).real();
    out.vector.y = 0.5 * (m(1, 0) - m(0, 1)).imag();
    out.vector.z = 0.5 * (m(0, 0) - m(1, 1)).real();
    return out;
}

Effect bloch_to_matrix(const BlochVector &b, double bias) {
    return Effect(bias * CMatrix::identity(2) + bloch_dot_sigma(b));
}

BiasedBloch matrix_to_bloch(const Effect &e) { return decompose_hermitian(e.matrix()); }

bool BinaryQubitObservable::is_valid(double tol) const {
    return vector.norm() <= std::min(bias, 1.0 - bias) + tol;
}

CMatrix BinaryQubitObservable::effect_matrix(int outcome) const {
    const CMatrix e0 = bias * CMatrix::identity(2) + bloch_dot_sigma(vector);
    return outcome == 0 ? e0 : CMatrix::identity(2) - e0;
}

}  // namespace mzjm
