#pragma once

#include <array>
#include <cmath>

#include "mzjm/linalg.hpp"

namespace mzjm {

/// Real 3-vector in Bloch coordinates.
struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const { return std::sqrt(x * x + y * y + z * z); }

    BlochVector &operator+=(const BlochVector &o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    BlochVector &operator-=(const BlochVector &o) {
        x -= o.x;
        y -= o.y;
        z -= o.z;
        return *this;
    }
    BlochVector &operator*=(double s) {
        x *= s;
        y *= s;
        z *= s;
        return *this;
    }

    friend BlochVector operator+(BlochVector a, const BlochVector &b) { return a += b; }
    friend BlochVector operator-(BlochVector a, const BlochVector &b) { return a -= b; }
    friend BlochVector operator-(BlochVector a) { return a *= -1.0; }
    friend BlochVector operator*(BlochVector a, double s) { return a *= s; }
    friend BlochVector operator*(double s, BlochVector a) { return a *= s; }
    friend bool operator==(const BlochVector &, const BlochVector &) = default;
};

inline double dot(const BlochVector &a, const BlochVector &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline BlochVector cross(const BlochVector &a, const BlochVector &b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

const CMatrix &pauli_x();
const CMatrix &pauli_y();
const CMatrix &pauli_z();

/// b . sigma
CMatrix bloch_dot_sigma(const BlochVector &b);

/// sigma_phi = sigma_z cos(phi) - sigma_y sin(phi), the observable read out at
/// the interferometer output for phase setting phi.
CMatrix pauli_phi(double phi);

/// A 2x2 density matrix. Construction validates Hermiticity, unit trace and
/// positivity (tolerance 1e-10).
class QubitState {
public:
    explicit QubitState(CMatrix matrix);
    /// (I + r . sigma) / 2; throws InvalidState when |r| > 1 + 1e-10.
    static QubitState from_bloch(const BlochVector &r);

    const CMatrix &matrix() const noexcept { return matrix_; }
    /// r with rho = (I + r . sigma) / 2.
    BlochVector bloch() const;

private:
    CMatrix matrix_;
};

/// A 2x2 operator with 0 <= E <= I (tolerance 1e-10).
class Effect {
public:
    explicit Effect(CMatrix matrix);
    const CMatrix &matrix() const noexcept { return matrix_; }

private:
    CMatrix matrix_;
};

struct BiasedBloch {
    double bias = 0.0;
    BlochVector vector;
};

/// bias I + b . sigma; throws InvalidEffect if that is not an effect.
Effect bloch_to_matrix(const BlochVector &b, double bias);
BiasedBloch matrix_to_bloch(const Effect &e);
/// Same decomposition for any Hermitian 2x2 operator (no effect check).
BiasedBloch decompose_hermitian(const CMatrix &m);

/// Two-outcome qubit observable {E0, E1 = I - E0} with E0 = bias I + vector . sigma.
struct BinaryQubitObservable {
    double bias = 0.5;
    BlochVector vector;

    /// |vector| <= min(bias, 1 - bias) + tol, i.e. both effects are positive.
    bool is_valid(double tol = kStructureTol) const;
    CMatrix effect_matrix(int outcome) const;
    Effect effect(int outcome) const { return Effect(effect_matrix(outcome)); }
};

}  // namespace mzjm
