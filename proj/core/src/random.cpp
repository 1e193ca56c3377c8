#include "mzjm/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace mzjm {

namespace {

constexpr std::size_t kMinDim = 2;
constexpr std::size_t kMaxDim = 8;

void require_dim(std::size_t dim) {
    if (dim < kMinDim || dim > kMaxDim) {
        throw Error(ErrorKind::BadDimension, "detector dimension " + std::to_string(dim) + " outside [2, 8]");
    }
}

cplx gaussian_complex(Rng &rng) {
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

CMatrix gaussian_matrix(std::size_t dim, Rng &rng) {
    CMatrix g(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) g(i, j) = gaussian_complex(rng);
    }
    return g;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) noexcept {
    std::uint64_t z = base_seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double uniform01(Rng &rng) noexcept { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

BlochVector random_direction(Rng &rng) {
    const double z = 2.0 * uniform01(rng) - 1.0;
    const double az = 2.0 * std::numbers::pi * uniform01(rng);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(az), r * std::sin(az), z};
}

QubitState random_qubit_state(Rng &rng) {
    const double radius = std::cbrt(uniform01(rng));
    return QubitState::from_bloch(random_direction(rng) * radius);
}

QubitState random_qubit_state(std::uint64_t seed) {
    Rng rng(seed);
    return random_qubit_state(rng);
}

CMatrix random_detector_state(std::size_t dim, Rng &rng) {
    require_dim(dim);
    const CMatrix g = gaussian_matrix(dim, rng);
    CMatrix rho = g * g.adjoint();
    rho *= 1.0 / rho.trace().real();
    // Remove rounding asymmetry so downstream Hermiticity checks see an exact adjoint.
    return 0.5 * (rho + rho.adjoint());
}

CMatrix random_detector_state(std::size_t dim, std::uint64_t seed) {
    Rng rng(seed);
    return random_detector_state(dim, rng);
}

CMatrix random_pure_detector_state(std::size_t dim, Rng &rng) {
    require_dim(dim);
    std::vector<cplx> psi(dim);
    double norm2 = 0.0;
    for (auto &c : psi) {
        c = gaussian_complex(rng);
        norm2 += std::norm(c);
    }
    const double inv = 1.0 / std::sqrt(norm2);
    CMatrix rho(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) rho(i, j) = psi[i] * std::conj(psi[j]) * inv * inv;
    }
    return 0.5 * (rho + rho.adjoint());
}

CMatrix random_unitary(std::size_t dim, Rng &rng) {
    require_dim(dim);
    CMatrix q = gaussian_matrix(dim, rng);
    // Modified Gram-Schmidt, twice for numerical orthogonality.
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t k = 0; k < dim; ++k) {
            for (std::size_t j = 0; j < k; ++j) {
                cplx proj{0.0, 0.0};
                for (std::size_t i = 0; i < dim; ++i) proj += std::conj(q(i, j)) * q(i, k);
                for (std::size_t i = 0; i < dim; ++i) q(i, k) -= proj * q(i, j);
            }
            double norm2 = 0.0;
            for (std::size_t i = 0; i < dim; ++i) norm2 += std::norm(q(i, k));
            const double inv = 1.0 / std::sqrt(norm2);
            for (std::size_t i = 0; i < dim; ++i) q(i, k) *= inv;
        }
    }
    return q;
}

CMatrix random_unitary(std::size_t dim, std::uint64_t seed) {
    Rng rng(seed);
    return random_unitary(dim, rng);
}

}  // namespace mzjm
