#pragma once

#include <cstdint>
#include <random>

#include "mzjm/linalg.hpp"
#include "mzjm/qubit.hpp"

namespace mzjm {

/// The library's generator: 64-bit Mersenne Twister (std::mt19937_64).
using Rng = std::mt19937_64;

/// SplitMix64 mix of (base_seed, index). Parallel sweeps use this so that
/// instance k gets the same stream no matter which worker runs it.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) noexcept;

/// Uniform double in [0, 1) built from the top 53 bits of one draw.
double uniform01(Rng &rng) noexcept;

/// Uniform on the unit sphere.
BlochVector random_direction(Rng &rng);

/// Uniform over the Bloch ball (radius u^{1/3}, isotropic direction).
QubitState random_qubit_state(Rng &rng);
QubitState random_qubit_state(std::uint64_t seed);

/// Hilbert-Schmidt random density matrix G G^dagger / tr(G G^dagger), d in [2, 8].
CMatrix random_detector_state(std::size_t dim, Rng &rng);
CMatrix random_detector_state(std::size_t dim, std::uint64_t seed);

/// |psi><psi| with psi a normalised complex Gaussian vector, d in [2, 8].
CMatrix random_pure_detector_state(std::size_t dim, Rng &rng);

/// Haar unitary: Gram-Schmidt on a complex Gaussian matrix (R has a positive
/// real diagonal, which is the phase fix). d in [2, 8].
CMatrix random_unitary(std::size_t dim, Rng &rng);
CMatrix random_unitary(std::size_t dim, std::uint64_t seed);

}  // namespace mzjm
