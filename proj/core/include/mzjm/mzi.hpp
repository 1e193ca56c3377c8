#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "mzjm/linalg.hpp"
#include "mzjm/qubit.hpp"

namespace mzjm {

inline constexpr std::size_t kMinDetectorDim = 2;
inline constexpr std::size_t kMaxDetectorDim = 8;

/// Mach-Zehnder interferometer with a which-path detector.
///
/// Both beam splitters are Hadamards, the phase shifter is exp(i phi sigma_z / 2)
/// and the quanton/detector coupling is |0><0| (x) I + |1><1| (x) U applied after
/// the first beam splitter.
class MZISetup {
public:
    /// Throws InvalidState (rho_D not a density matrix), NotUnitary,
    /// BadDimension (d outside [2, 8]) or DimensionMismatch (rho_D vs U).
    MZISetup(QubitState rho, CMatrix rho_detector, CMatrix detector_unitary, double phi);

    const QubitState &rho() const noexcept { return rho_; }
    const CMatrix &rho_detector() const noexcept { return rho_detector_; }
    const CMatrix &detector_unitary() const noexcept { return unitary_; }
    double phi() const noexcept { return phi_; }
    std::size_t detector_dim() const noexcept { return rho_detector_.dim(); }

    /// U rho_D U^dagger
    CMatrix rotated_detector() const { return conjugate_by(unitary_, rho_detector_); }

private:
    QubitState rho_;
    CMatrix rho_detector_;
    CMatrix unitary_;
    double phi_;
};

/// Projective readout of the detector in `basis` (orthonormal columns |W>) with
/// the guess "path 0" for outcomes in S and "path 1" otherwise.
class Strategy {
public:
    /// Throws InvalidStrategy when the columns are not orthonormal (1e-10) or
    /// an index is out of range.
    Strategy(CMatrix basis, const std::vector<std::size_t> &subset);

    static Strategy all_outcomes(CMatrix basis);
    static Strategy no_outcomes(CMatrix basis);

    const CMatrix &basis() const noexcept { return basis_; }
    std::size_t dim() const noexcept { return basis_.dim(); }
    bool in_s(std::size_t outcome) const { return in_s_.at(outcome); }
    std::vector<std::size_t> subset() const;
    Strategy complement() const;

private:
    Strategy(CMatrix basis, std::vector<bool> in_s);

    CMatrix basis_;
    std::vector<bool> in_s_;
};

struct StrategyStats {
    double eta_S = 0.0;
    double eta_Sbar = 0.0;
    double eta_S_U = 0.0;
    double eta_Sbar_U = 0.0;
};

struct AprioriVisibility {
    double V0 = 0.0;
    double phi0 = 0.0;  // arg <-|rho|+>; 0 when V0 < 1e-12
};

struct PathWeights {
    double P = 0.0;
    double w_plus = 0.5;
    double w_minus = 0.5;
};

struct DetectorVisibility {
    double V = 0.0;
    double delta = 0.0;     // arg tr(rho_D U^dagger); 0 when contrast < 1e-12
    double contrast = 0.0;  // |tr(U rho_D)|
};

struct DualityReport {
    double V0 = 0.0;
    double P = 0.0;
    double V = 0.0;
    double phi0 = 0.0;
    double delta = 0.0;
    double contrast = 0.0;
    double w_plus = 0.5;
    double w_minus = 0.5;
    StrategyStats stats;
    double D_S = 0.0;
    double D = 0.0;
    double gamma_S = 0.0;
    double lhs_thm2 = 0.0;
    double rhs_thm2 = 0.0;
    double lhs_jsve = 0.0;
};

/// E[i][j]: i is the output port of the quanton, j = 0 for detector outcomes in S.
using JointEffects = std::array<std::array<CMatrix, 2>, 2>;
using OutcomeProbabilities = std::array<std::array<double, 2>, 2>;
using OutcomeCounts = std::array<std::array<std::uint64_t, 2>, 2>;

AprioriVisibility a_priori_visibility(const QubitState &rho);
PathWeights predictability(const QubitState &rho);
DetectorVisibility visibility_with_detector(const MZISetup &setup);

/// Throws DimensionMismatch when the strategy basis and detector differ in size.
StrategyStats strategy_stats(const MZISetup &setup, const Strategy &strategy);

/// D_S = 2 w+ eta_S + 2 w- eta_Sbar^U - 1
double distinguishability(const StrategyStats &stats, double w_plus, double w_minus);

/// w+ rho_D - w- U rho_D U^dagger, whose eigenbasis gives the optimal strategy.
CMatrix path_operator(const MZISetup &setup);

/// Eigenbasis of path_operator; S holds the eigenvalues > 1e-12, zero
/// eigenvalues go to S-bar.
Strategy optimal_strategy(const MZISetup &setup);

/// tr |w+ rho_D - w- U rho_D U^dagger|
double max_distinguishability(const MZISetup &setup);

BinaryQubitObservable povm_N(const MZISetup &setup);
BinaryQubitObservable povm_M(const MZISetup &setup, const Strategy &strategy);

/// (H (x) I) U_QD (Phi H (x) I) on C^2 (x) C^d.
CMatrix interferometer_unitary(const MZISetup &setup);

/// E_ij = sum over W in S (j = 0) or S-bar (j = 1) of
/// tr_D[(I (x) rho_D) U^dagger (|i><i| (x) |W><W|) U].
JointEffects joint_observable(const MZISetup &setup, const Strategy &strategy);

/// tr(rho E_ij), negatives from rounding clamped to zero.
OutcomeProbabilities outcome_probabilities(const MZISetup &setup, const Strategy &strategy);

/// i.i.d. Born-rule draws of (i, j); deterministic for a seed.
OutcomeCounts sample_outcomes(const MZISetup &setup, const Strategy &strategy, std::uint64_t n_shots,
                              std::uint64_t seed);

/// gamma_S = 2 | w+ sqrt(eta_S eta_Sbar) - w- sqrt(eta_S^U eta_Sbar^U) |
double gamma(const StrategyStats &stats, double w_plus, double w_minus);

/// |D_S^2 + (sqrt(eta_S eta_S^U) + sqrt(eta_Sbar eta_Sbar^U))^2 (1 - P^2) - (1 - gamma_S^2)|
double duality_identity_residual(const StrategyStats &stats, double w_plus, double w_minus);

/// All duality quantities for one configuration. The V/V0 ratio is replaced
/// by the contrast, so the report is well defined at V0 = 0.
DualityReport duality_report(const MZISetup &setup, const Strategy &strategy);

}  // namespace mzjm
