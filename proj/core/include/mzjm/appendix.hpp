#pragma once

#include "mzjm/linalg.hpp"
#include "mzjm/qubit.hpp"

namespace mzjm {

/// Qubit detector in Bloch form: rho_D = (I + alpha . sigma)/2,
/// U rho_D U^dagger = (I + beta . sigma)/2, and quanton bias w+ = (1 + p)/2.
struct QubitDetectorAnalysis {
    BlochVector alpha;
    BlochVector beta;
    double a = 0.0;  // |alpha|^2 = |beta|^2
    double b = 0.0;  // alpha . beta
    double p = 0.0;

    double w_plus() const { return (1.0 + p) / 2.0; }
    double w_minus() const { return (1.0 - p) / 2.0; }
};

/// Throws BadDimension for non-qubit inputs, InvalidState / NotUnitary as
/// fidelity_unitary_pair, InvalidState when |p| > 1.
QubitDetectorAnalysis analyze_qubit_detector(const CMatrix &rho_detector, const CMatrix &u, double p);

struct QubitOptimum {
    BlochVector s;  // unit Bloch direction of the projector onto S
    double eta_S = 0.0;
    double eta_S_U = 0.0;
    bool degenerate = false;  // w+ alpha - w- beta vanished; s defaulted to (0, 0, 1)
};

/// s = (w+ alpha - w- beta)/|w+ alpha - w- beta|, eta_S = (1 + alpha . s)/2,
/// eta_S^U = (1 + beta . s)/2.
QubitOptimum optimal_projective_qubit(const QubitDetectorAnalysis &analysis);

/// |w+^2 eta_S eta_Sbar - w-^2 eta_S^U eta_Sbar^U - (1 - tr rho_D^2) p / 2|
/// evaluated at the optimum above.
double identity_a8_residual(const QubitDetectorAnalysis &analysis);

/// Small-|p| slope of gamma at the optimal strategy: 2 (1 - tr rho_D^2) / F.
/// Throws DegenerateFidelity when F <= 1e-12.
double gamma_slope_prediction(const CMatrix &rho_detector, const CMatrix &u);

/// gamma_opt(p) for the quanton (I + p sigma_x)/2, computed through the full
/// interferometer pipeline (optimal strategy from the eigenbasis of the
/// path operator).
double gamma_optimal(const CMatrix &rho_detector, const CMatrix &u, double p);

/// Richardson-extrapolated slope 2 g(h/2) - g(h) with g(h) = gamma_opt(h)/h,
/// h = p_step in [1e-6, 1e-2]. Throws InvalidState for p_step out of range.
double gamma_slope_empirical(const CMatrix &rho_detector, const CMatrix &u, double p_step);

}  // namespace mzjm
