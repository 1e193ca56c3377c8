#include "mzjm/appendix.hpp"

#include <cmath>

#include "mzjm/mzi.hpp"

namespace mzjm {

namespace {

constexpr double kDegenerateNorm = 1e-12;

BlochVector detector_bloch(const CMatrix &rho) { return decompose_hermitian(rho).vector * 2.0; }

void require_qubit_pair(const CMatrix &rho_detector, const CMatrix &u) {
    if (rho_detector.dim() != 2 || u.dim() != 2) {
        throw Error(ErrorKind::BadDimension, "qubit detector analytics need a 2x2 state and unitary");
    }
    require_density_matrix(rho_detector, "detector state");
    if (!is_unitary(u)) throw Error(ErrorKind::NotUnitary, "detector coupling U is not unitary");
}

}  // namespace

QubitDetectorAnalysis analyze_qubit_detector(const CMatrix &rho_detector, const CMatrix &u, double p) {
    require_qubit_pair(rho_detector, u);
    if (!(std::abs(p) <= 1.0)) throw Error(ErrorKind::InvalidState, "p must lie in [-1, 1]");
    QubitDetectorAnalysis out;
    out.alpha = detector_bloch(rho_detector);
    out.beta = detector_bloch(conjugate_by(u, rho_detector));
    out.a = dot(out.alpha, out.alpha);
    out.b = dot(out.alpha, out.beta);
    out.p = p;
    return out;
}

QubitOptimum optimal_projective_qubit(const QubitDetectorAnalysis &analysis) {
    const BlochVector v = analysis.w_plus() * analysis.alpha - analysis.w_minus() * analysis.beta;
    QubitOptimum out;
    const double len = v.norm();
    if (len <= kDegenerateNorm) {
        out.s = {0.0, 0.0, 1.0};
        out.degenerate = true;
    } else {
        out.s = v * (1.0 / len);
    }
    out.eta_S = (1.0 + dot(analysis.alpha, out.s)) / 2.0;
    out.eta_S_U = (1.0 + dot(analysis.beta, out.s)) / 2.0;
    return out;
}

double identity_a8_residual(const QubitDetectorAnalysis &analysis) {
    const QubitOptimum opt = optimal_projective_qubit(analysis);
    const double wp = analysis.w_plus();
    const double wm = analysis.w_minus();
    const double lhs = wp * wp * opt.eta_S * (1.0 - opt.eta_S) - wm * wm * opt.eta_S_U * (1.0 - opt.eta_S_U);
    // tr rho_D^2 = (1 + a)/2
    const double purity = (1.0 + analysis.a) / 2.0;
    const double rhs = (1.0 - purity) / 2.0 * analysis.p;
    return std::abs(lhs - rhs);
}

double gamma_slope_prediction(const CMatrix &rho_detector, const CMatrix &u) {
    const double f = fidelity_unitary_pair(rho_detector, u);
    if (f <= kDegenerateNorm) {
        throw Error(ErrorKind::DegenerateFidelity, "rho_D and U rho_D U^dagger are orthogonal");
    }
    const double purity = (rho_detector * rho_detector).trace().real();
    return 2.0 * (1.0 - purity) / f;
}

double gamma_optimal(const CMatrix &rho_detector, const CMatrix &u, double p) {
    const QubitState quanton = QubitState::from_bloch({p, 0.0, 0.0});
    const MZISetup setup(quanton, rho_detector, u, 0.0);
    const PathWeights w = predictability(setup.rho());
    return gamma(strategy_stats(setup, optimal_strategy(setup)), w.w_plus, w.w_minus);
}

double gamma_slope_empirical(const CMatrix &rho_detector, const CMatrix &u, double p_step) {
    if (!(p_step >= 1e-6 && p_step <= 1e-2)) {
        throw Error(ErrorKind::InvalidState, "p_step must lie in [1e-6, 1e-2]");
    }
    const double coarse = gamma_optimal(rho_detector, u, p_step) / p_step;
    const double fine = gamma_optimal(rho_detector, u, p_step / 2.0) / (p_step / 2.0);
    return 2.0 * fine - coarse;
}

}  // namespace mzjm
