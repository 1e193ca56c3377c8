#include "mzjm/mzi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mzjm/random.hpp"

namespace mzjm {

namespace {

constexpr double kZeroEigenvalue = 1e-12;
constexpr double kDegenerate = 1e-12;

double nonneg(double v) { return v < 0.0 ? 0.0 : v; }

CMatrix hadamard() {
    const double h = 1.0 / std::numbers::sqrt2;
    return CMatrix{{h, h}, {h, -h}};
}

CMatrix phase_shifter(double phi) {
    return CMatrix{{std::polar(1.0, phi / 2.0), 0.0}, {0.0, std::polar(1.0, -phi / 2.0)}};
}

// Projector onto span{|W> : W in S} (want_s) or its complement.
CMatrix outcome_projector(const Strategy &strategy, bool want_s) {
    const std::size_t d = strategy.dim();
    const CMatrix &b = strategy.basis();
    CMatrix p(d);
    for (std::size_t k = 0; k < d; ++k) {
        if (strategy.in_s(k) != want_s) continue;
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t c = 0; c < d; ++c) p(r, c) += b(r, k) * std::conj(b(c, k));
        }
    }
    return p;
}

}  // namespace

MZISetup::MZISetup(QubitState rho, CMatrix rho_detector, CMatrix detector_unitary, double phi)
    : rho_(std::move(rho)),
      rho_detector_(std::move(rho_detector)),
      unitary_(std::move(detector_unitary)),
      phi_(phi) {
    const std::size_t d = rho_detector_.dim();
    if (d < kMinDetectorDim || d > kMaxDetectorDim) {
        throw Error(ErrorKind::BadDimension, "detector dimension " + std::to_string(d) + " outside [2, 8]");
    }
    if (unitary_.dim() != d) {
        throw Error(ErrorKind::DimensionMismatch, "detector unitary is " + std::to_string(unitary_.dim()) +
                                                      "x" + std::to_string(unitary_.dim()) + ", state is " +
                                                      std::to_string(d) + "x" + std::to_string(d));
    }
    require_density_matrix(rho_detector_, "detector state");
    if (!is_unitary(unitary_)) throw Error(ErrorKind::NotUnitary, "detector coupling U is not unitary");
    if (!std::isfinite(phi_)) throw Error(ErrorKind::InvalidState, "phase must be finite");
}

Strategy::Strategy(CMatrix basis, std::vector<bool> in_s) : basis_(std::move(basis)), in_s_(std::move(in_s)) {}

Strategy::Strategy(CMatrix basis, const std::vector<std::size_t> &subset)
    : basis_(std::move(basis)), in_s_(basis_.dim(), false) {
    if (basis_.empty()) throw Error(ErrorKind::InvalidStrategy, "empty detector basis");
    if (!is_unitary(basis_)) throw Error(ErrorKind::InvalidStrategy, "basis columns are not orthonormal");
    for (std::size_t k : subset) {
        if (k >= basis_.dim()) {
            throw Error(ErrorKind::InvalidStrategy, "outcome index " + std::to_string(k) + " out of range");
        }
        in_s_[k] = true;
    }
}

Strategy Strategy::all_outcomes(CMatrix basis) {
    std::vector<std::size_t> all(basis.dim());
    for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
    return Strategy(std::move(basis), all);
}

Strategy Strategy::no_outcomes(CMatrix basis) { return Strategy(std::move(basis), std::vector<std::size_t>{}); }

std::vector<std::size_t> Strategy::subset() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < in_s_.size(); ++k) {
        if (in_s_[k]) out.push_back(k);
    }
    return out;
}

Strategy Strategy::complement() const {
    std::vector<bool> flipped(in_s_.size());
    for (std::size_t k = 0; k < in_s_.size(); ++k) flipped[k] = !in_s_[k];
    return Strategy(basis_, std::move(flipped));
}

AprioriVisibility a_priori_visibility(const QubitState &rho) {
    const CMatrix &m = rho.matrix();
    // <-|rho|+> with |+-> = (|0> +- |1>)/sqrt2
    const cplx minus_plus = 0.5 * (m(0, 0) + m(0, 1) - m(1, 0) - m(1, 1));
    AprioriVisibility out;
    out.V0 = 2.0 * std::abs(minus_plus);
    out.phi0 = out.V0 < kDegenerate ? 0.0 : std::arg(minus_plus);
    return out;
}

PathWeights predictability(const QubitState &rho) {
    const CMatrix &m = rho.matrix();
    PathWeights out;
    out.w_plus = 0.5 * (m(0, 0) + m(0, 1) + m(1, 0) + m(1, 1)).real();
    out.w_minus = 0.5 * (m(0, 0) - m(0, 1) - m(1, 0) + m(1, 1)).real();
    out.P = std::abs(out.w_plus - out.w_minus);
    return out;
}

DetectorVisibility visibility_with_detector(const MZISetup &setup) {
    const cplx overlap = (setup.detector_unitary() * setup.rho_detector()).trace();
    const cplx overlap_dagger = (setup.rho_detector() * setup.detector_unitary().adjoint()).trace();
    DetectorVisibility out;
    out.contrast = std::min(1.0, std::abs(overlap));
    out.delta = out.contrast < kDegenerate ? 0.0 : std::arg(overlap_dagger);
    out.V = a_priori_visibility(setup.rho()).V0 * out.contrast;
    return out;
}

StrategyStats strategy_stats(const MZISetup &setup, const Strategy &strategy) {
    if (strategy.dim() != setup.detector_dim()) {
        throw Error(ErrorKind::DimensionMismatch, "strategy basis dimension " + std::to_string(strategy.dim()) +
                                                      " does not match detector dimension " +
                                                      std::to_string(setup.detector_dim()));
    }
    const CMatrix rotated = setup.rotated_detector();
    StrategyStats s;
    for (std::size_t k = 0; k < strategy.dim(); ++k) {
        const double plain = nonneg(expectation_in_column(setup.rho_detector(), strategy.basis(), k).real());
        const double coupled = nonneg(expectation_in_column(rotated, strategy.basis(), k).real());
        if (strategy.in_s(k)) {
            s.eta_S += plain;
            s.eta_S_U += coupled;
        } else {
            s.eta_Sbar += plain;
            s.eta_Sbar_U += coupled;
        }
    }
    return s;
}

double distinguishability(const StrategyStats &stats, double w_plus, double w_minus) {
    return 2.0 * w_plus * stats.eta_S + 2.0 * w_minus * stats.eta_Sbar_U - 1.0;
}

CMatrix path_operator(const MZISetup &setup) {
    const PathWeights w = predictability(setup.rho());
    CMatrix op = w.w_plus * setup.rho_detector() - w.w_minus * setup.rotated_detector();
    return 0.5 * (op + op.adjoint());
}

Strategy optimal_strategy(const MZISetup &setup) {
    auto eig = hermitian_eig(path_operator(setup));
    std::vector<std::size_t> subset;
    for (std::size_t k = 0; k < eig.eigenvalues.size(); ++k) {
        if (eig.eigenvalues[k] > kZeroEigenvalue) subset.push_back(k);
    }
    return Strategy(std::move(eig.eigenvectors), subset);
}

double max_distinguishability(const MZISetup &setup) { return trace_norm(path_operator(setup)); }

BinaryQubitObservable povm_N(const MZISetup &setup) {
    const DetectorVisibility vis = visibility_with_detector(setup);
    const double angle = vis.delta + setup.phi();
    BinaryQubitObservable n;
    n.bias = 0.5;
    n.vector = BlochVector{0.0, -std::sin(angle), std::cos(angle)} * (vis.contrast / 2.0);
    return n;
}

BinaryQubitObservable povm_M(const MZISetup &setup, const Strategy &strategy) {
    const StrategyStats s = strategy_stats(setup, strategy);
    BinaryQubitObservable m;
    m.bias = (s.eta_S + s.eta_S_U) / 2.0;
    m.vector = BlochVector{(s.eta_S - s.eta_S_U) / 2.0, 0.0, 0.0};
    return m;
}

CMatrix interferometer_unitary(const MZISetup &setup) {
    const std::size_t d = setup.detector_dim();
    const CMatrix id = CMatrix::identity(d);
    const CMatrix p0{{1.0, 0.0}, {0.0, 0.0}};
    const CMatrix p1{{0.0, 0.0}, {0.0, 1.0}};
    const CMatrix controlled = kron(p0, id) + kron(p1, setup.detector_unitary());
    const CMatrix h = hadamard();
    return kron(h, id) * controlled * kron(phase_shifter(setup.phi()) * h, id);
}

JointEffects joint_observable(const MZISetup &setup, const Strategy &strategy) {
    const std::size_t d = setup.detector_dim();
    if (strategy.dim() != d) {
        throw Error(ErrorKind::DimensionMismatch, "strategy basis does not match detector dimension");
    }
    const CMatrix u = interferometer_unitary(setup);
    const CMatrix u_dag = u.adjoint();
    const CMatrix detector_in = kron(CMatrix::identity(2), setup.rho_detector());
    const std::array<CMatrix, 2> port{CMatrix{{1.0, 0.0}, {0.0, 0.0}}, CMatrix{{0.0, 0.0}, {0.0, 1.0}}};
    const std::array<CMatrix, 2> outcome{outcome_projector(strategy, true), outcome_projector(strategy, false)};

    JointEffects e;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const CMatrix heisenberg = u_dag * kron(port[i], outcome[j]) * u;
            e[i][j] = partial_trace_detector(detector_in * heisenberg, d);
        }
    }
    return e;
}

OutcomeProbabilities outcome_probabilities(const MZISetup &setup, const Strategy &strategy) {
    const JointEffects e = joint_observable(setup, strategy);
    OutcomeProbabilities p{};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) p[i][j] = nonneg((setup.rho().matrix() * e[i][j]).trace().real());
    }
    return p;
}

OutcomeCounts sample_outcomes(const MZISetup &setup, const Strategy &strategy, std::uint64_t n_shots,
                              std::uint64_t seed) {
    const OutcomeProbabilities p = outcome_probabilities(setup, strategy);
    const double total = p[0][0] + p[0][1] + p[1][0] + p[1][1];
    const std::array<double, 3> cumulative{p[0][0] / total, (p[0][0] + p[0][1]) / total,
                                           (p[0][0] + p[0][1] + p[1][0]) / total};
    Rng rng(seed);
    OutcomeCounts counts{};
    for (std::uint64_t shot = 0; shot < n_shots; ++shot) {
        const double u = uniform01(rng);
        if (u < cumulative[0]) {
            ++counts[0][0];
        } else if (u < cumulative[1]) {
            ++counts[0][1];
        } else if (u < cumulative[2]) {
            ++counts[1][0];
        } else {
            ++counts[1][1];
        }
    }
    return counts;
}

double gamma(const StrategyStats &stats, double w_plus, double w_minus) {
    return 2.0 * std::abs(w_plus * std::sqrt(stats.eta_S * stats.eta_Sbar) -
                          w_minus * std::sqrt(stats.eta_S_U * stats.eta_Sbar_U));
}

double duality_identity_residual(const StrategyStats &stats, double w_plus, double w_minus) {
    const double d_s = distinguishability(stats, w_plus, w_minus);
    const double overlap = std::sqrt(stats.eta_S * stats.eta_S_U) + std::sqrt(stats.eta_Sbar * stats.eta_Sbar_U);
    const double p = w_plus - w_minus;
    const double g = gamma(stats, w_plus, w_minus);
    return std::abs(d_s * d_s + overlap * overlap * (1.0 - p * p) - (1.0 - g * g));
}

DualityReport duality_report(const MZISetup &setup, const Strategy &strategy) {
    const AprioriVisibility apriori = a_priori_visibility(setup.rho());
    const PathWeights w = predictability(setup.rho());
    const DetectorVisibility vis = visibility_with_detector(setup);

    DualityReport r;
    r.V0 = apriori.V0;
    r.phi0 = apriori.phi0;
    r.P = w.P;
    r.w_plus = w.w_plus;
    r.w_minus = w.w_minus;
    r.V = vis.V;
    r.delta = vis.delta;
    r.contrast = vis.contrast;
    r.stats = strategy_stats(setup, strategy);
    r.D_S = distinguishability(r.stats, w.w_plus, w.w_minus);
    r.D = max_distinguishability(setup);
    r.gamma_S = gamma(r.stats, w.w_plus, w.w_minus);
    const double unpredictable = 1.0 - w.P * w.P;
    const double fringe = unpredictable * vis.contrast * vis.contrast;
    r.lhs_thm2 = r.D_S * r.D_S + fringe;
    r.rhs_thm2 = 1.0 - r.gamma_S * r.gamma_S;
    r.lhs_jsve = r.D * r.D + fringe;
    return r;
}

}  // namespace mzjm
