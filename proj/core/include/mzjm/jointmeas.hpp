#pragma once

#include <array>
#include <optional>

#include "mzjm/linalg.hpp"
#include "mzjm/mzi.hpp"
#include "mzjm/qubit.hpp"

namespace mzjm {

/// A pair N0 = I/2 + n . sigma and M0 = m0 I + m . sigma with n . m = 0.
class JMInstance {
public:
    /// Throws InvalidInstance unless |n . m| <= 1e-10, |n| <= 1/2 + 1e-12 and
    /// |m| <= min(m0, 1 - m0) + 1e-12.
    JMInstance(double m0, BlochVector m_vec, BlochVector n_vec);

    double m0() const noexcept { return m0_; }
    const BlochVector &m_vec() const noexcept { return m_vec_; }
    const BlochVector &n_vec() const noexcept { return n_vec_; }
    double m() const { return m_vec_.norm(); }
    double n() const { return n_vec_.norm(); }

    BinaryQubitObservable observable_N() const { return {0.5, n_vec_}; }
    BinaryQubitObservable observable_M() const { return {m0_, m_vec_}; }

private:
    double m0_;
    BlochVector m_vec_;
    BlochVector n_vec_;
};

/// Candidate joint observable E_ij = x_ij I + y_ij . sigma, where
///   x_ij = 1/4 + (-1)^j (2 m0 - 1)/4 + (-1)^(i+j) x/2
///   y_ij = [(-1)^j m + (-1)^i n + (-1)^(i+j) y] / 2.
/// These are exactly the operators whose marginals are N and M.
struct JointCandidate {
    double x = 0.0;
    BlochVector y_vec;
    std::array<std::array<double, 2>, 2> scalar{};
    std::array<std::array<BlochVector, 2>, 2> vector{};
    std::array<std::array<CMatrix, 2>, 2> effects;
};

JointCandidate make_candidate(const JMInstance &inst, double x, const BlochVector &y_vec);

struct JMVerdict {
    bool measurable = false;
    double margin = 0.0;  // sqrt(m0^2 - m^2) + sqrt((1-m0)^2 - m^2) - 2n
    std::optional<JointCandidate> witness;
};

inline constexpr double kMarginTol = 1e-10;

double jm_margin(const JMInstance &inst);

/// Closed-form criterion; a witness is attached whenever margin >= -1e-10.
JMVerdict jm_criterion(const JMInstance &inst);

/// x = 0 and y = y n/|n| with y = min{sqrt(m0^2 - m^2) - n, n + sqrt((1-m0)^2 - m^2)};
/// y = 0 when n = 0. Throws NotMeasurable when margin < -1e-10.
JointCandidate construct_joint(const JMInstance &inst);

/// The four ball inequalities
///   |m + n + y| <= m0 + x,      |m - n + y| <= 1 - m0 - x,
///   |m - n - y| <= m0 - x,      |m + n - y| <= 1 - m0 + x
/// within 1e-10.
bool positivity_check(const JointCandidate &cand, const JMInstance &inst);

/// Eigenvalue route: every effect matrix has min eigenvalue >= -tol.
bool effects_psd(const JointCandidate &cand, double tol = kStructureTol);

enum class OracleMode {
    Full,     // grid over (x, y1, y2) with y in the m-n plane
    Reduced,  // x = 0, y parallel to n
};

struct OracleOptions {
    double resolution = 0.01;  // grid step, in (0, 0.05]
    OracleMode mode = OracleMode::Full;
    /// Extra radius granted to each ball inequality at grid points.
    double slack = 0.0;
};

/// Exhaustive search for a point satisfying the four ball inequalities.
/// The grid is k * resolution in every coordinate (so it contains x = 0 and
/// both in-plane axes), with x in [-min(m0, 1-m0), min(m0, 1-m0)] and
/// |y| <= m + n + 1. Each scanned line (a y2 column in Full mode, the n axis
/// in Reduced mode) also tries the midpoint of its feasible interval, so thin
/// feasible sets are not lost between grid points.
/// Throws InvalidInstance when resolution is out of range.
bool feasibility_oracle(const JMInstance &inst, const OracleOptions &options = {});

/// n = (contrast/2)(0, -sin phi0, cos phi0), m0 = (eta_S + eta_S^U)/2,
/// m = ((eta_S - eta_S^U)/2)(1, 0, 0).
JMInstance instance_from_setup(const MZISetup &setup, const Strategy &strategy);

}  // namespace mzjm
