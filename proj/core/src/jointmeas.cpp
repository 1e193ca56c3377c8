#include "mzjm/jointmeas.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mzjm {

namespace {

constexpr double kInstanceTol = 1e-12;
constexpr double kOrthogonalityTol = 1e-10;
constexpr double kPointTol = 1e-12;
constexpr double kZeroLength = 1e-15;

double sqrt_nonneg(double v) { return std::sqrt(std::max(0.0, v)); }

int sign_pow(int k) { return (k % 2 == 0) ? 1 : -1; }

// In-plane orthonormal frame (e1 along m, e2 along the part of n orthogonal to m).
struct PlaneFrame {
    BlochVector e1;
    BlochVector e2;
};

BlochVector any_orthogonal(const BlochVector &v) {
    // Cross with the coordinate axis least aligned with v.
    const double ax = std::abs(v.x), ay = std::abs(v.y), az = std::abs(v.z);
    BlochVector axis = (ax <= ay && ax <= az) ? BlochVector{1, 0, 0}
                       : (ay <= az)           ? BlochVector{0, 1, 0}
                                              : BlochVector{0, 0, 1};
    BlochVector w = cross(v, axis);
    return w * (1.0 / w.norm());
}

PlaneFrame plane_frame(const BlochVector &m, const BlochVector &n) {
    PlaneFrame f;
    if (m.norm() > kZeroLength) {
        f.e1 = m * (1.0 / m.norm());
    } else if (n.norm() > kZeroLength) {
        f.e1 = any_orthogonal(n);
    } else {
        f.e1 = {1.0, 0.0, 0.0};
    }
    const BlochVector n_perp = n - f.e1 * dot(n, f.e1);
    f.e2 = n_perp.norm() > kZeroLength ? n_perp * (1.0 / n_perp.norm()) : any_orthogonal(f.e1);
    return f;
}

struct Disk {
    double cx;
    double cy;
    double radius;
};

// The four balls in plane coordinates for a given x, enlarged by slack.
std::array<Disk, 4> disks_at(const JMInstance &inst, const PlaneFrame &f, double x, double slack) {
    const BlochVector mn_plus = inst.m_vec() + inst.n_vec();
    const BlochVector mn_minus = inst.m_vec() - inst.n_vec();
    const double p1 = dot(mn_plus, f.e1), p2 = dot(mn_plus, f.e2);
    const double q1 = dot(mn_minus, f.e1), q2 = dot(mn_minus, f.e2);
    const double m0 = inst.m0();
    return {{
        {-p1, -p2, m0 + x + slack},
        {-q1, -q2, 1.0 - m0 - x + slack},
        {q1, q2, m0 - x + slack},
        {p1, p2, 1.0 - m0 + x + slack},
    }};
}

bool point_ok(const std::array<Disk, 4> &disks, double y1, double y2, double y_bound) {
    if (std::hypot(y1, y2) > y_bound + kPointTol) return false;
    for (const Disk &d : disks) {
        if (std::hypot(y1 - d.cx, y2 - d.cy) > d.radius + kPointTol) return false;
    }
    return true;
}

// Points a + t d with |t| <= k_max * step that lie in all four disks. The
// feasible t-range is intersected chord by chord; grid points inside it are
// tried first, then its midpoint, which catches ranges thinner than a step.
bool line_has_point(const std::array<Disk, 4> &disks, double a1, double a2, double d1, double d2, double step,
                    double y_bound, long k_max) {
    const double tol = kPointTol;
    double lo = -static_cast<double>(k_max) * step;
    double hi = -lo;
    for (const Disk &d : disks) {
        const double r = d.radius + tol;
        if (r < 0.0) return false;
        // |a + t d - c|^2 <= r^2 with |d| = 1
        const double u1 = a1 - d.cx, u2 = a2 - d.cy;
        const double along = u1 * d1 + u2 * d2;
        const double perp2 = u1 * u1 + u2 * u2 - along * along;
        if (perp2 > r * r) return false;
        const double w = std::sqrt(std::max(0.0, r * r - perp2));
        lo = std::max(lo, -along - w);
        hi = std::min(hi, -along + w);
        if (lo > hi) return false;
    }
    const auto ok = [&](double t) { return point_ok(disks, a1 + t * d1, a2 + t * d2, y_bound); };
    const long k_lo = static_cast<long>(std::ceil(lo / step - 1e-9));
    const long k_hi = static_cast<long>(std::floor(hi / step + 1e-9));
    for (long k : {k_lo, k_lo + 1, k_hi - 1, k_hi}) {
        if (k < k_lo || k > k_hi) continue;
        if (ok(static_cast<double>(k) * step)) return true;
    }
    return ok(0.5 * (lo + hi));
}

}  // namespace

JMInstance::JMInstance(double m0, BlochVector m_vec, BlochVector n_vec) : m0_(m0), m_vec_(m_vec), n_vec_(n_vec) {
    if (!std::isfinite(m0) || m0 < 0.0 || m0 > 1.0) {
        throw Error(ErrorKind::InvalidInstance, "m0 must lie in [0, 1]");
    }
    if (std::abs(dot(m_vec, n_vec)) > kOrthogonalityTol) {
        throw Error(ErrorKind::InvalidInstance, "m and n must be orthogonal");
    }
    if (n_vec.norm() > 0.5 + kInstanceTol) throw Error(ErrorKind::InvalidInstance, "|n| exceeds 1/2");
    if (m_vec.norm() > std::min(m0, 1.0 - m0) + kInstanceTol) {
        throw Error(ErrorKind::InvalidInstance, "|m| exceeds min(m0, 1 - m0)");
    }
}

JointCandidate make_candidate(const JMInstance &inst, double x, const BlochVector &y_vec) {
    JointCandidate c;
    c.x = x;
    c.y_vec = y_vec;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            c.scalar[i][j] =
                0.25 + 0.25 * sign_pow(j) * (2.0 * inst.m0() - 1.0) + sign_pow(i + j) * x / 2.0;
            c.vector[i][j] =
                0.5 * (sign_pow(j) * inst.m_vec() + sign_pow(i) * inst.n_vec() + sign_pow(i + j) * y_vec);
            c.effects[i][j] = c.scalar[i][j] * CMatrix::identity(2) + bloch_dot_sigma(c.vector[i][j]);
        }
    }
    return c;
}

double jm_margin(const JMInstance &inst) {
    const double m2 = dot(inst.m_vec(), inst.m_vec());
    const double m0 = inst.m0();
    return sqrt_nonneg(m0 * m0 - m2) + sqrt_nonneg((1.0 - m0) * (1.0 - m0) - m2) - 2.0 * inst.n();
}

JMVerdict jm_criterion(const JMInstance &inst) {
    JMVerdict v;
    v.margin = jm_margin(inst);
    v.measurable = v.margin >= -kMarginTol;
    if (v.measurable) v.witness = construct_joint(inst);
    return v;
}

JointCandidate construct_joint(const JMInstance &inst) {
    const double margin = jm_margin(inst);
    if (margin < -kMarginTol) {
        throw Error(ErrorKind::NotMeasurable, "criterion margin " + std::to_string(margin) + " is negative");
    }
    const double n = inst.n();
    if (n <= kZeroLength) return make_candidate(inst, 0.0, BlochVector{});

    const double m2 = dot(inst.m_vec(), inst.m_vec());
    const double m0 = inst.m0();
    const double y = std::min(sqrt_nonneg(m0 * m0 - m2) - n, n + sqrt_nonneg((1.0 - m0) * (1.0 - m0) - m2));
    return make_candidate(inst, 0.0, inst.n_vec() * (y / n));
}

bool positivity_check(const JointCandidate &cand, const JMInstance &inst) {
    const BlochVector &m = inst.m_vec();
    const BlochVector &n = inst.n_vec();
    const BlochVector &y = cand.y_vec;
    const double m0 = inst.m0();
    const double x = cand.x;
    return (m + n + y).norm() <= m0 + x + kMarginTol && (m - n + y).norm() <= 1.0 - m0 - x + kMarginTol &&
           (m - n - y).norm() <= m0 - x + kMarginTol && (m + n - y).norm() <= 1.0 - m0 + x + kMarginTol;
}

bool effects_psd(const JointCandidate &cand, double tol) {
    for (const auto &row : cand.effects) {
        for (const auto &e : row) {
            if (min_eigenvalue(e) < -tol) return false;
        }
    }
    return true;
}

bool feasibility_oracle(const JMInstance &inst, const OracleOptions &options) {
    const double step = options.resolution;
    if (!(step > 0.0 && step <= 0.05)) {
        throw Error(ErrorKind::InvalidInstance, "oracle resolution must lie in (0, 0.05]");
    }
    const PlaneFrame frame = plane_frame(inst.m_vec(), inst.n_vec());
    const double y_bound = inst.m() + inst.n() + 1.0;
    const long k_y = static_cast<long>(std::floor(y_bound / step + 1e-9));

    if (options.mode == OracleMode::Reduced) {
        const auto disks = disks_at(inst, frame, 0.0, options.slack);
        // y parallel to n; in plane coordinates n lies along e2 up to the
        // tolerated non-orthogonality.
        const BlochVector n_dir = inst.n() > kZeroLength ? inst.n_vec() * (1.0 / inst.n()) : frame.e2;
        const double len = std::hypot(dot(n_dir, frame.e1), dot(n_dir, frame.e2));
        const double d1 = dot(n_dir, frame.e1) / len;
        const double d2 = dot(n_dir, frame.e2) / len;
        return line_has_point(disks, 0.0, 0.0, d1, d2, step, y_bound, k_y);
    }

    const double x_max = std::min(inst.m0(), 1.0 - inst.m0());
    const long k_x = static_cast<long>(std::floor(x_max / step + 1e-9));
    for (long kx = -k_x; kx <= k_x; ++kx) {
        const double x = static_cast<double>(kx) * step;
        const auto disks = disks_at(inst, frame, x, options.slack);
        if (std::any_of(disks.begin(), disks.end(), [](const Disk &d) { return d.radius < -kPointTol; })) {
            continue;
        }
        for (long k1 = -k_y; k1 <= k_y; ++k1) {
            if (line_has_point(disks, static_cast<double>(k1) * step, 0.0, 0.0, 1.0, step, y_bound, k_y)) return true;
        }
    }
    return false;
}

JMInstance instance_from_setup(const MZISetup &setup, const Strategy &strategy) {
    const StrategyStats s = strategy_stats(setup, strategy);
    const DetectorVisibility vis = visibility_with_detector(setup);
    const double phi0 = a_priori_visibility(setup.rho()).phi0;
    const BlochVector n = BlochVector{0.0, -std::sin(phi0), std::cos(phi0)} * (vis.contrast / 2.0);
    const BlochVector m{(s.eta_S - s.eta_S_U) / 2.0, 0.0, 0.0};
    return JMInstance(std::clamp((s.eta_S + s.eta_S_U) / 2.0, 0.0, 1.0), m, n);
}

}  // namespace mzjm
