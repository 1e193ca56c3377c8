#include <cmath>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <numbers>

#include <fmt/format.h>

#include "mzjm/cli.hpp"
#include "mzjm/mzjm.hpp"
#include "mzjm/parallel.hpp"
#include "mzjm/random.hpp"

namespace mzjm::cli {

namespace {

constexpr double kInequalityTol = 1e-10;
constexpr double kIdentityTol = 1e-12;

std::string g17(double x) { return fmt::format("{:.17g}", x); }

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::mutex log_mutex;

void log_at(LogLevel level, std::string_view message) {
    if (log_level() < level) return;
    std::lock_guard lock(log_mutex);
    std::cerr << "[mzjm] " << message << '\n';
}

MZISetup sweep_setup(std::size_t dim, Rng &rng) {
    QubitState rho = random_qubit_state(rng);
    CMatrix rho_d = random_detector_state(dim, rng);
    CMatrix u = random_unitary(dim, rng);
    const double phi = 2.0 * std::numbers::pi * uniform01(rng);
    return MZISetup(std::move(rho), std::move(rho_d), std::move(u), phi);
}

Strategy sweep_strategy(std::size_t dim, Rng &rng) {
    CMatrix basis = random_unitary(dim, rng);
    std::vector<std::size_t> subset;
    for (std::size_t k = 0; k < dim; ++k) {
        if (uniform01(rng) < 0.5) subset.push_back(k);
    }
    return Strategy(std::move(basis), subset);
}

}  // namespace

LogLevel log_level() {
    static const LogLevel level = [] {
        const char *env = std::getenv("MZJM_LOG");
        const std::string v = env ? env : "";
        if (v == "quiet") return LogLevel::Quiet;
        if (v == "debug") return LogLevel::Debug;
        return LogLevel::Info;
    }();
    return level;
}

void log_info(std::string_view message) { log_at(LogLevel::Info, message); }
void log_debug(std::string_view message) { log_at(LogLevel::Debug, message); }

ResultRow evaluate(const std::string &id, std::uint64_t seed, const MZISetup &setup, const Strategy &strategy,
                   bool optimal) {
    ResultRow row;
    row.id = id;
    row.seed = seed;
    row.dim = setup.detector_dim();
    row.optimal = optimal;
    row.report = duality_report(setup, strategy);
    row.identity_residual = duality_identity_residual(row.report.stats, row.report.w_plus, row.report.w_minus);
    row.jm_margin = jm_margin(instance_from_setup(setup, strategy));
    return row;
}

ResultRow evaluate(const Scenario &scenario) {
    const MZISetup setup = scenario.setup();
    return evaluate(scenario.id, scenario.seed, setup, scenario.make_strategy(setup), !scenario.strategy);
}

std::string csv_header() {
    return "#schema=1\n"
           "id,seed,dim,strategy,V0,P,V,phi0,delta,contrast,w_plus,w_minus,eta_S,eta_Sbar,eta_S_U,eta_Sbar_U,"
           "D_S,D,gamma_S,lhs_thm2,rhs_thm2,lhs_jsve,identity_residual,jm_margin\n";
}

std::string csv_row(const ResultRow &row) {
    const DualityReport &r = row.report;
    std::string out = fmt::format("{},{},{},{}", csv_field(row.id), row.seed, row.dim, row.optimal ? "optimal" : "explicit");
    for (double x : {r.V0, r.P, r.V, r.phi0, r.delta, r.contrast, r.w_plus, r.w_minus, r.stats.eta_S, r.stats.eta_Sbar,
                     r.stats.eta_S_U, r.stats.eta_Sbar_U, r.D_S, r.D, r.gamma_S, r.lhs_thm2, r.rhs_thm2, r.lhs_jsve,
                     row.identity_residual, row.jm_margin}) {
        out += ',';
        out += g17(x);
    }
    out += '\n';
    return out;
}

std::optional<Violation> check_row(const ResultRow &row) {
    const DualityReport &r = row.report;
    if (!(row.identity_residual <= kIdentityTol)) return Violation{"identity_residual", row.identity_residual};
    if (!(r.lhs_thm2 <= r.rhs_thm2 + kInequalityTol)) return Violation{"duality", r.lhs_thm2 - r.rhs_thm2};
    if (!(r.lhs_jsve <= 1.0 + kInequalityTol)) return Violation{"jsve", r.lhs_jsve};
    if (!(r.D_S <= r.D + kInequalityTol)) return Violation{"D_S<=D", r.D_S - r.D};
    if (row.optimal && !(std::abs(r.D_S - r.D) <= kInequalityTol)) return Violation{"optimal_D", r.D_S - r.D};
    if (!(row.jm_margin >= -kInequalityTol)) return Violation{"jm_margin", row.jm_margin};
    return std::nullopt;
}

JointCheck check_joint(const MZISetup &setup, const Strategy &strategy) {
    const JointEffects e = joint_observable(setup, strategy);
    const BinaryQubitObservable n = povm_N(setup);
    const BinaryQubitObservable m = povm_M(setup, strategy);
    JointCheck out;
    out.min_eigenvalue = 1.0;
    CMatrix total(2);
    for (int i = 0; i < 2; ++i) {
        out.marginal_N = std::max(out.marginal_N, max_abs_diff(e[i][0] + e[i][1], n.effect_matrix(i)));
        out.marginal_M = std::max(out.marginal_M, max_abs_diff(e[0][i] + e[1][i], m.effect_matrix(i)));
        for (int j = 0; j < 2; ++j) {
            out.min_eigenvalue = std::min(out.min_eigenvalue, min_eigenvalue(e[i][j]));
            total += e[i][j];
        }
    }
    out.completeness = max_abs_diff(total, CMatrix::identity(2));
    return out;
}

int cmd_report(const Scenario &scenario, std::ostream &out) {
    const ResultRow row = evaluate(scenario);
    out << csv_header() << csv_row(row);
    if (const auto v = check_row(row)) {
        log_info(fmt::format("violation in {}: {} = {}", scenario.id, v->check, g17(v->value)));
        return kExitViolation;
    }
    return kExitOk;
}

namespace {

int report_jm(const JMInstance &inst, const CheckJmOptions &options, std::ostream &out) {
    const JMVerdict verdict = jm_criterion(inst);
    out << "m0=" << g17(inst.m0()) << '\n'
        << "m=" << g17(inst.m()) << '\n'
        << "n=" << g17(inst.n()) << '\n'
        << "margin=" << g17(verdict.margin) << '\n'
        << "measurable=" << (verdict.measurable ? "true" : "false") << '\n';
    if (verdict.witness) {
        out << "witness_x=" << g17(verdict.witness->x) << '\n'
            << "witness_min_eigenvalue=";
        double smallest = 1.0;
        for (const auto &row : verdict.witness->effects) {
            for (const auto &e : row) smallest = std::min(smallest, min_eigenvalue(e));
        }
        out << g17(smallest) << '\n';
    }
    if (options.oracle == "off") return kExitOk;

    OracleOptions oo;
    oo.resolution = options.resolution;
    oo.slack = options.slack;
    if (options.oracle == "full") {
        oo.mode = OracleMode::Full;
    } else if (options.oracle == "reduced") {
        oo.mode = OracleMode::Reduced;
    } else {
        throw InputError("--oracle must be full, reduced or off");
    }
    const bool found = feasibility_oracle(inst, oo);
    const bool decisive = std::abs(verdict.margin) >= 3.0 * options.resolution;
    out << "oracle=" << options.oracle << '\n'
        << "oracle_measurable=" << (found ? "true" : "false") << '\n'
        << "oracle_decisive=" << (decisive ? "true" : "false") << '\n';
    if (decisive && found != verdict.measurable) {
        log_info("oracle disagrees with the closed-form criterion");
        return kExitViolation;
    }
    return kExitOk;
}

}  // namespace

int cmd_check_jm(const CheckJmOptions &options, std::ostream &out) {
    return report_jm(JMInstance(options.m0, {options.m, 0.0, 0.0}, {0.0, 0.0, options.n}), options, out);
}

int cmd_check_jm(const Scenario &scenario, const CheckJmOptions &options, std::ostream &out) {
    const MZISetup setup = scenario.setup();
    return report_jm(instance_from_setup(setup, scenario.make_strategy(setup)), options, out);
}

int cmd_sweep(const SweepOptions &options, std::ostream &out, std::ostream &err) {
    if (options.dim != 0 && (options.dim < kMinDetectorDim || options.dim > kMaxDetectorDim)) {
        throw Error(ErrorKind::BadDimension, "--dim must be 0 or lie in [2, 8]");
    }
    std::vector<std::string> rows(options.count);
    std::vector<std::optional<std::string>> failures(options.count);

    parallel_for(options.count, options.threads, [&](std::size_t k) {
        const std::uint64_t seed = derive_seed(options.seed, k);
        Rng rng(seed);
        const std::size_t dim = options.dim != 0 ? options.dim : 2 + k % 3;
        const MZISetup setup = sweep_setup(dim, rng);
        const bool optimal = k % 2 == 0;
        const Strategy strategy = optimal ? optimal_strategy(setup) : sweep_strategy(dim, rng);
        const ResultRow row = evaluate("sweep-" + std::to_string(k), seed, setup, strategy, optimal);
        rows[k] = csv_row(row);

        std::optional<Violation> v = check_row(row);
        if (!v) {
            const JointCheck jc = check_joint(setup, strategy);
            if (jc.min_eigenvalue < -kInequalityTol) v = Violation{"joint_psd", jc.min_eigenvalue};
            else if (jc.completeness > kInequalityTol) v = Violation{"joint_completeness", jc.completeness};
            else if (jc.marginal_N > kInequalityTol) v = Violation{"marginal_N", jc.marginal_N};
            else if (jc.marginal_M > kInequalityTol) v = Violation{"marginal_M", jc.marginal_M};
        }
        if (v) failures[k] = fmt::format("violation index={} seed={} check={} value={}", k, seed, v->check, g17(v->value));
    });

    out << csv_header();
    for (const std::string &r : rows) out << r;
    std::size_t bad = 0;
    for (const auto &f : failures) {
        if (f) {
            err << *f << '\n';
            ++bad;
        }
    }
    log_info(fmt::format("sweep: {} rows, {} violations", options.count, bad));
    return bad == 0 ? kExitOk : kExitViolation;
}

int cmd_sample(const Scenario &scenario, std::uint64_t shots, std::uint64_t seed, std::ostream &out) {
    if (shots == 0) throw InputError("--shots must be positive");
    const MZISetup setup = scenario.setup();
    const Strategy strategy = scenario.make_strategy(setup);
    const OutcomeProbabilities p = outcome_probabilities(setup, strategy);
    const OutcomeCounts counts = sample_outcomes(setup, strategy, shots, seed);
    out << "#schema=1\ni,j,count,probability,frequency,z\n";
    double worst = 0.0;
    const double total = static_cast<double>(shots);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const double freq = static_cast<double>(counts[i][j]) / total;
            const double sd = std::sqrt(p[i][j] * (1.0 - p[i][j]) / total);
            const double z = sd > 0.0 ? (freq - p[i][j]) / sd : (freq == p[i][j] ? 0.0 : INFINITY);
            worst = std::max(worst, std::abs(z));
            out << i << ',' << j << ',' << counts[i][j] << ',' << g17(p[i][j]) << ',' << g17(freq) << ',' << g17(z)
                << '\n';
        }
    }
    if (worst > 5.0) {
        log_info(fmt::format("sample: |z| = {} exceeds 5", g17(worst)));
        return kExitViolation;
    }
    return kExitOk;
}

int cmd_gamma_slope(const Scenario &scenario, double p_step, std::ostream &out) {
    if (scenario.detector_dim != 2) {
        throw Error(ErrorKind::BadDimension, "gamma-slope needs a qubit detector");
    }
    const double predicted = gamma_slope_prediction(scenario.detector_state, scenario.detector_unitary);
    const double empirical = gamma_slope_empirical(scenario.detector_state, scenario.detector_unitary, p_step);
    const double rel = std::abs(empirical - predicted) / std::max(std::abs(predicted), 1e-300);
    const double purity = (scenario.detector_state * scenario.detector_state).trace().real();
    out << "purity=" << g17(purity) << '\n'
        << "fidelity=" << g17(fidelity_unitary_pair(scenario.detector_state, scenario.detector_unitary)) << '\n'
        << "predicted=" << g17(predicted) << '\n'
        << "empirical=" << g17(empirical) << '\n'
        << "relative_error=" << g17(rel) << '\n';
    return rel <= 1e-3 || std::abs(empirical - predicted) <= 1e-8 ? kExitOk : kExitViolation;
}

}  // namespace mzjm::cli
