#include "mzjm/verify.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

#include "mzjm/cli.hpp"
#include "mzjm/mzjm.hpp"
#include "mzjm/parallel.hpp"

namespace mzjm::verify {

namespace {

using cli::parallel_for;
using Clock = std::chrono::steady_clock;

constexpr double kTol = 1e-10;

// Pure-detector, U = I preset, parsed through the scenario reader.
constexpr const char *kSaturationScenario = R"({
  "id": "pure-detector-identity",
  "quanton": {"bloch": [0.6, 0.0, 0.8]},
  "detector": {"dim": 3, "state": "ground", "unitary": "identity"},
  "phi": 0.0,
  "strategy": "optimal",
  "seed": 1
})";

std::string e(double x) { return fmt::format("{:.3e}", x); }

// With `balanced` the margin is drawn uniformly from [-1/2, 1/2] and n solved
// for it, so measurable and non-measurable instances are equally common.
JMInstance random_instance(Rng &rng, bool balanced) {
    double m0 = uniform01(rng);
    double m = std::min(m0, 1.0 - m0) * uniform01(rng);
    double n = 0.5 * uniform01(rng);
    const double target = uniform01(rng) - 0.5;
    while (balanced) {
        n = (std::sqrt(m0 * m0 - m * m) + std::sqrt((1.0 - m0) * (1.0 - m0) - m * m) - target) / 2.0;
        if (n >= 0.0 && n <= 0.5) break;
        m0 = uniform01(rng);
        m = std::min(m0, 1.0 - m0) * uniform01(rng);
    }
    const BlochVector dir = random_direction(rng);
    BlochVector other = cross(dir, random_direction(rng));
    other = other * (1.0 / other.norm());
    return JMInstance(m0, dir * m, other * n);
}

MZISetup random_setup(std::size_t dim, Rng &rng) {
    QubitState rho = random_qubit_state(rng);
    CMatrix rho_d = random_detector_state(dim, rng);
    CMatrix u = random_unitary(dim, rng);
    const double phi = 2.0 * std::numbers::pi * uniform01(rng);
    return MZISetup(std::move(rho), std::move(rho_d), std::move(u), phi);
}

Strategy random_strategy(std::size_t dim, Rng &rng) {
    CMatrix basis = random_unitary(dim, rng);
    std::vector<std::size_t> subset;
    for (std::size_t k = 0; k < dim; ++k) {
        if (uniform01(rng) < 0.5) subset.push_back(k);
    }
    return Strategy(std::move(basis), subset);
}

double partition_max(const MZISetup &setup, const CMatrix &basis, double w_plus, double w_minus) {
    const std::size_t d = basis.dim();
    double best = -2.0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
        std::vector<std::size_t> subset;
        for (std::size_t k = 0; k < d; ++k) {
            if (mask & (std::size_t{1} << k)) subset.push_back(k);
        }
        best = std::max(best, distinguishability(strategy_stats(setup, Strategy(basis, subset)), w_plus, w_minus));
    }
    return best;
}

double min_effect_eigenvalue(const JointCandidate &c) {
    double smallest = 1.0;
    for (const auto &row : c.effects) {
        for (const auto &m : row) smallest = std::min(smallest, min_eigenvalue(m));
    }
    return smallest;
}

class Runner {
public:
    Runner(const VerifyConfig &config, const ResultSink &sink) : config_(config), sink_(sink) {}

    std::vector<CriterionResult> run() {
        criterion_vs_oracle();
        realizability();
        duality_inequality();
        optimality();
        pure_and_qubit();
        slope();
        sampler();
        saturation();
        return results_;
    }

private:
    std::uint64_t base(int criterion) const { return derive_seed(config_.seed, static_cast<std::uint64_t>(criterion)); }
    std::size_t scaled(std::size_t divisor, std::size_t floor) const { return std::max(config_.count / divisor, floor); }

    void emit(int number, std::string name, bool pass, std::string detail, Clock::time_point start) {
        CriterionResult r{number, std::move(name), pass, std::move(detail),
                          std::chrono::duration<double>(Clock::now() - start).count()};
        if (sink_) sink_(r);
        results_.push_back(std::move(r));
    }

    // Criteria 1 and 2 share one instance set.
    void criterion_vs_oracle() {
        const auto start = Clock::now();
        const std::uint64_t seed = base(1);
        std::vector<JMInstance> instances;
        std::size_t drawn = 0;
        while (instances.size() < config_.count) {
            Rng rng(derive_seed(seed, drawn));
            JMInstance inst = random_instance(rng, drawn++ % 2 == 1);
            if (std::abs(jm_margin(inst)) >= 0.03) instances.push_back(inst);
        }
        const std::size_t n = instances.size();
        std::vector<char> full(n), reduced(n);
        const Clock::time_point full_start = Clock::now();
        parallel_for(n, config_.threads, [&](std::size_t k) {
            full[k] = feasibility_oracle(instances[k], {0.01, OracleMode::Full, 0.0});
        });
        const double full_seconds = std::chrono::duration<double>(Clock::now() - full_start).count();
        parallel_for(n, config_.threads, [&](std::size_t k) {
            reduced[k] = feasibility_oracle(instances[k], {0.01, OracleMode::Reduced, 0.0});
        });

        std::size_t disagree = 0, disagree_reduced = 0, measurable = 0;
        std::string first;
        for (std::size_t k = 0; k < n; ++k) {
            const bool closed = jm_criterion(instances[k]).measurable;
            measurable += closed ? 1 : 0;
            if (static_cast<bool>(full[k]) != closed) {
                if (disagree++ == 0) first = fmt::format(", first at margin {}", e(jm_margin(instances[k])));
            }
            disagree_reduced += full[k] != reduced[k] ? 1 : 0;
        }
        emit(1, "criterion vs feasibility oracle", disagree == 0 && full_seconds < 120.0,
             fmt::format("{} instances ({} measurable), {} disagreements{}, full-mode search {:.1f} s", n, measurable,
                         disagree, first, full_seconds),
             start);
        emit(2, "reduced vs full oracle", disagree_reduced == 0,
             fmt::format("{} instances, {} disagreements", n, disagree_reduced), start);
    }

    void realizability() {
        const auto start = Clock::now();
        const std::uint64_t seed = base(3);
        const std::size_t n = scaled(10, 100);
        std::vector<cli::JointCheck> checks(n);
        std::vector<double> margins(n);
        parallel_for(n, config_.threads, [&](std::size_t k) {
            Rng rng(derive_seed(seed, k));
            const std::size_t dim = 2 + k % 3;
            const MZISetup setup = random_setup(dim, rng);
            const Strategy strategy = k % 2 == 0 ? optimal_strategy(setup) : random_strategy(dim, rng);
            checks[k] = cli::check_joint(setup, strategy);
            margins[k] = jm_margin(instance_from_setup(setup, strategy));
        });
        double min_eig = 1.0, completeness = 0.0, marginal = 0.0, min_margin = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            min_eig = std::min(min_eig, checks[k].min_eigenvalue);
            completeness = std::max(completeness, checks[k].completeness);
            marginal = std::max({marginal, checks[k].marginal_N, checks[k].marginal_M});
            min_margin = std::min(min_margin, margins[k]);
        }
        const bool pass = min_eig >= -kTol && completeness <= kTol && marginal <= kTol && min_margin >= -kTol;
        emit(3, "physical realizability", pass,
             fmt::format("{} setups, min eigenvalue {}, completeness {}, marginals {}, min margin {}", n, e(min_eig),
                         e(completeness), e(marginal), e(min_margin)),
             start);
    }

    void duality_inequality() {
        const auto start = Clock::now();
        const std::uint64_t seed = base(4);
        const std::size_t n = scaled(10, 100);
        struct Out {
            double excess = 0.0, residual = 0.0, jsve = 0.0, rhs_opt = 1.0;
        };
        std::vector<Out> outs(n);
        parallel_for(n, config_.threads, [&](std::size_t k) {
            Rng rng(derive_seed(seed, k));
            const std::size_t dim = 2 + k % 3;
            const MZISetup setup = random_setup(dim, rng);
            const DualityReport opt = duality_report(setup, optimal_strategy(setup));
            const DualityReport rnd = duality_report(setup, random_strategy(dim, rng));
            Out &o = outs[k];
            o.excess = std::max(opt.lhs_thm2 - opt.rhs_thm2, rnd.lhs_thm2 - rnd.rhs_thm2);
            o.residual = std::max(duality_identity_residual(opt.stats, opt.w_plus, opt.w_minus),
                                  duality_identity_residual(rnd.stats, rnd.w_plus, rnd.w_minus));
            o.jsve = opt.lhs_jsve;
            o.rhs_opt = opt.rhs_thm2;
        });
        double excess = -1.0, residual = 0.0, jsve = 0.0, rhs_min = 1.0;
        for (const Out &o : outs) {
            excess = std::max(excess, o.excess);
            residual = std::max(residual, o.residual);
            jsve = std::max(jsve, o.jsve);
            rhs_min = std::min(rhs_min, o.rhs_opt);
        }
        const bool pass = excess <= kTol && residual <= 1e-12 && jsve <= 1.0 + kTol && rhs_min < 1.0 - 1e-4;
        emit(4, "duality inequality", pass,
             fmt::format("{} setups x 2 strategies, max lhs-rhs {}, identity residual {}, max JSVE lhs {}, "
                         "min rhs {}",
                         n, e(excess), e(residual), e(jsve), e(rhs_min)),
             start);
    }

    void optimality() {
        const auto start = Clock::now();
        const std::uint64_t seed = base(5);
        const std::size_t n = scaled(100, 10);
        const std::size_t random_strategies = 1000;
        std::vector<double> gap(n), beaten(n);
        parallel_for(n, config_.threads, [&](std::size_t k) {
            Rng rng(derive_seed(seed, k));
            const std::size_t dim = 2 + k % 2;
            const MZISetup setup = random_setup(dim, rng);
            const PathWeights w = predictability(setup.rho());
            const double d = max_distinguishability(setup);
            gap[k] = std::abs(partition_max(setup, optimal_strategy(setup).basis(), w.w_plus, w.w_minus) - d);
            double worst = -2.0;
            for (std::size_t r = 0; r < random_strategies; ++r) {
                worst = std::max(worst, distinguishability(strategy_stats(setup, random_strategy(dim, rng)), w.w_plus,
                                                           w.w_minus) -
                                            d);
            }
            beaten[k] = worst;
        });
        const double max_gap = *std::max_element(gap.begin(), gap.end());
        const double max_excess = *std::max_element(beaten.begin(), beaten.end());
        emit(5, "optimal strategy", max_gap <= kTol && max_excess <= kTol,
             fmt::format("{} setups (d = 2, 3), |exhaustive - D| {}, max random D_S - D {} over {} strategies each", n,
                         e(max_gap), e(max_excess), random_strategies),
             start);
    }

    void pure_and_qubit() {
        const auto start = Clock::now();
        const std::uint64_t seed = base(6);
        const std::size_t n_pure = scaled(10, 100);
        const std::size_t n_qubit = config_.count;
        std::vector<double> gammas(n_pure), residuals(n_qubit);
        parallel_for(n_pure, config_.threads, [&](std::size_t k) {
            Rng rng(derive_seed(seed, k));
            const std::size_t dim = 2 + k % 3;
            const MZISetup setup(random_qubit_state(rng), random_pure_detector_state(dim, rng), random_unitary(dim, rng),
                                 0.0);
            const PathWeights w = predictability(setup.rho());
            gammas[k] = gamma(strategy_stats(setup, optimal_strategy(setup)), w.w_plus, w.w_minus);
        });
        parallel_for(n_qubit, config_.threads, [&](std::size_t k) {
            Rng rng(derive_seed(seed, n_pure + k));
            const CMatrix rho_d = random_detector_state(2, rng);
            const CMatrix u = random_unitary(2, rng);
            residuals[k] = identity_a8_residual(analyze_qubit_detector(rho_d, u, 2.0 * uniform01(rng) - 1.0));
        });
        const double g = *std::max_element(gammas.begin(), gammas.end());
        const double r = *std::max_element(residuals.begin(), residuals.end());
        emit(6, "pure detectors and qubit identity", g <= kTol && r <= 1e-12,
             fmt::format("{} pure detectors, max gamma_opt {}; {} qubit analyses, max residual {}", n_pure, e(g), n_qubit,
                         e(r)),
             start);
    }

    void slope() {
        const auto start = Clock::now();
        const std::uint64_t seed = base(7);
        const std::size_t n = scaled(100, 100);
        std::vector<double> rel(n);
        parallel_for(n, config_.threads, [&](std::size_t k) {
            Rng rng(derive_seed(seed, k));
            const CMatrix rho_d = random_detector_state(2, rng);
            const CMatrix u = random_unitary(2, rng);
            const double predicted = gamma_slope_prediction(rho_d, u);
            rel[k] = std::abs(gamma_slope_empirical(rho_d, u, 1e-4) - predicted) / predicted;
        });
        const double worst = *std::max_element(rel.begin(), rel.end());

        const CMatrix rho_d = QubitState::from_bloch({0.0, 0.0, 0.5}).matrix();
        const CMatrix quarter =
            std::cos(std::numbers::pi / 4.0) * CMatrix::identity(2) - cplx{0.0, std::sin(std::numbers::pi / 4.0)} * pauli_x();
        const double reference = 0.75 / std::sqrt(0.875);
        const double predicted = gamma_slope_prediction(rho_d, quarter);
        const double empirical = gamma_slope_empirical(rho_d, quarter, 1e-4);
        const double ref_rel = std::max(std::abs(predicted - reference), std::abs(empirical - reference)) / reference;
        emit(7, "gamma slope", worst <= 1e-3 && ref_rel <= 1e-3,
             fmt::format("{} mixed qubit detectors, max relative error {}; a = 0.25 case predicted {:.12f} empirical "
                         "{:.12f} (reference {:.12f})",
                         n, e(worst), predicted, empirical, reference),
             start);
    }

    void sampler() {
        const auto start = Clock::now();
        const std::uint64_t seed = base(8);
        const std::size_t scenarios = 10;
        const std::uint64_t shots = 1000000;
        std::vector<double> worst(scenarios);
        parallel_for(scenarios, config_.threads, [&](std::size_t k) {
            Rng rng(derive_seed(seed, k));
            const std::size_t dim = 2 + k % 3;
            const MZISetup setup = random_setup(dim, rng);
            const Strategy strategy = k % 2 == 0 ? optimal_strategy(setup) : random_strategy(dim, rng);
            const OutcomeProbabilities p = outcome_probabilities(setup, strategy);
            const OutcomeCounts counts = sample_outcomes(setup, strategy, shots, derive_seed(seed, 1000 + k));
            double z_max = 0.0;
            for (int i = 0; i < 2; ++i) {
                for (int j = 0; j < 2; ++j) {
                    const double freq = static_cast<double>(counts[i][j]) / static_cast<double>(shots);
                    const double sd = std::sqrt(p[i][j] * (1.0 - p[i][j]) / static_cast<double>(shots));
                    const double dev = std::abs(freq - p[i][j]);
                    z_max = std::max(z_max, sd > 0.0 ? dev / sd : (dev == 0.0 ? 0.0 : INFINITY));
                }
            }
            worst[k] = z_max;
        });
        const double z = *std::max_element(worst.begin(), worst.end());
        emit(8, "Born-rule sampler", z <= 5.0,
             fmt::format("{} scenarios x {} shots, max |z| {:.2f}", scenarios, shots, z), start);
    }

    void saturation() {
        const auto start = Clock::now();
        const std::uint64_t seed = base(9);
        const cli::Scenario preset = cli::parse_scenario(kSaturationScenario);
        const DualityReport r = duality_report(preset.setup(), preset.make_strategy(preset.setup()));
        double gap = std::max(std::abs(r.lhs_thm2 - 1.0), std::abs(r.rhs_thm2 - 1.0));

        const std::size_t n = scaled(10, 100);
        std::vector<double> gaps(n), eig(n);
        parallel_for(n, config_.threads, [&](std::size_t k) {
            Rng rng(derive_seed(seed, k));
            const std::size_t dim = 2 + k % 3;
            const MZISetup setup(random_qubit_state(rng), random_pure_detector_state(dim, rng), CMatrix::identity(dim),
                                 2.0 * std::numbers::pi * uniform01(rng));
            const DualityReport d = duality_report(setup, optimal_strategy(setup));
            gaps[k] = std::max(std::abs(d.lhs_thm2 - 1.0), std::abs(d.rhs_thm2 - 1.0));

            // Boundary instance: n chosen so the margin vanishes.
            double m0 = 0.0, m = 0.0, half_sum = 1.0;
            while (half_sum > 0.5) {
                m0 = uniform01(rng);
                m = std::min(m0, 1.0 - m0) * uniform01(rng);
                half_sum = (std::sqrt(m0 * m0 - m * m) + std::sqrt((1.0 - m0) * (1.0 - m0) - m * m)) / 2.0;
            }
            const JMInstance inst(m0, {m, 0.0, 0.0}, {0.0, 0.0, half_sum});
            eig[k] = std::abs(min_effect_eigenvalue(construct_joint(inst)));
        });
        gap = std::max(gap, *std::max_element(gaps.begin(), gaps.end()));
        const double worst_eig = *std::max_element(eig.begin(), eig.end());
        emit(9, "saturation", gap <= 1e-12 && worst_eig <= 1e-8,
             fmt::format("preset + {} pure U = I setups, max |lhs - 1|, |rhs - 1| {}; {} boundary instances, max |min "
                         "eigenvalue| {}",
                         n, e(gap), n, e(worst_eig)),
             start);
    }

    VerifyConfig config_;
    ResultSink sink_;
    std::vector<CriterionResult> results_;
};

}  // namespace

std::vector<CriterionResult> run_acceptance(const VerifyConfig &config, const ResultSink &sink) {
    if (config.count == 0) throw cli::InputError("--count must be positive");
    return Runner(config, sink).run();
}

std::string format_result(const CriterionResult &r) {
    return fmt::format("{} [{}] {}: {} ({:.2f} s)", r.pass ? "PASS" : "FAIL", r.number, r.name, r.detail, r.seconds);
}

int cmd_verify(const VerifyConfig &config, std::ostream &out) {
    const auto results = run_acceptance(config, [&](const CriterionResult &r) { out << format_result(r) << std::endl; });
    std::size_t failed = 0;
    for (const auto &r : results) failed += r.pass ? 0 : 1;
    out << fmt::format("{} of {} criteria passed (seed {}, count {})", results.size() - failed, results.size(),
                       config.seed, config.count)
        << std::endl;
    return failed == 0 ? 0 : 1;
}

}  // namespace mzjm::verify
