#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "mzjm/cli.hpp"
#include "mzjm/verify.hpp"

namespace {

using namespace mzjm::cli;

int run(int argc, char **argv) {
    CLI::App app{"Which-path duality and joint measurability in a Mach-Zehnder interferometer"};
    app.require_subcommand(1);

    std::string scenario_path;
    auto *report = app.add_subcommand("report", "Evaluate one scenario and print a CSV result row");
    report->add_option("--scenario", scenario_path, "Scenario JSON file")->required();

    CheckJmOptions jm;
    auto *check = app.add_subcommand("check-jm", "Joint measurability of N0 = I/2 + n.sigma and M0 = m0 I + m.sigma");
    auto *m0_opt = check->add_option("--m0", jm.m0, "Bias of M")->check(CLI::Range(0.0, 1.0));
    check->add_option("--m", jm.m, "|m|, placed along x")->check(CLI::Range(0.0, 1.0));
    check->add_option("--n", jm.n, "|n|, placed along z")->check(CLI::Range(0.0, 0.5));
    auto *check_scenario =
        check->add_option("--scenario", scenario_path, "Derive the instance from a scenario instead")->excludes(m0_opt);
    check->add_option("--oracle", jm.oracle, "Brute-force cross-check")
        ->check(CLI::IsMember({"full", "reduced", "off"}))
        ->capture_default_str();
    check->add_option("--resolution", jm.resolution, "Oracle grid step in (0, 0.05]")->capture_default_str();
    check->add_option("--slack", jm.slack, "Extra radius granted to each ball inequality")->capture_default_str();
    m0_opt->excludes(check_scenario);

    SweepOptions sweep;
    std::string out_path = "-";
    auto *sw = app.add_subcommand("sweep", "Random configurations through every identity and inequality check");
    sw->add_option("--count", sweep.count, "Number of configurations")->capture_default_str();
    sw->add_option("--seed", sweep.seed, "Base seed")->capture_default_str();
    sw->add_option("--dim", sweep.dim, "Detector dimension, 0 cycles 2, 3, 4")->capture_default_str();
    sw->add_option("--out", out_path, "CSV file, - for stdout")->capture_default_str();
    sw->add_option("--threads", sweep.threads, "Worker threads, 0 for all cores");

    std::uint64_t shots = 1000000, sample_seed = 1;
    auto *sample = app.add_subcommand("sample", "Monte Carlo outcome counts against Born-rule probabilities");
    sample->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    sample->add_option("--shots", shots, "Number of shots")->capture_default_str();
    sample->add_option("--seed", sample_seed, "Sampler seed")->capture_default_str();

    double p_step = 1e-4;
    auto *slope = app.add_subcommand("gamma-slope", "Predicted vs finite-difference slope of gamma_opt for a qubit detector");
    slope->add_option("--scenario", scenario_path, "Scenario JSON file with a qubit detector")->required();
    slope->add_option("--p-step", p_step, "Finite-difference step in [1e-6, 1e-2]")->capture_default_str();

    mzjm::verify::VerifyConfig verify;
    auto *ver = app.add_subcommand("verify", "Run the acceptance criteria");
    ver->add_option("--seed", verify.seed, "Base seed")->capture_default_str();
    ver->add_option("--count", verify.count, "Size of the largest samples")->capture_default_str();
    ver->add_option("--threads", verify.threads, "Worker threads, 0 for all cores");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalidInput;
    }

    if (report->parsed()) return cmd_report(load_scenario(scenario_path), std::cout);
    if (check->parsed()) {
        if (!scenario_path.empty()) return cmd_check_jm(load_scenario(scenario_path), jm, std::cout);
        return cmd_check_jm(jm, std::cout);
    }
    if (sw->parsed()) {
        if (out_path == "-") return cmd_sweep(sweep, std::cout, std::cerr);
        std::ofstream file(out_path);
        if (!file) throw InputError("cannot write " + out_path);
        return cmd_sweep(sweep, file, std::cerr);
    }
    if (sample->parsed()) return cmd_sample(load_scenario(scenario_path), shots, sample_seed, std::cout);
    if (slope->parsed()) return cmd_gamma_slope(load_scenario(scenario_path), p_step, std::cout);
    if (ver->parsed()) return mzjm::verify::cmd_verify(verify, std::cout);
    return kExitInvalidInput;
}

}  // namespace

int main(int argc, char **argv) {
    try {
        return run(argc, argv);
    } catch (const mzjm::Error &e) {
        std::cerr << "error: " << e.what() << '\n';
    } catch (const InputError &e) {
        std::cerr << "error: " << e.what() << '\n';
    }
    return kExitInvalidInput;
}
