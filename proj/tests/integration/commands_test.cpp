#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "mzjm/cli.hpp"
#include "mzjm/verify.hpp"

using namespace mzjm;
using namespace mzjm::cli;

namespace {

std::string scenario_path(const std::string &name) { return std::string(MZJM_SCENARIO_DIR) + "/" + name; }

std::map<std::string, std::string> key_values(const std::string &text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq != std::string::npos) out[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return out;
}

// Column name -> value for a report with a single data row.
std::map<std::string, std::string> report_fields(const std::string &csv) {
    std::istringstream in(csv);
    std::string schema, header, row;
    std::getline(in, schema);
    std::getline(in, header);
    std::getline(in, row);
    std::map<std::string, std::string> out;
    std::istringstream h(header), r(row);
    std::string name, value;
    while (std::getline(h, name, ',') && std::getline(r, value, ',')) out[name] = value;
    return out;
}

int run_cli(const std::string &args) {
    const std::string cmd = std::string(MZJM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string temp_file(const std::string &name) {
    return (std::filesystem::temp_directory_path() / ("mzjm_" + std::to_string(::getpid()) + "_" + name)).string();
}

}  // namespace

TEST(CheckJm, SharpPairIsNotMeasurable) {
    std::ostringstream out;
    EXPECT_EQ(cmd_check_jm(CheckJmOptions{0.5, 0.5, 0.5, "full", 0.01, 0.0}, out), kExitOk);
    const auto kv = key_values(out.str());
    EXPECT_EQ(kv.at("measurable"), "false");
    EXPECT_EQ(std::stod(kv.at("margin")), -1.0);
    EXPECT_EQ(kv.at("oracle_measurable"), "false");
}

TEST(CheckJm, BoundaryInstanceHasZeroEigenvalueWitness) {
    std::ostringstream out;
    EXPECT_EQ(cmd_check_jm(CheckJmOptions{0.5, 0.3, 0.4, "off", 0.01, 0.0}, out), kExitOk);
    const auto kv = key_values(out.str());
    EXPECT_EQ(kv.at("measurable"), "true");
    EXPECT_NEAR(std::stod(kv.at("witness_min_eigenvalue")), 0.0, 1e-8);
    EXPECT_EQ(kv.count("oracle"), 0u);
}

TEST(CheckJm, OversizedSlackIsReportedAsViolation) {
    // margin = 2 sqrt(1/4 - 0.09) - 0.84 = -0.04, outside the 3-step band.
    std::ostringstream out;
    EXPECT_EQ(cmd_check_jm(CheckJmOptions{0.5, 0.3, 0.42, "full", 0.01, 0.05}, out), kExitViolation);
    EXPECT_EQ(key_values(out.str()).at("oracle_measurable"), "true");
}

TEST(CheckJm, ScenarioDerivedInstance) {
    std::ostringstream out;
    EXPECT_EQ(cmd_check_jm(load_scenario(scenario_path("random_qutrit.json")), CheckJmOptions{}, out), kExitOk);
    EXPECT_EQ(key_values(out.str()).at("measurable"), "true");
}

TEST(Report, PureDetectorIdentitySaturates) {
    std::ostringstream out;
    EXPECT_EQ(cmd_report(load_scenario(scenario_path("pure_detector_identity.json")), out), kExitOk);
    const auto f = report_fields(out.str());
    EXPECT_NEAR(std::stod(f.at("lhs_thm2")), 1.0, 1e-12);
    EXPECT_NEAR(std::stod(f.at("rhs_thm2")), 1.0, 1e-12);
    EXPECT_EQ(f.at("strategy"), "optimal");
}

TEST(Report, OrthogonalWhichPathIsFullyDistinguishable) {
    std::ostringstream out;
    EXPECT_EQ(cmd_report(load_scenario(scenario_path("orthogonal_which_path.json")), out), kExitOk);
    const auto f = report_fields(out.str());
    EXPECT_NEAR(std::stod(f.at("D")), 1.0, 1e-14);
    EXPECT_NEAR(std::stod(f.at("V")), 0.0, 1e-14);
}

TEST(Sweep, DeterministicAcrossThreadCounts) {
    std::ostringstream one, many, err;
    EXPECT_EQ(cmd_sweep(SweepOptions{300, 42, 0, 1}, one, err), kExitOk);
    EXPECT_EQ(cmd_sweep(SweepOptions{300, 42, 0, 4}, many, err), kExitOk);
    EXPECT_EQ(one.str(), many.str());
    EXPECT_TRUE(err.str().empty()) << err.str();
    const std::string csv = one.str();
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 302);

    std::ostringstream other;
    cmd_sweep(SweepOptions{300, 43, 0, 2}, other, err);
    EXPECT_NE(one.str(), other.str());
}

TEST(Sweep, FixedDimensionAndBadDimension) {
    std::ostringstream out, err;
    EXPECT_EQ(cmd_sweep(SweepOptions{50, 7, 6, 0}, out, err), kExitOk);
    EXPECT_NE(out.str().find("sweep-49,"), std::string::npos);
    EXPECT_THROW(cmd_sweep(SweepOptions{5, 7, 9, 0}, out, err), Error);
}

TEST(Sample, CountsAddUpAndMatchProbabilities) {
    std::ostringstream out;
    EXPECT_EQ(cmd_sample(load_scenario(scenario_path("random_qutrit.json")), 200000, 5, out), kExitOk);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    EXPECT_EQ(line, "i,j,count,probability,frequency,z");
    std::uint64_t total = 0;
    double prob = 0.0;
    while (std::getline(in, line)) {
        std::istringstream f(line);
        std::string i, j, count, p;
        std::getline(f, i, ',');
        std::getline(f, j, ',');
        std::getline(f, count, ',');
        std::getline(f, p, ',');
        total += std::stoull(count);
        prob += std::stod(p);
    }
    EXPECT_EQ(total, 200000u);
    EXPECT_NEAR(prob, 1.0, 1e-12);
}

TEST(GammaSlope, QuarterTurnMatchesPrediction) {
    std::ostringstream out;
    EXPECT_EQ(cmd_gamma_slope(load_scenario(scenario_path("qubit_quarter_turn.json")), 1e-4, out), kExitOk);
    const auto kv = key_values(out.str());
    EXPECT_NEAR(std::stod(kv.at("predicted")), 0.8017837257372732, 1e-12);
    EXPECT_LT(std::stod(kv.at("relative_error")), 1e-3);
    EXPECT_THROW(cmd_gamma_slope(load_scenario(scenario_path("random_qutrit.json")), 1e-4, out), Error);
}

TEST(Verify, SmallRunPasses) {
    std::ostringstream out;
    EXPECT_EQ(verify::cmd_verify(verify::VerifyConfig{3, 1000, 0}, out), 0) << out.str();
    EXPECT_NE(out.str().find("9 of 9 criteria passed"), std::string::npos);
}

TEST(Executable, ExitCodes) {
    EXPECT_EQ(run_cli("check-jm --m0 0.5 --m 0.5 --n 0.5"), 0);
    EXPECT_EQ(run_cli("check-jm --m0 0.5 --m 0.3 --n 0.42 --slack 0.05"), 1);
    EXPECT_EQ(run_cli("check-jm --m0 0.5 --m 0.6 --n 0.1"), 2);
    EXPECT_EQ(run_cli("check-jm --m0 0.5 --m 0.1 --n 0.1 --oracle sideways"), 2);
    EXPECT_EQ(run_cli("check-jm --m0 0.5 --m 0.1 --n 0.1 --resolution 0.5"), 2);
    EXPECT_EQ(run_cli("report --scenario " + scenario_path("pure_detector_identity.json")), 0);
    EXPECT_EQ(run_cli("report --scenario /nonexistent.json"), 2);
    EXPECT_EQ(run_cli("report"), 2);
    EXPECT_EQ(run_cli("frobnicate"), 2);
    EXPECT_EQ(run_cli("sample --scenario " + scenario_path("random_qutrit.json") + " --shots 1000 --seed 1"), 0);
    EXPECT_EQ(run_cli("gamma-slope --scenario " + scenario_path("qubit_quarter_turn.json") + " --p-step 1"), 2);
    EXPECT_EQ(run_cli("--help"), 0);

    const std::string bad = temp_file("bad.json");
    std::ofstream(bad) << R"({"quanton": {"bloch": [0, 0, 0]}, "detector": {"dim": 2, "state": {"matrix": [[2, 0], [0, -1]]}, "unitary": "identity"}})";
    EXPECT_EQ(run_cli("report --scenario " + bad), 2);
    std::filesystem::remove(bad);
}

TEST(Executable, SweepFileIsByteIdentical) {
    const std::string a = temp_file("a.csv");
    const std::string b = temp_file("b.csv");
    ASSERT_EQ(run_cli("sweep --count 200 --seed 9 --dim 3 --threads 1 --out " + a), 0);
    ASSERT_EQ(run_cli("sweep --count 200 --seed 9 --dim 3 --threads 3 --out " + b), 0);
    std::ifstream fa(a), fb(b);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    EXPECT_EQ(sa.str(), sb.str());
    EXPECT_EQ(sa.str().rfind("#schema=1\n", 0), 0u);
    std::filesystem::remove(a);
    std::filesystem::remove(b);
}
