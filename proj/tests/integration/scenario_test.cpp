#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "mzjm/cli.hpp"

using namespace mzjm;
using namespace mzjm::cli;

namespace {

std::vector<std::filesystem::path> scenario_files() {
    std::vector<std::filesystem::path> out;
    for (const auto &entry : std::filesystem::directory_iterator(MZJM_SCENARIO_DIR)) {
        if (entry.path().extension() == ".json") out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

ErrorKind kind_of(std::string_view text) {
    try {
        parse_scenario(text);
    } catch (const Error &e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected mzjm::Error";
    return ErrorKind::NoConvergence;
}

void expect_input_error(std::string_view text) { EXPECT_THROW(parse_scenario(text), InputError) << text; }

}  // namespace

TEST(Scenario, ShippedFilesLoadAndRoundTrip) {
    const auto files = scenario_files();
    ASSERT_GE(files.size(), 5u);
    for (const auto &path : files) {
        SCOPED_TRACE(path.string());
        const Scenario first = load_scenario(path.string());
        const Scenario again = parse_scenario(emit_scenario(first));
        EXPECT_EQ(again.id, first.id);
        EXPECT_EQ(again.seed, first.seed);
        EXPECT_EQ(again.detector_dim, first.detector_dim);
        EXPECT_LE(max_abs_diff(again.quanton, first.quanton), 1e-15);
        EXPECT_LE(max_abs_diff(again.detector_state, first.detector_state), 1e-15);
        EXPECT_LE(max_abs_diff(again.detector_unitary, first.detector_unitary), 1e-15);
        EXPECT_EQ(again.phi, first.phi);
        ASSERT_EQ(again.strategy.has_value(), first.strategy.has_value());
        if (first.strategy) {
            EXPECT_EQ(again.strategy->subset, first.strategy->subset);
            EXPECT_LE(max_abs_diff(again.strategy->basis, first.strategy->basis), 1e-15);
        }
        // Emission is a fixed point.
        EXPECT_EQ(emit_scenario(again), emit_scenario(first));
    }
}

TEST(Scenario, PresetsResolveToExpectedMatrices) {
    const Scenario s = parse_scenario(R"({
        "quanton": {"bloch": [0, 0, 1]},
        "detector": {"dim": 3, "state": "maximally-mixed", "unitary": "pauli-x"}
    })");
    EXPECT_EQ(s.id, "scenario");
    EXPECT_FALSE(s.strategy.has_value());
    EXPECT_LE(max_abs_diff(s.detector_state, CMatrix::identity(3) * (1.0 / 3.0)), 1e-16);
    EXPECT_EQ(s.detector_unitary(0, 1), cplx(1.0));
    EXPECT_EQ(s.detector_unitary(2, 2), cplx(1.0));
    EXPECT_EQ(s.detector_unitary(0, 0), cplx(0.0));
    EXPECT_EQ(s.quanton(0, 0), cplx(1.0));

    const Scenario r = parse_scenario(R"({
        "quanton": {"bloch": [0, 0, 0]},
        "detector": {"dim": 2, "state": "ground", "unitary": {"preset": "x-rotation", "theta": 3.141592653589793}}
    })");
    EXPECT_NEAR(std::abs(r.detector_unitary(0, 1) - cplx(0.0, -1.0)), 0.0, 1e-15);
}

TEST(Scenario, RandomPresetsFollowTheSeed) {
    const char *text = R"({"quanton": {"bloch": [0, 0, 0]},
        "detector": {"dim": 4, "state": "random", "unitary": "random"}, "seed": 11})";
    const Scenario a = parse_scenario(text);
    const Scenario b = parse_scenario(text);
    EXPECT_EQ(a.detector_state, b.detector_state);
    EXPECT_EQ(a.detector_unitary, b.detector_unitary);
    const Scenario c = parse_scenario(R"({"quanton": {"bloch": [0, 0, 0]},
        "detector": {"dim": 4, "state": "random", "unitary": "random"}, "seed": 12})");
    EXPECT_NE(a.detector_state, c.detector_state);
}

TEST(Scenario, ComplexEntriesAndExplicitStrategy) {
    const Scenario s = parse_scenario(R"({
        "quanton": {"matrix": [[0.5, [0, -0.5]], [[0, 0.5], 0.5]]},
        "detector": {"state": {"matrix": [[1, 0], [0, 0]]}, "unitary": "identity"},
        "strategy": {"subset": [1]}
    })");
    EXPECT_EQ(s.detector_dim, 2u);
    EXPECT_EQ(s.quanton(0, 1), cplx(0.0, -0.5));
    ASSERT_TRUE(s.strategy.has_value());
    EXPECT_EQ(s.strategy->subset, std::vector<std::size_t>{1});
    EXPECT_EQ(s.strategy->basis, CMatrix::identity(2));
}

TEST(Scenario, MalformedInputIsAnInputError) {
    expect_input_error("{");
    expect_input_error("[]");
    expect_input_error(R"({"quanton": {"bloch": [0, 0, 0]}, "detector": {"dim": 2, "state": "ground", "unitary": "identity"}, "extra": 1})");
    expect_input_error(R"({"detector": {"dim": 2, "state": "ground", "unitary": "identity"}})");
    expect_input_error(R"({"quanton": {"bloch": [0, 0]}, "detector": {"dim": 2, "state": "ground", "unitary": "identity"}})");
    expect_input_error(R"({"quanton": {"bloch": [0, 0, 0]}, "detector": {"dim": 2, "state": "excited", "unitary": "identity"}})");
    expect_input_error(R"({"quanton": {"bloch": [0, 0, 0]}, "detector": {"dim": 2, "state": "ground", "unitary": "hadamard"}})");
    expect_input_error(R"({"quanton": {"matrix": [[1, 0], [0]]}, "detector": {"dim": 2, "state": "ground", "unitary": "identity"}})");
    expect_input_error(R"({"quanton": {"bloch": [0, 0, 0]}, "detector": {"state": "ground", "unitary": "identity"}})");
    expect_input_error(R"({"quanton": {"bloch": [0, 0, 0]}, "detector": {"dim": 2, "state": "ground", "unitary": "identity"}, "strategy": "best"})");
    expect_input_error(R"({"quanton": {"bloch": [0, 0, 0]}, "detector": {"dim": 2, "state": "ground", "unitary": "identity"}, "seed": -1})");
}

TEST(Scenario, PhysicallyInvalidInputKeepsItsErrorKind) {
    EXPECT_EQ(kind_of(R"({"quanton": {"bloch": [0, 0, 0]}, "detector": {"dim": 9, "state": "ground", "unitary": "identity"}})"),
              ErrorKind::BadDimension);
    EXPECT_EQ(kind_of(R"({"quanton": {"bloch": [0, 0, 0]}, "detector": {"state": {"matrix": [[1.5, 0], [0, -0.5]]}, "unitary": "identity"}})"),
              ErrorKind::InvalidState);
    EXPECT_EQ(kind_of(R"({"quanton": {"bloch": [0.9, 0.9, 0]}, "detector": {"dim": 2, "state": "ground", "unitary": "identity"}})"),
              ErrorKind::InvalidState);
    EXPECT_EQ(kind_of(R"({"quanton": {"bloch": [0, 0, 0]}, "detector": {"dim": 2, "state": "ground", "unitary": {"matrix": [[1, 1], [0, 1]]}}})"),
              ErrorKind::NotUnitary);
    EXPECT_EQ(kind_of(R"({"quanton": {"bloch": [0, 0, 0]}, "detector": {"dim": 3, "state": {"matrix": [[1, 0], [0, 0]]}, "unitary": "identity"}})"),
              ErrorKind::DimensionMismatch);
    EXPECT_EQ(kind_of(R"({"quanton": {"bloch": [0, 0, 0]}, "detector": {"dim": 2, "state": "ground", "unitary": "identity"}, "strategy": {"subset": [2]}})"),
              ErrorKind::InvalidStrategy);
}

TEST(ResultCsv, HeaderAndRowShape) {
    const std::string header = csv_header();
    EXPECT_EQ(header.rfind("#schema=1\n", 0), 0u);
    const auto columns = std::count(header.begin(), header.end(), ',');
    const ResultRow row = evaluate(load_scenario(std::string(MZJM_SCENARIO_DIR) + "/random_qutrit.json"));
    const std::string line = csv_row(row);
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), columns);
    EXPECT_EQ(line.back(), '\n');
    // 17 significant digits: the written value parses back to the same double.
    std::istringstream fields(line);
    std::string field;
    for (int k = 0; k < 5; ++k) std::getline(fields, field, ',');
    EXPECT_EQ(std::stod(field), row.report.V0);
}

TEST(ResultCsv, QuotesIdentifiersWithCommas) {
    Scenario s = load_scenario(std::string(MZJM_SCENARIO_DIR) + "/pure_detector_identity.json");
    s.id = "a,\"b\"";
    EXPECT_EQ(csv_row(evaluate(s)).rfind("\"a,\"\"b\"\"\",", 0), 0u);
}
