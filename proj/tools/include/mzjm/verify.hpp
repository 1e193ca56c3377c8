#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace mzjm::verify {

struct VerifyConfig {
    std::uint64_t seed = 0x5eed2026ULL;
    /// Sample size of the largest criteria; the others scale from it
    /// (count/10 setups, count/100 slope detectors).
    std::size_t count = 10000;
    unsigned threads = 0;
};

struct CriterionResult {
    int number = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

using ResultSink = std::function<void(const CriterionResult &)>;

/// Runs every acceptance criterion in order; `sink` sees each result as soon as it is known.
std::vector<CriterionResult> run_acceptance(const VerifyConfig &config, const ResultSink &sink = {});

/// "PASS [n] name: detail (t s)"
std::string format_result(const CriterionResult &result);

/// Prints one line per criterion plus a summary; returns 0 when all pass, 1 otherwise.
int cmd_verify(const VerifyConfig &config, std::ostream &out);

}  // namespace mzjm::verify
