#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chorefair/cost_value.hpp"

namespace chorefair::verify {

struct ClaimCheck {
    std::string id;     // stable claim identifier, e.g. "theorem1/best-ratio"
    std::string detail; // expected vs observed, human readable
    bool pass = false;
    double seconds = 0.0;
};

struct Options {
    std::uint64_t budget = 20'000'000;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::optional<Rational> k;                        // theorem1 / corollary2 override
    std::optional<std::vector<std::int64_t>> ints;    // npc / strong-np override
    std::optional<std::uint64_t> trials;              // property-suite override
};

// One section per acceptance criterion. Each returns one ClaimCheck per
// criterion it covers, pass/fail decided at the criterion's stated
// tolerance (exact unless noted).

std::vector<ClaimCheck> check_theorem1(const Options& opts);      // criteria 1 and 2
std::vector<ClaimCheck> check_corollary2(const Options& opts);    // criterion 3
std::vector<ClaimCheck> check_npc(const Options& opts);           // criterion 4
std::vector<ClaimCheck> check_strong_np(const Options& opts);     // criterion 5
std::vector<ClaimCheck> check_theorem7(const Options& opts);      // criterion 6
std::vector<ClaimCheck> check_theorem6(const Options& opts);      // criterion 7
std::vector<ClaimCheck> check_theorem8(const Options& opts);      // criterion 8
std::vector<ClaimCheck> check_ttece(const Options& opts);         // criterion 9
std::vector<ClaimCheck> check_oracle(const Options& opts);        // criterion 10
std::vector<ClaimCheck> check_observation12(const Options& opts); // criterion 11

/// Selector dispatch for the CLI: theorem1, corollary2, npc, strong-np,
/// theorem7, theorem6, theorem8, ttece, oracle, observation12, or all.
std::vector<ClaimCheck> run_selector(const std::string& selector, const Options& opts);

const std::vector<std::string>& selectors();

} // namespace chorefair::verify
