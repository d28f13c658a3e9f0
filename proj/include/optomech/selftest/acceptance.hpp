#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "optomech/params.hpp"

namespace optomech::selftest {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

// Random scenario around the fig1 preset (pinned detuning). May be unstable.
// With `allow_blue` the detuning can be negative.
SystemParams random_scenario(std::mt19937_64& rng, bool allow_blue = false);

// `count` dynamically stable random scenarios, deterministic for a seed.
std::vector<SystemParams> random_stable_scenarios(std::size_t count, std::uint64_t seed);

inline constexpr int kCriterionCount = 11;

// Runs the listed criteria (1-based ids), or all of them in order when `ids` is empty.
std::vector<CriterionResult> run_acceptance(std::span<const int> ids = {});

// One "PASS|FAIL  #id  title: detail (t s)" line per criterion; returns true
// when every criterion passed.
bool print_results(std::ostream& out, const std::vector<CriterionResult>& results);

}  // namespace optomech::selftest
