#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace sglab {

// One verification criterion of the built-in battery.  `pass` depends only
// on computed numbers (deterministic given the seed); wall time is kept
// separate so reports stay byte-identical across runs.
struct CriterionResult {
    int index = 0;
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    double limit_seconds = 0.0;
    std::string detail;
    nlohmann::json data;
};

struct AcceptanceSuite {
    std::uint64_t seed = 1;
    std::vector<CriterionResult> items;

    bool all_pass() const;
    bool runtime_ok() const; // every criterion within its time budget

    nlohmann::json report_json() const; // deterministic content only
    nlohmann::json meta_json() const;   // timestamps and durations
};

// Runs the full battery (the last entry re-runs the deterministic part and
// byte-compares the serialized reports).
AcceptanceSuite run_acceptance_suite(std::uint64_t seed);

} // namespace sglab
