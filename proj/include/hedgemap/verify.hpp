#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace hedgemap {

// One quantitative claim about the models, executed as a seeded sampling (or
// exact) check. `worst_violation <= tolerance` iff `pass`.
struct ClaimResult {
    std::string id;
    std::string statement;
    bool pass = false;
    double worst_violation = 0.0;
    double tolerance = 0.0;
    long samples = 0;
    std::uint64_t seed = 0;
    double millis = 0.0;
};

// Runs every claim; individual failures are recorded, never aborting the run.
// Claims draw from independent streams derived from `seed`, so reports are
// reproducible byte for byte.
std::vector<ClaimResult> run_all_claims(std::uint64_t seed);

bool all_pass(const std::vector<ClaimResult>& results);

void print_claim_summary(std::ostream& os, const std::vector<ClaimResult>& results);

nlohmann::json claims_to_json(const std::vector<ClaimResult>& results,
                              std::uint64_t seed);

}  // namespace hedgemap
