#pragma once

#include <stdexcept>
#include <string>

namespace hedgemap {

// Gradient requested where the analytic formulas degenerate (boundary height
// below the reporting threshold, or a vanishing implicit-function denominator).
struct DegenerateInput : std::runtime_error {
    explicit DegenerateInput(const std::string& what) : std::runtime_error(what) {}
};

// No admissible height exists above the requested (x1, x2) column.
struct InfeasibleColumn : std::runtime_error {
    explicit InfeasibleColumn(const std::string& what) : std::runtime_error(what) {}
};

// Price requested for a vector outside the payoff span.
struct NotInPayoffSpace : std::runtime_error {
    explicit NotInPayoffSpace(const std::string& what) : std::runtime_error(what) {}
};

// The risk program found no feasible payoff below the search cap; indicates a
// broken custom model rather than a property of the canonical ones.
struct SolverInfeasible : std::runtime_error {
    explicit SolverInfeasible(const std::string& what) : std::runtime_error(what) {}
};

// A sequence probe that requires singleton optimal sets met a wide one.
struct NonSingletonSequence : std::runtime_error {
    explicit NonSingletonSequence(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hedgemap
