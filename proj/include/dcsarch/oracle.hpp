#pragma once

#include "dcsarch/model.hpp"

#include <cstddef>
#include <optional>

namespace dcsarch {

struct ExactLimits {
    std::size_t max_nodes = 64;
    /// Seconds of search before giving up.
    double time_budget = 60.0;
};

enum class ExactStatus { Optimal, Infeasible, BudgetExceeded };

struct ExactResult {
    ExactStatus status = ExactStatus::Infeasible;
    /// Present iff status == Optimal; passes validate() with no violations.
    std::optional<Architecture> architecture;
    double cost = 0.0;
};

/// Branch and bound over canonical homogeneous trees followed by a
/// loop-to-leaf assignment search. Works for arbitrary loops; meant for
/// small instances.
ExactResult exact_solve(const ProblemInstance& inst, const ExactLimits& limits = {});

/// Dynamic program over loop counts for instances whose loops are all
/// identical. Minimizes cost over (cost, survival) Pareto fronts when the
/// cheapest tree breaks the reliability limit. Ignores limits.max_nodes.
/// Throws std::invalid_argument if the loops differ.
ExactResult exact_solve_identical_loops(const ProblemInstance& inst, const ExactLimits& limits = {});

bool loops_identical(const ProblemInstance& inst);

}  // namespace dcsarch
