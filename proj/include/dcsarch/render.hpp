#pragma once

#include "dcsarch/aco.hpp"
#include "dcsarch/model.hpp"

#include <string>
#include <string_view>

namespace dcsarch {

enum class RenderFormat { Text, Dot };

/// Deterministic rendering: children are listed in a canonical order
/// (by rendered subtree), so equal trees render identically regardless of
/// node numbering.
std::string render_tree(const Architecture& arch, const ProblemInstance& inst, RenderFormat format);

/// "iteration,best_cost,iter_best_cost,feasible_ants" plus one row per
/// iteration; absent costs are empty fields, values use 17 significant digits.
std::string export_convergence(const ConvergenceTrace& trace);

/// Reads back export_convergence output. Throws std::runtime_error on
/// malformed rows.
ConvergenceTrace parse_convergence(std::string_view csv);

/// printf "%.17g".
std::string format_number(double x);

}  // namespace dcsarch
