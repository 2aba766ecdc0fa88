#pragma once

#include "dcsarch/model.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dcsarch {

/// One tag per constraint family checked by validate().
enum class Constraint {
    SingleRoot,        // exactly one parentless node
    LeafLevel,         // leaves sit at the last level and have no children
    FanOut,            // child count within the type's limit
    LoopConnection,    // every loop wired to exactly one leaf
    RelayAssignment,   // relays never process loops
    SingleAssignment,  // every loop processed by exactly one node
    Memory,            // processor memory covers its assigned loops
    SubtreeService,    // a processor serves only leaves below it
    Channels,          // leaf channels cover connected signals
    Timing,            // worst loop response time within t_max
    Reliability,       // system failure probability within p_max
    ProcessorParent,   // no processor directly under a processor
    ProcessorSubtree,  // no processor below a processor
    ProcessorOnPath,   // exactly one processor on every leaf-to-root path
};

inline constexpr Constraint kAllConstraints[] = {
    Constraint::SingleRoot,       Constraint::LeafLevel,       Constraint::FanOut,
    Constraint::LoopConnection,   Constraint::RelayAssignment, Constraint::SingleAssignment,
    Constraint::Memory,           Constraint::SubtreeService,  Constraint::Channels,
    Constraint::Timing,           Constraint::Reliability,     Constraint::ProcessorParent,
    Constraint::ProcessorSubtree, Constraint::ProcessorOnPath,
};

std::string_view constraint_name(Constraint c);

struct Violation {
    Constraint constraint;
    std::vector<NodeId> nodes;
    std::vector<LoopIndex> loops;
};

struct FeasibilityReport {
    std::vector<Violation> violations;
    double worst_loop_time = 0.0;
    double system_fail_prob = 0.0;
    double total_cost = 0.0;

    bool feasible() const { return violations.empty(); }
    bool violates(Constraint c) const;
};

double total_cost(const Architecture& arch, const ProblemInstance& inst);

/// 1 - prod(1 - P_v) over all placed devices.
double system_failure_probability(const Architecture& arch, const ProblemInstance& inst);

/// Response time of loop a: accumulated instruction time of every loop on
/// a's processor plus twice the relay delay between a's leaf and that
/// processor. Throws std::invalid_argument unless a has exactly one
/// connection and one assignment and the processor lies on the leaf's root
/// path.
double loop_response_time(const Architecture& arch, const ProblemInstance& inst, LoopIndex a);

/// Relay delay accumulated walking up from `leaf` to `processor` (inclusive),
/// summed in leaf-to-root order.
double path_relay_delay(const Architecture& arch, const ProblemInstance& inst, NodeId leaf,
                        NodeId processor);

/// Checks every constraint family without short-circuiting.
/// Precondition: arch.loop_count() == inst.loops.size() and every node type
/// indexes the catalog.
FeasibilityReport validate(const Architecture& arch, const ProblemInstance& inst);

struct CapacityBounds {
    /// Empty when no feasible tree can exist (no leaf-capable type or no
    /// interior type with fan-out).
    std::optional<std::size_t> min_leaves;
    std::optional<std::size_t> min_devices;

    bool bounded() const { return min_leaves.has_value(); }
};

CapacityBounds capacity_lower_bounds(const ProblemInstance& inst);

}  // namespace dcsarch
