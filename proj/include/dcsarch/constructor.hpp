#pragma once

#include "dcsarch/feasibility.hpp"
#include "dcsarch/model.hpp"
#include "dcsarch/rng.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace dcsarch {

enum class DecisionContext { BackbonePlacement, LeafExpansion, BranchExtension, ProcessorUpgrade };

/// A site where the constructor asks its policy for a device type.
struct DecisionPoint {
    int level = 1;
    std::vector<TypeIndex> allowed;
    DecisionContext context = DecisionContext::BackbonePlacement;
};

struct Decision {
    DecisionPoint point;
    TypeIndex chosen = 0;
};

class DecisionPolicy {
public:
    virtual ~DecisionPolicy() = default;
    /// Returns an element of point.allowed (never empty when called).
    virtual TypeIndex choose(const DecisionPoint& point, Rng& rng) const = 0;
};

/// Every allowed option equally likely. Consumes the RNG exactly like a
/// weighted draw with unit weights.
class UniformPolicy final : public DecisionPolicy {
public:
    TypeIndex choose(const DecisionPoint& point, Rng& rng) const override;
};

enum class CandidateStatus { Feasible, ReliabilityExceeded, ConstructionFailed };

struct Candidate {
    /// Present whenever construction completed (even if reliability failed).
    std::optional<Architecture> architecture;
    double cost = 0.0;
    bool feasible = false;
    CandidateStatus status = CandidateStatus::ConstructionFailed;
    /// One surviving decision per placed node, in node order; backtracked
    /// choices are dropped and a processor upgrade replaces the node's entry.
    std::vector<Decision> decisions;
    /// Total number of policy calls, including backtracked ones.
    std::size_t decisions_made = 0;
    std::string failure_reason;
    std::optional<FeasibilityReport> report;
};

struct ConstructionLimits {
    /// Policy calls allowed per candidate; 0 selects 10 * loops * levels.
    std::size_t decision_budget = 0;
};

/// Step-wise candidate construction. Use construct_candidate() unless the
/// intermediate stages are of interest.
class Constructor {
public:
    Constructor(const ProblemInstance& inst, const DecisionPolicy& policy, Rng& rng,
                ConstructionLimits limits = {});

    /// Root-to-leaf chain of `levels` nodes holding exactly one processor,
    /// whose level becomes the processor level of the whole tree.
    bool build_backbone();

    /// Connects every loop in input order (first fit on the current leaf),
    /// upgrading processors on memory overflow and growing the tree when a
    /// leaf or processor is exhausted.
    bool attach_loops();

    /// Reliability check and cost; re-validates the full constraint set.
    Candidate finish();

    /// Current partial tree with the loops placed so far.
    Architecture snapshot() const;
    int processor_level() const { return proc_level_; }
    const std::string& failure_reason() const { return failure_; }
    std::size_t decisions_made() const { return decisions_made_; }

private:
    struct WorkNode {
        TypeIndex type = 0;
        int level = 1;
        int parent = -1;
        std::vector<int> children;
        int used_channels = 0;
        std::vector<LoopIndex> connected;
        double load_instr = 0.0;
        double load_memory = 0.0;
        double max_delay = 0.0;
        std::vector<LoopIndex> assigned;
        std::vector<TypeIndex> upgrade_tried;
        Decision decision;
    };

    const DeviceType& type_of(int v) const { return inst_.type(nodes_[static_cast<std::size_t>(v)].type); }
    WorkNode& at(int v) { return nodes_[static_cast<std::size_t>(v)]; }
    const WorkNode& at(int v) const { return nodes_[static_cast<std::size_t>(v)]; }

    TypeIndex choose(DecisionPoint point);
    int add_node(TypeIndex t, int level, int parent, Decision decision);
    void remove_last_node(int v);
    int processor_of(int v) const;
    int ancestor_at(int v, int level) const;
    double relay_delay(int leaf, int processor) const;

    bool backbone_can_complete(int level, bool placed) const;
    std::vector<TypeIndex> backbone_allowed(int level, bool placed) const;
    std::vector<TypeIndex> expansion_allowed(int level, LoopIndex a) const;
    bool chain_possible(int level, LoopIndex a) const;

    bool place_loop(LoopIndex a);
    bool ensure_memory(int proc, LoopIndex a);
    bool upgrade_processor(int proc);
    bool fits_time(int proc, LoopIndex a, double delay) const;
    bool expand(LoopIndex a, int start_level);
    bool extend(int parent, int level, LoopIndex a);
    bool accept_leaf(int leaf, LoopIndex a) const;
    void connect(LoopIndex a, int leaf);
    bool fail(std::string why);

    const ProblemInstance& inst_;
    const DecisionPolicy& policy_;
    Rng& rng_;
    std::size_t budget_;
    std::size_t decisions_made_ = 0;
    std::vector<WorkNode> nodes_;
    std::vector<std::array<bool, 2>> completable_;
    int proc_level_ = 0;
    int current_leaf_ = -1;
    std::string failure_;
    bool failed_ = false;
};

/// Builds one candidate: backbone, greedy loop attachment with tree
/// expansion, reliability check and cost evaluation.
Candidate construct_candidate(const ProblemInstance& inst, const DecisionPolicy& policy, Rng& rng,
                              ConstructionLimits limits = {});

}  // namespace dcsarch
