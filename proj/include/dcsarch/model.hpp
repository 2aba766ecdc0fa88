#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dcsarch {

using NodeId = std::size_t;
using TypeIndex = std::size_t;
using LoopIndex = std::size_t;

/// Catalog entry for a commercially available device.
///
/// Relay units ignore `memory` and `instr_time`; processors carry no relay
/// delay. Missing catalog values are stored as 0.
struct DeviceType {
    std::string id;
    double cost = 0.0;
    int channels = 0;
    double memory = 0.0;
    double fail_prob = 0.0;
    double instr_time = 0.0;
    bool is_processor = false;
    int max_children = 0;
    double relay_delay = 0.0;

    bool operator==(const DeviceType&) const = default;
};

struct ControlLoop {
    int signals = 1;
    double memory = 0.0;
    int instructions = 0;

    bool operator==(const ControlLoop&) const = default;
};

struct LoopGroup {
    int count = 1;
    ControlLoop loop;
};

struct ProblemInstance {
    std::vector<DeviceType> device_types;
    std::vector<ControlLoop> loops;
    int levels = 2;
    double t_max = 0.0;
    double p_max = 0.0;
    /// Free-form provenance note carried through serialization.
    std::string note;

    bool operator==(const ProblemInstance&) const = default;

    const DeviceType& type(TypeIndex i) const { return device_types.at(i); }
    std::size_t loop_count() const { return loops.size(); }
};

class ModelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Expands (count, loop) groups in order. Throws ModelError on count < 1.
std::vector<ControlLoop> expand_loops(const std::vector<LoopGroup>& groups);

/// Run-length encodes consecutive identical loops.
std::vector<LoopGroup> group_loops(const std::vector<ControlLoop>& loops);

/// Throws ModelError naming the first offending field.
void check_device_type(const DeviceType& t);
void check_loop(const ControlLoop& loop);
void check_instance(const ProblemInstance& inst);

struct Node {
    TypeIndex type = 0;
    int level = 1;
    std::optional<NodeId> parent;
    std::vector<NodeId> children;
};

/// A placed device tree with loop connections and processor assignments.
///
/// Connections and assignments are stored per loop as node lists so that
/// externally authored designs violating the one-leaf / one-processor rules
/// can still be represented and diagnosed. Subtree and root paths are derived
/// on demand from the parent links.
class Architecture {
public:
    const std::vector<Node>& nodes() const { return nodes_; }
    const Node& node(NodeId v) const;
    std::size_t node_count() const { return nodes_.size(); }
    std::size_t loop_count() const { return connections_.size(); }

    const std::vector<NodeId>& connections(LoopIndex a) const { return connections_.at(a); }
    const std::vector<NodeId>& assignments(LoopIndex a) const { return assignments_.at(a); }

    std::vector<NodeId> roots() const;
    std::vector<NodeId> leaves_at(int level) const;

    /// Nodes of the subtree rooted at v, v included, in index order.
    std::vector<NodeId> subtree(NodeId v) const;
    /// v first, root last.
    std::vector<NodeId> path_to_root(NodeId v) const;
    bool is_ancestor_or_self(NodeId ancestor, NodeId v) const;

    /// Loops whose connection list contains v, in index order.
    std::vector<LoopIndex> loops_connected_to(NodeId v) const;
    std::vector<LoopIndex> loops_assigned_to(NodeId v) const;

private:
    friend class ArchitectureBuilder;
    std::vector<Node> nodes_;
    std::vector<std::vector<NodeId>> connections_;
    std::vector<std::vector<NodeId>> assignments_;
};

/// Single-owner mutable builder. Parents must exist before their children,
/// which keeps every built architecture acyclic.
class ArchitectureBuilder {
public:
    explicit ArchitectureBuilder(std::size_t loop_count);

    NodeId add_root(TypeIndex type);
    NodeId add_child(NodeId parent, TypeIndex type);
    void set_type(NodeId v, TypeIndex type);
    void connect(LoopIndex a, NodeId leaf);
    void assign(LoopIndex a, NodeId processor);

    std::size_t node_count() const { return arch_.nodes_.size(); }
    Architecture build() &&;

private:
    void check_node(NodeId v) const;
    void check_loop(LoopIndex a) const;
    Architecture arch_;
};

}  // namespace dcsarch
