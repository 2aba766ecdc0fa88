#include "dcsarch/model.hpp"

#include "dcsarch/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace dcsarch {

std::size_t sample_weighted(std::span<const double> weights, Rng& rng) {
    double total = 0.0;
    for (double w : weights) total += w;
    const double u = uniform01(rng);
    if (!(total > 0.0) || !std::isfinite(total)) {
        return std::min(static_cast<std::size_t>(u * static_cast<double>(weights.size())),
                        weights.size() - 1);
    }
    const double target = u * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (target < acc) return i;
    }
    // rounding left target == total; return the last non-zero weight
    for (std::size_t i = weights.size(); i-- > 0;) {
        if (weights[i] > 0.0) return i;
    }
    return weights.size() - 1;
}

std::vector<ControlLoop> expand_loops(const std::vector<LoopGroup>& groups) {
    std::vector<ControlLoop> out;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (groups[g].count < 1) {
            throw ModelError("loops[" + std::to_string(g) + "].count must be >= 1");
        }
        out.insert(out.end(), static_cast<std::size_t>(groups[g].count), groups[g].loop);
    }
    return out;
}

std::vector<LoopGroup> group_loops(const std::vector<ControlLoop>& loops) {
    std::vector<LoopGroup> out;
    for (const auto& l : loops) {
        if (!out.empty() && out.back().loop == l) {
            ++out.back().count;
        } else {
            out.push_back({1, l});
        }
    }
    return out;
}

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ModelError(what);
}

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

}  // namespace

void check_device_type(const DeviceType& t) {
    const std::string p = "device type '" + t.id + "': ";
    require(!t.id.empty(), "device type id must be non-empty");
    require(std::isfinite(t.cost) && t.cost > 0.0, p + "cost must be > 0");
    require(t.channels >= 0, p + "channels must be >= 0");
    require(finite_nonneg(t.memory), p + "memory must be >= 0");
    require(std::isfinite(t.fail_prob) && t.fail_prob >= 0.0 && t.fail_prob <= 1.0,
            p + "fail_prob must be in [0,1]");
    require(finite_nonneg(t.instr_time), p + "instr_time must be >= 0");
    require(t.max_children >= 0, p + "max_children must be >= 0");
    require(finite_nonneg(t.relay_delay), p + "relay_delay must be >= 0");
    require(!t.is_processor || t.relay_delay == 0.0,
            p + "relay_delay must be 0 for a processing unit");
}

void check_loop(const ControlLoop& loop) {
    require(loop.signals >= 1, "loop signals must be >= 1");
    require(std::isfinite(loop.memory) && loop.memory > 0.0, "loop memory must be > 0");
    require(loop.instructions >= 0, "loop instructions must be >= 0");
}

void check_instance(const ProblemInstance& inst) {
    require(!inst.device_types.empty(), "device_types must be non-empty");
    require(!inst.loops.empty(), "loops must be non-empty");
    require(inst.levels >= 2, "levels must be >= 2");
    require(std::isfinite(inst.t_max) && inst.t_max >= 0.0, "t_max must be >= 0");
    require(std::isfinite(inst.p_max) && inst.p_max >= 0.0 && inst.p_max <= 1.0,
            "p_max must be in [0,1]");
    for (std::size_t i = 0; i < inst.device_types.size(); ++i) {
        check_device_type(inst.device_types[i]);
        for (std::size_t j = 0; j < i; ++j) {
            require(inst.device_types[j].id != inst.device_types[i].id,
                    "duplicate device type id '" + inst.device_types[i].id + "'");
        }
    }
    for (const auto& l : inst.loops) check_loop(l);
}

// ---------------------------------------------------------------------------

const Node& Architecture::node(NodeId v) const {
    if (v >= nodes_.size()) {
        throw std::out_of_range("unknown node index " + std::to_string(v));
    }
    return nodes_[v];
}

std::vector<NodeId> Architecture::roots() const {
    std::vector<NodeId> out;
    for (NodeId v = 0; v < nodes_.size(); ++v) {
        if (!nodes_[v].parent) out.push_back(v);
    }
    return out;
}

std::vector<NodeId> Architecture::leaves_at(int level) const {
    std::vector<NodeId> out;
    for (NodeId v = 0; v < nodes_.size(); ++v) {
        if (nodes_[v].level == level) out.push_back(v);
    }
    return out;
}

std::vector<NodeId> Architecture::subtree(NodeId v) const {
    node(v);
    std::vector<NodeId> out;
    std::vector<NodeId> stack{v};
    while (!stack.empty()) {
        NodeId u = stack.back();
        stack.pop_back();
        out.push_back(u);
        for (NodeId c : nodes_[u].children) stack.push_back(c);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<NodeId> Architecture::path_to_root(NodeId v) const {
    node(v);
    std::vector<NodeId> out{v};
    while (nodes_[out.back()].parent) out.push_back(*nodes_[out.back()].parent);
    return out;
}

bool Architecture::is_ancestor_or_self(NodeId ancestor, NodeId v) const {
    node(ancestor);
    node(v);
    for (std::optional<NodeId> u = v; u; u = nodes_[*u].parent) {
        if (*u == ancestor) return true;
    }
    return false;
}

std::vector<LoopIndex> Architecture::loops_connected_to(NodeId v) const {
    std::vector<LoopIndex> out;
    for (LoopIndex a = 0; a < connections_.size(); ++a) {
        if (std::find(connections_[a].begin(), connections_[a].end(), v) != connections_[a].end()) {
            out.push_back(a);
        }
    }
    return out;
}

std::vector<LoopIndex> Architecture::loops_assigned_to(NodeId v) const {
    std::vector<LoopIndex> out;
    for (LoopIndex a = 0; a < assignments_.size(); ++a) {
        if (std::find(assignments_[a].begin(), assignments_[a].end(), v) != assignments_[a].end()) {
            out.push_back(a);
        }
    }
    return out;
}

ArchitectureBuilder::ArchitectureBuilder(std::size_t loop_count) {
    arch_.connections_.resize(loop_count);
    arch_.assignments_.resize(loop_count);
}

void ArchitectureBuilder::check_node(NodeId v) const {
    if (v >= arch_.nodes_.size()) {
        throw std::out_of_range("unknown node index " + std::to_string(v));
    }
}

void ArchitectureBuilder::check_loop(LoopIndex a) const {
    if (a >= arch_.connections_.size()) {
        throw std::out_of_range("unknown loop index " + std::to_string(a));
    }
}

NodeId ArchitectureBuilder::add_root(TypeIndex type) {
    arch_.nodes_.push_back(Node{type, 1, std::nullopt, {}});
    return arch_.nodes_.size() - 1;
}

NodeId ArchitectureBuilder::add_child(NodeId parent, TypeIndex type) {
    check_node(parent);
    const NodeId v = arch_.nodes_.size();
    arch_.nodes_.push_back(Node{type, arch_.nodes_[parent].level + 1, parent, {}});
    arch_.nodes_[parent].children.push_back(v);
    return v;
}

void ArchitectureBuilder::set_type(NodeId v, TypeIndex type) {
    check_node(v);
    arch_.nodes_[v].type = type;
}

void ArchitectureBuilder::connect(LoopIndex a, NodeId leaf) {
    check_loop(a);
    check_node(leaf);
    arch_.connections_[a].push_back(leaf);
}

void ArchitectureBuilder::assign(LoopIndex a, NodeId processor) {
    check_loop(a);
    check_node(processor);
    arch_.assignments_[a].push_back(processor);
}

Architecture ArchitectureBuilder::build() && { return std::move(arch_); }

}  // namespace dcsarch
