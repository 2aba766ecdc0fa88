#include "dcsarch/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dcsarch {

std::string_view constraint_name(Constraint c) {
    switch (c) {
        case Constraint::SingleRoot: return "single-root";
        case Constraint::LeafLevel: return "leaf-level";
        case Constraint::FanOut: return "fan-out";
        case Constraint::LoopConnection: return "loop-connection";
        case Constraint::RelayAssignment: return "relay-assignment";
        case Constraint::SingleAssignment: return "single-assignment";
        case Constraint::Memory: return "memory";
        case Constraint::SubtreeService: return "subtree-service";
        case Constraint::Channels: return "channels";
        case Constraint::Timing: return "timing";
        case Constraint::Reliability: return "reliability";
        case Constraint::ProcessorParent: return "processor-parent";
        case Constraint::ProcessorSubtree: return "processor-subtree";
        case Constraint::ProcessorOnPath: return "processor-on-path";
    }
    return "unknown";
}

bool FeasibilityReport::violates(Constraint c) const {
    return std::any_of(violations.begin(), violations.end(),
                       [c](const Violation& v) { return v.constraint == c; });
}

double total_cost(const Architecture& arch, const ProblemInstance& inst) {
    double sum = 0.0;
    for (const auto& n : arch.nodes()) sum += inst.type(n.type).cost;
    return sum;
}

double system_failure_probability(const Architecture& arch, const ProblemInstance& inst) {
    double survive = 1.0;
    for (const auto& n : arch.nodes()) survive *= 1.0 - inst.type(n.type).fail_prob;
    return 1.0 - survive;
}

double path_relay_delay(const Architecture& arch, const ProblemInstance& inst, NodeId leaf,
                        NodeId processor) {
    double d = 0.0;
    std::optional<NodeId> v = leaf;
    for (; v; v = arch.node(*v).parent) {
        const auto& t = inst.type(arch.node(*v).type);
        if (!t.is_processor) d += t.relay_delay;
        if (*v == processor) break;
    }
    if (!v) throw std::invalid_argument("processor is not on the leaf's root path");
    return d;
}

namespace {

std::vector<NodeId> unique_sorted(std::vector<NodeId> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

struct Loads {
    std::vector<double> instr;   // sum of w over assigned loops
    std::vector<double> memory;  // sum of r over assigned loops
    std::vector<long> signals;   // sum of n over connected loops
};

Loads compute_loads(const Architecture& arch, const ProblemInstance& inst) {
    const std::size_t n = arch.node_count();
    Loads l{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), std::vector<long>(n, 0)};
    for (LoopIndex a = 0; a < arch.loop_count(); ++a) {
        const auto& loop = inst.loops[a];
        for (NodeId v : unique_sorted(arch.assignments(a))) {
            l.instr[v] += static_cast<double>(loop.instructions);
            l.memory[v] += loop.memory;
        }
        for (NodeId v : unique_sorted(arch.connections(a))) l.signals[v] += loop.signals;
    }
    return l;
}

}  // namespace

double loop_response_time(const Architecture& arch, const ProblemInstance& inst, LoopIndex a) {
    if (a >= arch.loop_count()) throw std::invalid_argument("unknown loop index");
    const auto conn = unique_sorted(arch.connections(a));
    const auto asg = unique_sorted(arch.assignments(a));
    if (conn.size() != 1 || asg.size() != 1) {
        throw std::invalid_argument("loop must have exactly one connection and one assignment");
    }
    const NodeId proc = asg.front();
    double load = 0.0;
    for (LoopIndex b = 0; b < arch.loop_count(); ++b) {
        const auto& ab = arch.assignments(b);
        if (std::find(ab.begin(), ab.end(), proc) != ab.end()) {
            load += static_cast<double>(inst.loops[b].instructions);
        }
    }
    const double d = path_relay_delay(arch, inst, conn.front(), proc);
    return load * inst.type(arch.node(proc).type).instr_time + 2.0 * d;
}

FeasibilityReport validate(const Architecture& arch, const ProblemInstance& inst) {
    if (arch.loop_count() != inst.loops.size()) {
        throw std::invalid_argument("architecture loop count does not match instance");
    }
    FeasibilityReport rep;
    const int S = inst.levels;
    const auto& nodes = arch.nodes();
    const std::size_t V = nodes.size();
    auto type_of = [&](NodeId v) -> const DeviceType& { return inst.type(nodes[v].type); };
    auto is_proc = [&](NodeId v) { return type_of(v).is_processor; };

    auto add = [&](Constraint c, std::vector<NodeId> ns, std::vector<LoopIndex> ls) {
        if (!ns.empty() || !ls.empty()) rep.violations.push_back({c, std::move(ns), std::move(ls)});
    };

    rep.total_cost = total_cost(arch, inst);
    rep.system_fail_prob = system_failure_probability(arch, inst);

    // structure
    {
        auto roots = arch.roots();
        if (roots.size() != 1) {
            rep.violations.push_back({Constraint::SingleRoot, roots, {}});
        }
        std::vector<NodeId> bad_leaf, bad_fan;
        for (NodeId v = 0; v < V; ++v) {
            const auto& n = nodes[v];
            const bool at_leaf_level = n.level == S;
            if ((at_leaf_level && !n.children.empty()) || (!at_leaf_level && n.children.empty()) ||
                n.level > S) {
                bad_leaf.push_back(v);
            }
            if (!at_leaf_level && static_cast<long>(n.children.size()) > type_of(v).max_children) {
                bad_fan.push_back(v);
            }
        }
        add(Constraint::LeafLevel, bad_leaf, {});
        add(Constraint::FanOut, bad_fan, {});
    }

    const Loads loads = compute_loads(arch, inst);

    // assignment
    std::vector<LoopIndex> bad_conn, bad_single, bad_service;
    std::vector<NodeId> relay_nodes;
    std::vector<LoopIndex> relay_loops;
    for (LoopIndex a = 0; a < arch.loop_count(); ++a) {
        const auto conn = unique_sorted(arch.connections(a));
        const auto asg = unique_sorted(arch.assignments(a));
        std::size_t on_leaves = 0;
        bool off_leaf = false;
        for (NodeId v : conn) {
            if (nodes[v].level == S) {
                ++on_leaves;
            } else {
                off_leaf = true;
            }
        }
        if (on_leaves != 1 || off_leaf) bad_conn.push_back(a);
        if (asg.size() != 1) bad_single.push_back(a);
        bool relay_hit = false;
        for (NodeId v : asg) {
            if (!is_proc(v)) {
                relay_hit = true;
                relay_nodes.push_back(v);
            }
            const bool serves = std::any_of(conn.begin(), conn.end(), [&](NodeId leaf) {
                return nodes[leaf].level == S && arch.is_ancestor_or_self(v, leaf);
            });
            if (!serves) bad_service.push_back(a);
        }
        if (relay_hit) relay_loops.push_back(a);
    }
    add(Constraint::LoopConnection, {}, bad_conn);
    if (!relay_loops.empty()) {
        rep.violations.push_back({Constraint::RelayAssignment, unique_sorted(relay_nodes), relay_loops});
    }
    add(Constraint::SingleAssignment, {}, bad_single);
    {
        std::vector<NodeId> over_mem, over_chan;
        for (NodeId v = 0; v < V; ++v) {
            if (loads.memory[v] > type_of(v).memory) over_mem.push_back(v);
            if (loads.signals[v] > type_of(v).channels) over_chan.push_back(v);
        }
        add(Constraint::Memory, over_mem, {});
        bad_service.erase(std::unique(bad_service.begin(), bad_service.end()), bad_service.end());
        add(Constraint::SubtreeService, {}, bad_service);
        add(Constraint::Channels, over_chan, {});
    }

    // timing: only loops whose leaf and processor are both unambiguous and
    // whose processor lies above the leaf; the rest are reported elsewhere
    {
        std::vector<LoopIndex> late;
        double worst = 0.0;
        for (LoopIndex a = 0; a < arch.loop_count(); ++a) {
            const auto asg = unique_sorted(arch.assignments(a));
            std::vector<NodeId> leaves;
            for (NodeId v : unique_sorted(arch.connections(a))) {
                if (nodes[v].level == S) leaves.push_back(v);
            }
            if (asg.size() != 1 || leaves.size() != 1) continue;
            const NodeId proc = asg.front();
            if (!arch.is_ancestor_or_self(proc, leaves.front())) continue;
            const double t = loads.instr[proc] * type_of(proc).instr_time +
                             2.0 * path_relay_delay(arch, inst, leaves.front(), proc);
            worst = std::max(worst, t);
            if (t > inst.t_max) late.push_back(a);
        }
        rep.worst_loop_time = worst;
        add(Constraint::Timing, {}, late);
    }

    if (rep.system_fail_prob > inst.p_max) {
        rep.violations.push_back({Constraint::Reliability, {}, {}});
    }

    // coordination
    {
        std::vector<NodeId> bad_parent, bad_sub, bad_path;
        for (NodeId v = 0; v < V; ++v) {
            if (!is_proc(v)) continue;
            if (nodes[v].parent && is_proc(*nodes[v].parent)) bad_parent.push_back(v);
            const auto sub = arch.subtree(v);
            if (std::any_of(sub.begin(), sub.end(), [&](NodeId u) { return u != v && is_proc(u); })) {
                bad_sub.push_back(v);
            }
        }
        for (NodeId v = 0; v < V; ++v) {
            if (nodes[v].level != S) continue;
            const auto path = arch.path_to_root(v);
            const auto procs = std::count_if(path.begin(), path.end(), is_proc);
            if (procs != 1) bad_path.push_back(v);
        }
        add(Constraint::ProcessorParent, bad_parent, {});
        add(Constraint::ProcessorSubtree, bad_sub, {});
        add(Constraint::ProcessorOnPath, bad_path, {});
    }

    std::stable_sort(rep.violations.begin(), rep.violations.end(),
                     [](const Violation& x, const Violation& y) { return x.constraint < y.constraint; });
    return rep;
}

CapacityBounds capacity_lower_bounds(const ProblemInstance& inst) {
    CapacityBounds b;
    int max_channels = 0;
    int max_fan = 0;
    for (const auto& t : inst.device_types) {
        max_channels = std::max(max_channels, t.channels);
        max_fan = std::max(max_fan, t.max_children);
    }
    if (max_channels <= 0 || max_fan <= 0) return b;
    long demand = 0;
    for (const auto& l : inst.loops) demand += l.signals;
    const auto ceil_div = [](std::size_t x, std::size_t y) { return (x + y - 1) / y; };
    const std::size_t leaves = ceil_div(static_cast<std::size_t>(demand), static_cast<std::size_t>(max_channels));
    std::size_t devices = leaves;
    std::size_t width = leaves;
    for (int s = inst.levels - 1; s >= 2; --s) {
        width = ceil_div(width, static_cast<std::size_t>(max_fan));
        devices += width;
    }
    devices += 1;
    b.min_leaves = leaves;
    b.min_devices = devices;
    return b;
}

}  // namespace dcsarch
