#include "dcsarch/constructor.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace dcsarch {

namespace {

struct BudgetExhausted {};

bool contains(const std::vector<TypeIndex>& v, TypeIndex t) {
    return std::find(v.begin(), v.end(), t) != v.end();
}

}  // namespace

TypeIndex UniformPolicy::choose(const DecisionPoint& point, Rng& rng) const {
    const std::vector<double> ones(point.allowed.size(), 1.0);
    return point.allowed[sample_weighted(ones, rng)];
}

Constructor::Constructor(const ProblemInstance& inst, const DecisionPolicy& policy, Rng& rng,
                         ConstructionLimits limits)
    : inst_(inst), policy_(policy), rng_(rng) {
    budget_ = limits.decision_budget != 0
                  ? limits.decision_budget
                  : 10 * std::max<std::size_t>(inst.loops.size(), 1) * static_cast<std::size_t>(inst.levels);
    completable_.assign(static_cast<std::size_t>(inst.levels) + 2, {false, false});
    for (int s = inst.levels; s >= 1; --s) {
        for (bool placed : {false, true}) {
            completable_[static_cast<std::size_t>(s)][placed ? 1 : 0] = !backbone_allowed(s, placed).empty();
        }
    }
}

TypeIndex Constructor::choose(DecisionPoint point) {
    if (decisions_made_ >= budget_) throw BudgetExhausted{};
    ++decisions_made_;
    const TypeIndex t = policy_.choose(point, rng_);
    if (!contains(point.allowed, t)) {
        throw std::logic_error("decision policy returned a type outside the allowed set");
    }
    return t;
}

int Constructor::add_node(TypeIndex t, int level, int parent, Decision decision) {
    WorkNode n;
    n.type = t;
    n.level = level;
    n.parent = parent;
    n.decision = std::move(decision);
    nodes_.push_back(std::move(n));
    const int v = static_cast<int>(nodes_.size()) - 1;
    if (parent >= 0) at(parent).children.push_back(v);
    return v;
}

void Constructor::remove_last_node(int v) {
    if (v != static_cast<int>(nodes_.size()) - 1 || !at(v).children.empty()) {
        throw std::logic_error("backtracking must remove the most recent childless node");
    }
    if (at(v).parent >= 0) at(at(v).parent).children.pop_back();
    nodes_.pop_back();
}

int Constructor::processor_of(int v) const {
    for (; v >= 0; v = at(v).parent) {
        if (type_of(v).is_processor) return v;
    }
    return -1;
}

int Constructor::ancestor_at(int v, int level) const {
    while (v >= 0 && at(v).level > level) v = at(v).parent;
    return v;
}

double Constructor::relay_delay(int leaf, int processor) const {
    double d = 0.0;
    for (int v = leaf; v >= 0; v = at(v).parent) {
        const auto& t = type_of(v);
        if (!t.is_processor) d += t.relay_delay;
        if (v == processor) break;
    }
    return d;
}

bool Constructor::fail(std::string why) {
    failed_ = true;
    failure_ = std::move(why);
    return false;
}

// --- backbone ---------------------------------------------------------------

bool Constructor::backbone_can_complete(int level, bool placed) const {
    if (level > inst_.levels) return placed;
    return completable_[static_cast<std::size_t>(level)][placed ? 1 : 0];
}

std::vector<TypeIndex> Constructor::backbone_allowed(int level, bool placed) const {
    std::vector<TypeIndex> out;
    const int S = inst_.levels;
    for (TypeIndex i = 0; i < inst_.device_types.size(); ++i) {
        const auto& t = inst_.type(i);
        if (placed && t.is_processor) continue;
        if (level < S && t.max_children < 1) continue;
        if (level == S && t.channels <= 0) continue;
        if (!backbone_can_complete(level + 1, placed || t.is_processor)) continue;
        out.push_back(i);
    }
    return out;
}

bool Constructor::build_backbone() {
    if (!nodes_.empty()) throw std::logic_error("backbone already built");
    try {
        bool placed = false;
        int parent = -1;
        for (int s = 1; s <= inst_.levels; ++s) {
            DecisionPoint point{s, backbone_allowed(s, placed), DecisionContext::BackbonePlacement};
            if (point.allowed.empty()) {
                return fail("no device sequence yields a backbone with exactly one processor");
            }
            const TypeIndex t = choose(point);
            parent = add_node(t, s, parent, Decision{point, t});
            if (inst_.type(t).is_processor) {
                placed = true;
                proc_level_ = s;
            }
        }
        current_leaf_ = parent;
    } catch (const BudgetExhausted&) {
        return fail("decision budget exhausted");
    }
    return true;
}

// --- loop attachment ----------------------------------------------------------

std::vector<TypeIndex> Constructor::expansion_allowed(int level, LoopIndex a) const {
    std::vector<TypeIndex> out;
    const int S = inst_.levels;
    const auto& loop = inst_.loops[a];
    for (TypeIndex i = 0; i < inst_.device_types.size(); ++i) {
        const auto& t = inst_.type(i);
        if (t.is_processor != (level == proc_level_)) continue;
        if (level < S && t.max_children < 1) continue;
        if (level == S && t.channels < loop.signals) continue;
        if (t.is_processor && (loop.memory > t.memory ||
                               static_cast<double>(loop.instructions) * t.instr_time > inst_.t_max)) {
            continue;
        }
        out.push_back(i);
    }
    return out;
}

bool Constructor::chain_possible(int level, LoopIndex a) const {
    for (int s = level; s <= inst_.levels; ++s) {
        if (expansion_allowed(s, a).empty()) return false;
    }
    return true;
}

bool Constructor::fits_time(int proc, LoopIndex a, double delay) const {
    const auto& p = at(proc);
    const double load = p.load_instr + static_cast<double>(inst_.loops[a].instructions);
    return load * type_of(proc).instr_time + 2.0 * std::max(p.max_delay, delay) <= inst_.t_max;
}

bool Constructor::upgrade_processor(int proc) {
    auto& p = at(proc);
    if (p.upgrade_tried.size() >= inst_.device_types.size()) return false;
    if (!contains(p.upgrade_tried, p.type)) p.upgrade_tried.push_back(p.type);
    const auto& current = type_of(proc);
    DecisionPoint point{p.level, {}, DecisionContext::ProcessorUpgrade};
    for (TypeIndex i = 0; i < inst_.device_types.size(); ++i) {
        const auto& t = inst_.type(i);
        if (!t.is_processor || t.memory <= current.memory || contains(p.upgrade_tried, i)) continue;
        if (p.level < inst_.levels) {
            if (t.max_children < std::max<int>(1, static_cast<int>(p.children.size()))) continue;
        } else if (t.channels < std::max(1, p.used_channels)) {
            continue;
        }
        if (p.load_instr * t.instr_time + 2.0 * p.max_delay > inst_.t_max) continue;
        point.allowed.push_back(i);
    }
    if (point.allowed.empty()) return false;
    const TypeIndex t = choose(point);
    p.upgrade_tried.push_back(t);
    p.type = t;
    p.decision = Decision{std::move(point), t};
    return true;
}

bool Constructor::ensure_memory(int proc, LoopIndex a) {
    const double r = inst_.loops[a].memory;
    while (at(proc).load_memory + r > type_of(proc).memory) {
        if (!upgrade_processor(proc)) return false;
    }
    return true;
}

bool Constructor::accept_leaf(int leaf, LoopIndex a) const {
    const auto& loop = inst_.loops[a];
    if (at(leaf).used_channels + loop.signals > type_of(leaf).channels) return false;
    const int proc = processor_of(leaf);
    if (proc < 0) return false;
    if (at(proc).load_memory + loop.memory > type_of(proc).memory) return false;
    return fits_time(proc, a, relay_delay(leaf, proc));
}

bool Constructor::extend(int parent, int level, LoopIndex a) {
    if (!chain_possible(level, a)) return false;
    std::vector<TypeIndex> tried;
    const bool leaf_level = level == inst_.levels;
    while (true) {
        DecisionPoint point{level, {},
                            leaf_level ? DecisionContext::LeafExpansion : DecisionContext::BranchExtension};
        for (TypeIndex t : expansion_allowed(level, a)) {
            if (!contains(tried, t)) point.allowed.push_back(t);
        }
        if (point.allowed.empty()) return false;
        const TypeIndex t = choose(point);
        const int v = add_node(t, level, parent, Decision{point, t});
        const bool ok = leaf_level ? accept_leaf(v, a) : extend(v, level + 1, a);
        if (ok) {
            if (leaf_level) current_leaf_ = v;
            return true;
        }
        remove_last_node(v);
        tried.push_back(t);
    }
}

bool Constructor::expand(LoopIndex a, int start_level) {
    for (int level = start_level; level >= 2; --level) {
        const int anc = ancestor_at(current_leaf_, level - 1);
        if (static_cast<int>(at(anc).children.size()) >= type_of(anc).max_children) continue;
        if (extend(anc, level, a)) return true;
    }
    return false;
}

void Constructor::connect(LoopIndex a, int leaf) {
    const auto& loop = inst_.loops[a];
    const int proc = processor_of(leaf);
    const double d = relay_delay(leaf, proc);
    auto& l = at(leaf);
    l.used_channels += loop.signals;
    l.connected.push_back(a);
    auto& p = at(proc);
    p.load_instr += static_cast<double>(loop.instructions);
    p.load_memory += loop.memory;
    p.max_delay = std::max(p.max_delay, d);
    p.assigned.push_back(a);
}

bool Constructor::place_loop(LoopIndex a) {
    const auto& loop = inst_.loops[a];
    const int leaf = current_leaf_;
    const int proc = processor_of(leaf);
    const bool saturated = !ensure_memory(proc, a) || !fits_time(proc, a, 0.0);
    if (!saturated && at(leaf).used_channels + loop.signals <= type_of(leaf).channels &&
        fits_time(proc, a, relay_delay(leaf, proc))) {
        connect(a, leaf);
        return true;
    }
    // a saturated processor needs a sibling processor; otherwise grow from
    // the leaf level upward
    if (!expand(a, saturated ? proc_level_ : inst_.levels)) {
        return fail("no room to attach loop " + std::to_string(a));
    }
    connect(a, current_leaf_);
    return true;
}

bool Constructor::attach_loops() {
    if (current_leaf_ < 0) throw std::logic_error("attach_loops requires a backbone");
    try {
        for (LoopIndex a = 0; a < inst_.loops.size(); ++a) {
            if (!place_loop(a)) return false;
        }
    } catch (const BudgetExhausted&) {
        return fail("decision budget exhausted");
    }
    return true;
}

// --- evaluation ---------------------------------------------------------------

Architecture Constructor::snapshot() const {
    ArchitectureBuilder b(inst_.loops.size());
    for (const auto& n : nodes_) {
        if (n.parent < 0) {
            b.add_root(n.type);
        } else {
            b.add_child(static_cast<NodeId>(n.parent), n.type);
        }
    }
    for (std::size_t v = 0; v < nodes_.size(); ++v) {
        for (LoopIndex a : nodes_[v].connected) b.connect(a, v);
        for (LoopIndex a : nodes_[v].assigned) b.assign(a, v);
    }
    return std::move(b).build();
}

Candidate Constructor::finish() {
    Candidate c;
    c.decisions_made = decisions_made_;
    if (failed_ || current_leaf_ < 0) {
        c.failure_reason = failed_ ? failure_ : "construction incomplete";
        return c;
    }
    Architecture arch = snapshot();
    for (LoopIndex a = 0; a < arch.loop_count(); ++a) {
        if (arch.connections(a).empty()) {
            c.failure_reason = "construction incomplete";
            return c;
        }
    }
    FeasibilityReport rep = validate(arch, inst_);
    for (const auto& v : rep.violations) {
        if (v.constraint != Constraint::Reliability) {
            throw std::logic_error("constructed architecture violates " +
                                   std::string(constraint_name(v.constraint)));
        }
    }
    c.cost = rep.total_cost;
    c.feasible = rep.feasible();
    c.status = c.feasible ? CandidateStatus::Feasible : CandidateStatus::ReliabilityExceeded;
    if (!c.feasible) c.failure_reason = "system failure probability exceeds p_max";
    c.decisions.reserve(nodes_.size());
    for (const auto& n : nodes_) c.decisions.push_back(n.decision);
    c.report = std::move(rep);
    c.architecture = std::move(arch);
    return c;
}

Candidate construct_candidate(const ProblemInstance& inst, const DecisionPolicy& policy, Rng& rng,
                              ConstructionLimits limits) {
    Constructor ctor(inst, policy, rng, limits);
    if (ctor.build_backbone()) ctor.attach_loops();
    return ctor.finish();
}

}  // namespace dcsarch
