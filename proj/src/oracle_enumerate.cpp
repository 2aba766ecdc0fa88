#include "dcsarch/feasibility.hpp"
#include "dcsarch/oracle.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace dcsarch {

bool loops_identical(const ProblemInstance& inst) {
    return std::all_of(inst.loops.begin(), inst.loops.end(),
                       [&](const ControlLoop& l) { return l == inst.loops.front(); });
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Slack for comparing a partial survival product (accumulated in search
// order) against the limit; the witness is re-checked by validate().
constexpr double kProbSlack = 1e-12;

struct BudgetHit {};

class Enumerator {
public:
    Enumerator(const ProblemInstance& inst, const ExactLimits& limits)
        : inst_(inst), limits_(limits), S_(inst.levels), start_(std::chrono::steady_clock::now()) {
        for (TypeIndex t = 0; t < inst.device_types.size(); ++t) canon_.push_back(t);
        std::stable_sort(canon_.begin(), canon_.end(),
                         [&](TypeIndex a, TypeIndex b) { return inst.type(a).cost < inst.type(b).cost; });
        demand_ = 0;
        min_signals_ = std::numeric_limits<int>::max();
        for (const auto& l : inst.loops) {
            demand_ += l.signals;
            min_signals_ = std::min(min_signals_, l.signals);
        }
        precompute();
    }

    ExactResult run() {
        ExactResult res;
        if (inst_.loops.empty()) return res;
        try {
            for (TypeIndex t : canon_) {
                const auto& dt = inst_.type(t);
                if (!usable(1, t, false)) continue;
                push(t, 1, -1, dt.is_processor);
                expand(0);
                pop();
            }
        } catch (const BudgetHit&) {
            res.status = ExactStatus::BudgetExceeded;
            return res;
        }
        if (best_) {
            res.status = ExactStatus::Optimal;
            res.cost = best_cost_;
            res.architecture = std::move(best_);
        }
        return res;
    }

private:
    struct SearchNode {
        TypeIndex type;
        int level;
        int parent;
        bool has_proc;  // processor on the path to the root, self included
        std::vector<std::size_t> ranks;
    };

    const DeviceType& dt(TypeIndex t) const { return inst_.type(t); }

    // sub_[l][hp]: cheapest chain occupying levels l..S below a parent whose
    // path already holds (hp) or lacks a processor.
    void precompute() {
        sub_.assign(static_cast<std::size_t>(S_) + 2, {kInf, kInf});
        for (int l = S_; l >= 1; --l) {
            for (int hp = 0; hp < 2; ++hp) {
                double best = kInf;
                for (TypeIndex t : canon_) {
                    if (!usable(l, t, hp != 0)) continue;
                    const double below = l == S_ ? 0.0 : sub_[l + 1][hp || dt(t).is_processor];
                    best = std::min(best, dt(t).cost + below);
                }
                sub_[l][hp] = best;
            }
        }
        min_interior_ = kInf;
        min_cpc_ = kInf;
        for (const auto& t : inst_.device_types) {
            if (t.max_children >= 1) min_interior_ = std::min(min_interior_, t.cost);
            if (t.channels > 0) min_cpc_ = std::min(min_cpc_, t.cost / t.channels);
        }
        cap_.assign(static_cast<std::size_t>(S_) + 1, std::vector<double>(inst_.device_types.size(), 0.0));
        for (int l = S_; l >= 1; --l) {
            double best_below = 0.0;
            if (l < S_) {
                for (double c : cap_[l + 1]) best_below = std::max(best_below, c);
            }
            for (TypeIndex t = 0; t < inst_.device_types.size(); ++t) {
                cap_[l][t] = l == S_ ? dt(t).channels : dt(t).max_children * best_below;
            }
        }
    }

    // Whether type t may sit at level l under a path that holds (hp) or lacks
    // a processor, with some completion below it.
    bool usable(int l, TypeIndex t, bool hp) const {
        const auto& d = dt(t);
        if (hp && d.is_processor) return false;
        if (l == S_) return d.channels >= min_signals_ && (hp || d.is_processor);
        if (d.max_children < 1) return false;
        return sub_[l + 1][hp || d.is_processor] < kInf;
    }

    double chain_below(int l, bool hp) const { return l >= S_ ? 0.0 : sub_[l + 1][hp]; }

    void push(TypeIndex t, int level, int parent, bool hp) {
        nodes_.push_back({t, level, parent, hp, {}});
        cost_ += dt(t).cost;
        survive_.push_back(survive_.empty() ? 1.0 - dt(t).fail_prob : survive_.back() * (1.0 - dt(t).fail_prob));
        if (level == S_) {
            leaf_channels_ += dt(t).channels;
            ++cut_;
            cap_total_ += dt(t).channels;
        } else {
            open_chain_ += chain_below(level, hp);
            open_interior_ += min_interior_ * (S_ - 1 - level);
            ++cut_;
            cap_total_ += cap_[level][t];
        }
    }

    void pop() {
        const SearchNode& n = nodes_.back();
        cost_ -= dt(n.type).cost;
        if (n.level == S_) {
            leaf_channels_ -= dt(n.type).channels;
            --cut_;
            cap_total_ -= dt(n.type).channels;
        } else {
            open_chain_ -= chain_below(n.level, n.has_proc);
            open_interior_ -= min_interior_ * (S_ - 1 - n.level);
            --cut_;
            cap_total_ -= cap_[n.level][n.type];
        }
        survive_.pop_back();
        nodes_.pop_back();
    }

    // Opening a node for expansion removes its optimistic completion terms.
    void open(const SearchNode& n, int sign) {
        open_chain_ -= sign * chain_below(n.level, n.has_proc);
        open_interior_ -= sign * min_interior_ * (S_ - 1 - n.level);
        cut_ -= sign;
        cap_total_ -= sign * cap_[n.level][n.type];
    }

    double lower_bound() const {
        const long remaining = std::max(0L, demand_ - leaf_channels_);
        const double by_channels = open_interior_ + static_cast<double>(remaining) * min_cpc_;
        return cost_ + std::max(open_chain_, by_channels);
    }

    bool hopeless() const {
        if (lower_bound() >= best_cost_) return true;
        if (1.0 - survive_.back() > inst_.p_max + kProbSlack) return true;
        if (cut_ > static_cast<long>(inst_.loops.size())) return true;
        if (nodes_.size() > limits_.max_nodes) return true;
        return false;
    }

    void tick() {
        if ((ticks_++ & 0x3ff) != 0) return;
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        if (elapsed > limits_.time_budget) throw BudgetHit{};
    }

    void expand(std::size_t idx) {
        tick();
        if (nodes_[idx].level == S_) {
            if (cap_total_ >= static_cast<double>(demand_)) assign_loops(idx);
            return;
        }
        const SearchNode self = nodes_[idx];
        std::vector<std::size_t> prev_ranks;
        const std::vector<std::size_t>* prev = nullptr;
        if (idx > 0 && nodes_[idx - 1].parent == self.parent && nodes_[idx - 1].type == self.type &&
            nodes_[idx - 1].level == self.level) {
            prev_ranks = nodes_[idx - 1].ranks;
            prev = &prev_ranks;
        }
        open(self, 1);
        grow(idx, 0, true, prev);
        open(self, -1);
    }

    // Appends children of node idx with canonical rank >= min_rank. While the
    // multiset still equals a prefix of the previous identical sibling's
    // multiset, ranks may not drop below that sibling's.
    void grow(std::size_t idx, std::size_t min_rank, bool equal_prefix, const std::vector<std::size_t>* prev) {
        const int level = nodes_[idx].level;
        const bool has_proc = nodes_[idx].has_proc;
        const std::size_t pos = nodes_[idx].ranks.size();
        if (pos >= static_cast<std::size_t>(dt(nodes_[idx].type).max_children)) return;
        std::size_t lo = min_rank;
        if (prev != nullptr && equal_prefix) {
            if (pos >= prev->size()) {
                equal_prefix = false;
            } else {
                lo = std::max(lo, (*prev)[pos]);
            }
        }
        for (std::size_t r = lo; r < canon_.size(); ++r) {
            const TypeIndex t = canon_[r];
            if (!usable(level + 1, t, has_proc)) continue;
            push(t, level + 1, static_cast<int>(idx), has_proc || dt(t).is_processor);
            nodes_[idx].ranks.push_back(r);
            if (!hopeless()) {
                const bool still_equal = prev != nullptr && equal_prefix && r == (*prev)[pos];
                const bool ordered = prev == nullptr || !still_equal || nodes_[idx].ranks.size() >= prev->size();
                if (ordered) expand(idx + 1);
                grow(idx, r, still_equal, prev);
            }
            nodes_[idx].ranks.pop_back();
            pop();
        }
    }

    // Leaves occupy nodes_[first..]. Every leaf must receive a loop: an
    // unloaded leaf could be pruned together with its single-child chain,
    // giving a cheaper feasible tree.
    void assign_loops(std::size_t first) {
        const std::size_t L = nodes_.size() - first;
        const std::size_t A = inst_.loops.size();
        if (L > A) return;
        leaf_proc_.assign(L, 0);
        proc_max_delay_.assign(nodes_.size(), 0.0);
        for (std::size_t i = 0; i < L; ++i) {
            double d = 0.0;
            int v = static_cast<int>(first + i);
            for (; v >= 0; v = nodes_[static_cast<std::size_t>(v)].parent) {
                const auto& t = dt(nodes_[static_cast<std::size_t>(v)].type);
                if (!t.is_processor) d += t.relay_delay;
                if (t.is_processor) break;
            }
            leaf_proc_[i] = static_cast<std::size_t>(v);
            proc_max_delay_[leaf_proc_[i]] = std::max(proc_max_delay_[leaf_proc_[i]], d);
        }
        used_.assign(L, 0);
        loads_.assign(L, 0);
        mem_.assign(nodes_.size(), 0.0);
        instr_.assign(nodes_.size(), 0.0);
        choice_.assign(A, 0);
        unloaded_ = L;
        place(first, 0);
    }

    bool place(std::size_t first, std::size_t a) {
        tick();
        const std::size_t A = inst_.loops.size();
        if (a == A) return record(first);
        const auto& loop = inst_.loops[a];
        std::size_t lo = 0;
        if (a > 0 && inst_.loops[a - 1] == loop) lo = choice_[a - 1];
        for (std::size_t i = lo; i < leaf_proc_.size(); ++i) {
            const auto& leaf = dt(nodes_[first + i].type);
            if (used_[i] + loop.signals > leaf.channels) continue;
            const std::size_t p = leaf_proc_[i];
            const auto& proc = dt(nodes_[p].type);
            const double mem = mem_[p] + loop.memory;
            if (mem > proc.memory) continue;
            const double instr = instr_[p] + static_cast<double>(loop.instructions);
            if (instr * proc.instr_time + 2.0 * proc_max_delay_[p] > inst_.t_max) continue;
            const std::size_t unloaded_after = unloaded_ - (loads_[i] == 0 ? 1 : 0);
            if (unloaded_after > A - a - 1) continue;

            const double old_mem = mem_[p];
            const double old_instr = instr_[p];
            used_[i] += loop.signals;
            mem_[p] = mem;
            instr_[p] = instr;
            ++loads_[i];
            unloaded_ = unloaded_after;
            choice_[a] = i;
            const bool done = place(first, a + 1);
            --loads_[i];
            if (loads_[i] == 0) ++unloaded_;
            instr_[p] = old_instr;
            mem_[p] = old_mem;
            used_[i] -= loop.signals;
            if (done) return true;
        }
        return false;
    }

    bool record(std::size_t first) {
        ArchitectureBuilder b(inst_.loops.size());
        std::vector<NodeId> id(nodes_.size());
        for (std::size_t v = 0; v < nodes_.size(); ++v) {
            const auto& n = nodes_[v];
            id[v] = n.parent < 0 ? b.add_root(n.type) : b.add_child(id[static_cast<std::size_t>(n.parent)], n.type);
        }
        for (LoopIndex a = 0; a < inst_.loops.size(); ++a) {
            b.connect(a, id[first + choice_[a]]);
            b.assign(a, id[leaf_proc_[choice_[a]]]);
        }
        Architecture arch = std::move(b).build();
        const auto rep = validate(arch, inst_);
        if (!rep.feasible()) return false;
        if (rep.total_cost < best_cost_) {
            best_cost_ = rep.total_cost;
            best_ = std::move(arch);
        }
        return true;
    }

    const ProblemInstance& inst_;
    ExactLimits limits_;
    int S_;
    std::chrono::steady_clock::time_point start_;
    std::vector<TypeIndex> canon_;
    long demand_ = 0;
    int min_signals_ = 1;
    std::vector<std::array<double, 2>> sub_;
    std::vector<std::vector<double>> cap_;
    double min_interior_ = kInf;
    double min_cpc_ = kInf;

    std::vector<SearchNode> nodes_;
    std::vector<double> survive_;
    double cost_ = 0.0;
    double open_chain_ = 0.0;
    double open_interior_ = 0.0;
    long leaf_channels_ = 0;
    long cut_ = 0;
    double cap_total_ = 0.0;
    std::size_t ticks_ = 0;

    std::vector<std::size_t> leaf_proc_;
    std::vector<double> proc_max_delay_;
    std::vector<int> used_;
    std::vector<int> loads_;
    std::vector<double> mem_;
    std::vector<double> instr_;
    std::vector<std::size_t> choice_;
    std::size_t unloaded_ = 0;

    double best_cost_ = kInf;
    std::optional<Architecture> best_;
};

}  // namespace

ExactResult exact_solve(const ProblemInstance& inst, const ExactLimits& limits) {
    check_instance(inst);
    return Enumerator(inst, limits).run();
}

}  // namespace dcsarch
