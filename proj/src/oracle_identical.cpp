#include "dcsarch/feasibility.hpp"
#include "dcsarch/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

namespace dcsarch {

namespace {

// With identical loops a subtree is characterized by how many loops it
// carries. For every level, role and loop count k the solver keeps the
// (cost, survival) Pareto front of subtrees, or only the cheapest one when
// reliability is ignored. Relay subtrees below a processor are further
// indexed by an upper bound on their worst leaf delay, taken from the exact
// set of floating-point delay sums reachable at that level.

constexpr double kProbSlack = 1e-12;

struct BudgetHit {};

struct Plan;

struct Link {
    std::shared_ptr<const Plan> head;
    std::shared_ptr<const Link> tail;
};

struct Plan {
    TypeIndex type = 0;
    int loops = 0;
    std::shared_ptr<const Link> children;
};

template <typename P>
struct Entry {
    double cost;
    double survive;
    std::shared_ptr<const P> ptr;
};

template <typename P>
using Front = std::vector<Entry<P>>;

/// Fronts indexed by loop count 0..A (index 0 is always empty).
template <typename P>
using Table = std::vector<Front<P>>;

class IdenticalSolver {
public:
    IdenticalSolver(const ProblemInstance& inst, const ExactLimits& limits, bool pareto)
        : inst_(inst), limits_(limits), pareto_(pareto), S_(inst.levels),
          A_(static_cast<int>(inst.loops.size())), loop_(inst.loops.front()),
          start_(std::chrono::steady_clock::now()) {
        mem_sum_.assign(static_cast<std::size_t>(A_) + 1, 0.0);
        for (int k = 1; k <= A_; ++k) mem_sum_[k] = mem_sum_[k - 1] + loop_.memory;
        min_survive_ = pareto_ ? (1.0 - inst.p_max) - kProbSlack : -1.0;
    }

    /// Cheapest root plan carrying every loop, if any.
    std::optional<Entry<Plan>> solve() {
        build_delay_sets();
        rel_.assign(static_cast<std::size_t>(S_) + 2, {});
        for (int l = S_; l >= 2; --l) {
            rel_[l].resize(delays_[l].size());
            for (std::size_t di = 0; di < delays_[l].size(); ++di) rel_[l][di] = relay_table(l, delays_[l][di]);
        }
        any_.assign(static_cast<std::size_t>(S_) + 2, {});
        for (int l = S_; l >= 1; --l) {
            Table<Plan> here = processor_table(l);
            if (l < S_) merge_into(here, upper_table(any_[l + 1]));
            any_[l] = std::move(here);
        }
        const auto& root = any_[1][static_cast<std::size_t>(A_)];
        if (root.empty()) return std::nullopt;
        return root.front();
    }

    Architecture build(const Plan& root) const {
        ArchitectureBuilder b(inst_.loops.size());
        LoopIndex next = 0;
        emit(b, root, std::nullopt, std::nullopt, next);
        return std::move(b).build();
    }

private:
    const DeviceType& dt(TypeIndex t) const { return inst_.type(t); }

    void tick() {
        if ((ticks_++ & 0xfff) != 0) return;
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        if (elapsed > limits_.time_budget) throw BudgetHit{};
    }

    template <typename P>
    void prune(Front<P>& f) const {
        std::stable_sort(f.begin(), f.end(), [](const Entry<P>& a, const Entry<P>& b) {
            return a.cost < b.cost || (a.cost == b.cost && a.survive > b.survive);
        });
        Front<P> out;
        for (auto& e : f) {
            if (e.survive < min_survive_) continue;
            if (!out.empty() && (!pareto_ || e.survive <= out.back().survive)) continue;
            out.push_back(std::move(e));
        }
        f = std::move(out);
    }

    template <typename P>
    void merge_into(Table<P>& dst, Table<P> src) const {
        for (std::size_t k = 0; k < dst.size(); ++k) {
            for (auto& e : src[k]) dst[k].push_back(std::move(e));
            prune(dst[k]);
        }
    }

    Table<Plan> empty_table() const { return Table<Plan>(static_cast<std::size_t>(A_) + 1); }

    void build_delay_sets() {
        delays_.assign(static_cast<std::size_t>(S_) + 2, {});
        for (TypeIndex t = 0; t < inst_.device_types.size(); ++t) {
            if (!dt(t).is_processor && dt(t).channels >= loop_.signals) delays_[S_].push_back(0.0 + dt(t).relay_delay);
        }
        for (int l = S_ - 1; l >= 2; --l) {
            for (TypeIndex t = 0; t < inst_.device_types.size(); ++t) {
                if (dt(t).is_processor || dt(t).max_children < 1) continue;
                for (double x : delays_[l + 1]) delays_[l].push_back(x + dt(t).relay_delay);
            }
        }
        for (auto& d : delays_) {
            std::sort(d.begin(), d.end());
            d.erase(std::unique(d.begin(), d.end()), d.end());
        }
    }

    // Sequences of 1..max_children child subtrees drawn from `child`, keyed
    // by total loop count. Child order is irrelevant, so the j-fold
    // convolutions are unioned.
    const std::vector<Table<Link>>& powers(const Table<Plan>& child, const void* key, int max_children) {
        auto& cached = power_cache_[key];
        if (cached.empty()) {
            Table<Link> first(static_cast<std::size_t>(A_) + 1);
            for (int k = 1; k <= A_; ++k) {
                for (const auto& e : child[k]) {
                    first[k].push_back({e.cost, e.survive, std::make_shared<const Link>(Link{e.ptr, nullptr})});
                }
            }
            cached.push_back(std::move(first));
        }
        while (static_cast<int>(cached.size()) < max_children) {
            const Table<Link>& prev = cached.back();
            Table<Link> next(static_cast<std::size_t>(A_) + 1);
            for (int k1 = 1; k1 <= A_; ++k1) {
                if (prev[k1].empty()) continue;
                for (int k2 = 1; k1 + k2 <= A_; ++k2) {
                    if (child[k2].empty()) continue;
                    tick();
                    for (const auto& a : prev[k1]) {
                        for (const auto& c : child[k2]) {
                            next[k1 + k2].push_back({a.cost + c.cost, a.survive * c.survive,
                                                     std::make_shared<const Link>(Link{c.ptr, a.ptr})});
                        }
                    }
                }
            }
            for (auto& f : next) prune(f);
            cached.push_back(std::move(next));
        }
        return cached;
    }

    // Wraps up to max_children child subtrees under one node of type t;
    // `admit(k)` filters loop counts the node itself can carry.
    template <typename Admit>
    void attach(Table<Plan>& out, TypeIndex t, const Table<Plan>& child, const void* key, Admit admit) {
        const auto& d = dt(t);
        const int fan = std::min(d.max_children, A_);
        const auto& pw = powers(child, key, fan);
        for (int j = 0; j < fan; ++j) {
            for (int k = 1; k <= A_; ++k) {
                if (pw[j][k].empty() || !admit(k)) continue;
                for (const auto& e : pw[j][k]) {
                    out[k].push_back({d.cost + e.cost, (1.0 - d.fail_prob) * e.survive,
                                      std::make_shared<const Plan>(Plan{t, k, e.ptr})});
                }
            }
        }
    }

    void add_leaf(Table<Plan>& out, TypeIndex t, int max_k) const {
        const auto& d = dt(t);
        for (int k = 1; k <= std::min(max_k, A_); ++k) {
            out[k].push_back({d.cost, 1.0 - d.fail_prob, std::make_shared<const Plan>(Plan{t, k, nullptr})});
        }
    }

    bool processor_admits(TypeIndex p, int k, double delay) const {
        const auto& d = dt(p);
        if (mem_sum_[k] > d.memory) return false;
        const double instr = static_cast<double>(k) * static_cast<double>(loop_.instructions);
        return instr * d.instr_time + 2.0 * delay <= inst_.t_max;
    }

    Table<Plan> relay_table(int l, double bound) {
        Table<Plan> out = empty_table();
        for (TypeIndex t = 0; t < inst_.device_types.size(); ++t) {
            const auto& d = dt(t);
            if (d.is_processor) continue;
            if (l == S_) {
                if (d.channels >= loop_.signals && 0.0 + d.relay_delay <= bound) {
                    add_leaf(out, t, d.channels / loop_.signals);
                }
                continue;
            }
            if (d.max_children < 1) continue;
            const auto& below = delays_[l + 1];
            std::ptrdiff_t pick = -1;
            for (std::size_t i = 0; i < below.size(); ++i) {
                if (below[i] + d.relay_delay <= bound) pick = static_cast<std::ptrdiff_t>(i);
            }
            if (pick < 0) continue;
            const auto& child = rel_[l + 1][static_cast<std::size_t>(pick)];
            attach(out, t, child, &child, [](int) { return true; });
        }
        for (auto& f : out) prune(f);
        return out;
    }

    Table<Plan> processor_table(int l) {
        Table<Plan> out = empty_table();
        for (TypeIndex p = 0; p < inst_.device_types.size(); ++p) {
            const auto& d = dt(p);
            if (!d.is_processor) continue;
            if (l == S_) {
                if (d.channels < loop_.signals) continue;
                int max_k = 0;
                while (max_k < d.channels / loop_.signals && max_k < A_ && processor_admits(p, max_k + 1, 0.0)) ++max_k;
                add_leaf(out, p, max_k);
                continue;
            }
            if (d.max_children < 1) continue;
            for (std::size_t di = 0; di < delays_[l + 1].size(); ++di) {
                const double delay = delays_[l + 1][di];
                const auto& child = rel_[l + 1][di];
                attach(out, p, child, &child, [&](int k) { return processor_admits(p, k, delay); });
            }
        }
        for (auto& f : out) prune(f);
        return out;
    }

    Table<Plan> upper_table(const Table<Plan>& any_below) {
        Table<Plan> out = empty_table();
        for (TypeIndex t = 0; t < inst_.device_types.size(); ++t) {
            const auto& d = dt(t);
            if (d.is_processor || d.max_children < 1) continue;
            attach(out, t, any_below, &any_below, [](int) { return true; });
        }
        for (auto& f : out) prune(f);
        return out;
    }

    void emit(ArchitectureBuilder& b, const Plan& plan, std::optional<NodeId> parent,
              std::optional<NodeId> proc, LoopIndex& next) const {
        const NodeId v = parent ? b.add_child(*parent, plan.type) : b.add_root(plan.type);
        if (dt(plan.type).is_processor) proc = v;
        if (!plan.children) {
            for (int i = 0; i < plan.loops; ++i, ++next) {
                b.connect(next, v);
                b.assign(next, *proc);
            }
            return;
        }
        for (const Link* c = plan.children.get(); c != nullptr; c = c->tail.get()) {
            emit(b, *c->head, v, proc, next);
        }
    }

    const ProblemInstance& inst_;
    ExactLimits limits_;
    bool pareto_;
    int S_;
    int A_;
    ControlLoop loop_;
    std::chrono::steady_clock::time_point start_;
    std::size_t ticks_ = 0;
    double min_survive_;
    std::vector<double> mem_sum_;
    std::vector<std::vector<double>> delays_;
    std::vector<std::vector<Table<Plan>>> rel_;
    std::vector<Table<Plan>> any_;
    std::map<const void*, std::vector<Table<Link>>> power_cache_;
};

}  // namespace

ExactResult exact_solve_identical_loops(const ProblemInstance& inst, const ExactLimits& limits) {
    check_instance(inst);
    if (!loops_identical(inst)) throw std::invalid_argument("exact_solve_identical_loops requires identical loops");
    ExactResult res;
    try {
        for (bool pareto : {false, true}) {
            IdenticalSolver solver(inst, limits, pareto);
            const auto best = solver.solve();
            if (!best) return res;
            Architecture arch = solver.build(*best->ptr);
            const auto rep = validate(arch, inst);
            if (rep.feasible()) {
                res.status = ExactStatus::Optimal;
                res.cost = rep.total_cost;
                res.architecture = std::move(arch);
                return res;
            }
            if (pareto) {
                throw std::logic_error("identical-loop oracle produced an infeasible witness");
            }
        }
    } catch (const BudgetHit&) {
        res.status = ExactStatus::BudgetExceeded;
    }
    return res;
}

}  // namespace dcsarch
