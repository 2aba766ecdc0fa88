#include "dcsarch/aco.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

namespace dcsarch {

void check_params(const AcoParams& p) {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw ModelError(what);
    };
    require(std::isfinite(p.alpha) && p.alpha >= 0.0, "aco.alpha must be >= 0");
    require(std::isfinite(p.beta) && p.beta >= 0.0, "aco.beta must be >= 0");
    require(std::isfinite(p.rho) && p.rho >= 0.0 && p.rho <= 1.0, "aco.rho must be in [0,1]");
    require(p.ants >= 1, "aco.ants must be >= 1");
    require(p.iterations >= 1, "aco.iterations must be >= 1");
    require(std::isfinite(p.tau_min) && p.tau_min > 0.0, "aco.tau_min must be > 0");
    require(std::isfinite(p.tau0) && p.tau0 >= p.tau_min, "aco.tau0 must be >= tau_min");
    require(std::isfinite(p.q) && p.q >= 0.0, "aco.q must be >= 0");
}

double heuristic_value(const DeviceType& t, HeuristicMode mode) {
    if (!(t.cost > 0.0)) throw std::invalid_argument("heuristic requires a positive cost");
    switch (mode) {
        case HeuristicMode::InverseCost: return 1.0 / t.cost;
        case HeuristicMode::ChannelsPerCost: return static_cast<double>(std::max(t.channels, 1)) / t.cost;
    }
    return 1.0 / t.cost;
}

PheromoneTable::PheromoneTable(int levels, std::size_t types, double tau0)
    : levels_(levels), types_(types), tau_(static_cast<std::size_t>(levels) * types, tau0) {
    if (levels < 1) throw std::invalid_argument("pheromone table needs at least one level");
}

double PheromoneTable::at(int level, TypeIndex t) const {
    if (level < 1 || level > levels_ || t >= types_) throw std::out_of_range("pheromone index");
    return tau_[static_cast<std::size_t>(level - 1) * types_ + t];
}

double& PheromoneTable::at(int level, TypeIndex t) {
    if (level < 1 || level > levels_ || t >= types_) throw std::out_of_range("pheromone index");
    return tau_[static_cast<std::size_t>(level - 1) * types_ + t];
}

namespace {

std::vector<double> weights(const DecisionPoint& point, const PheromoneTable& table,
                            const std::vector<double>& heuristic, const AcoParams& params) {
    std::vector<double> w;
    w.reserve(point.allowed.size());
    for (TypeIndex t : point.allowed) {
        w.push_back(std::pow(table.at(point.level, t), params.alpha) *
                    std::pow(heuristic.at(t), params.beta));
    }
    return w;
}

}  // namespace

std::vector<double> selection_probabilities(const DecisionPoint& point, const PheromoneTable& table,
                                            const std::vector<double>& heuristic, const AcoParams& params) {
    auto w = weights(point, table, heuristic, params);
    double total = 0.0;
    for (double x : w) total += x;
    for (double& x : w) x /= total;
    return w;
}

TypeIndex select(const DecisionPoint& point, const PheromoneTable& table,
                 const std::vector<double>& heuristic, const AcoParams& params, Rng& rng) {
    if (point.allowed.empty()) throw std::invalid_argument("select needs a non-empty allowed set");
    const auto w = weights(point, table, heuristic, params);
    return point.allowed[sample_weighted(w, rng)];
}

TypeIndex AcoPolicy::choose(const DecisionPoint& point, Rng& rng) const {
    return select(point, table_, heuristic_, params_, rng);
}

void update_pheromones(PheromoneTable& table, const Candidate* depositor, const AcoParams& params) {
    for (int s = 1; s <= table.levels(); ++s) {
        for (TypeIndex t = 0; t < table.types(); ++t) table.at(s, t) *= 1.0 - params.rho;
    }
    if (depositor != nullptr && depositor->feasible && depositor->cost > 0.0) {
        const double delta = params.q / depositor->cost;
        std::vector<char> seen(static_cast<std::size_t>(table.levels()) * table.types(), 0);
        for (const auto& d : depositor->decisions) {
            char& mark = seen[static_cast<std::size_t>(d.point.level - 1) * table.types() + d.chosen];
            if (!params.deposit_per_decision && mark) continue;
            mark = 1;
            table.at(d.point.level, d.chosen) += delta;
        }
    }
    for (int s = 1; s <= table.levels(); ++s) {
        for (TypeIndex t = 0; t < table.types(); ++t) {
            table.at(s, t) = std::max(table.at(s, t), params.tau_min);
        }
    }
}

std::uint64_t ant_seed(std::uint64_t seed, int iteration, int ant) {
    return derive_seed(seed, static_cast<std::uint64_t>(iteration), static_cast<std::uint64_t>(ant));
}

namespace {

template <typename MakePolicy>
SolveResult run_colony(const ProblemInstance& inst, const AcoParams& params, MakePolicy make_policy) {
    check_params(params);
    const auto start = std::chrono::steady_clock::now();

    std::vector<double> heuristic;
    for (const auto& t : inst.device_types) heuristic.push_back(heuristic_value(t, params.heuristic));
    PheromoneTable table(inst.levels, inst.device_types.size(), params.tau0);

    SolveResult result;
    std::optional<Candidate> best;
    for (int it = 1; it <= params.iterations; ++it) {
        const auto policy = make_policy(table, heuristic);
        std::optional<Candidate> iter_best;
        int feasible = 0;
        for (int ant = 0; ant < params.ants; ++ant) {
            Rng rng(ant_seed(params.seed, it, ant));
            Candidate c = construct_candidate(inst, *policy, rng);
            if (!c.feasible) continue;
            ++feasible;
            // strict < keeps the lowest ant index among equal costs
            if (!iter_best || c.cost < iter_best->cost) iter_best = std::move(c);
        }
        IterationRecord rec;
        rec.iteration = it;
        rec.feasible_ants = feasible;
        if (iter_best) {
            rec.iteration_best_cost = iter_best->cost;
            if (!best || iter_best->cost < best->cost) best = iter_best;
        }
        if (best) rec.best_cost = best->cost;
        const auto& depositor = params.deposit == DepositRule::BestSoFar ? best : iter_best;
        update_pheromones(table, depositor ? &*depositor : nullptr, params);
        result.trace.push_back(rec);
    }

    if (best) {
        result.feasible = true;
        result.best_cost = best->cost;
        result.best_decisions = best->decisions;
        result.best = std::move(best->architecture);
    }
    result.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace

SolveResult solve(const ProblemInstance& inst, const AcoParams& params) {
    return run_colony(inst, params, [&](const PheromoneTable& table, const std::vector<double>& heuristic) {
        return std::make_unique<AcoPolicy>(table, heuristic, params);
    });
}

SolveResult solve_random_baseline(const ProblemInstance& inst, const AcoParams& params) {
    return run_colony(inst, params, [](const PheromoneTable&, const std::vector<double>&) {
        return std::make_unique<UniformPolicy>();
    });
}

}  // namespace dcsarch
