#pragma once

#include "dcsarch/constructor.hpp"
#include "dcsarch/model.hpp"
#include "dcsarch/rng.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace dcsarch {

enum class HeuristicMode { InverseCost, ChannelsPerCost };

/// Which candidate reinforces the table after each iteration.
enum class DepositRule { BestSoFar, IterationBest };

struct AcoParams {
    double alpha = 2.0;
    double beta = 1.0;
    double rho = 0.25;
    int ants = 20;
    int iterations = 20;
    double tau0 = 1.0;
    double tau_min = 1e-6;
    double q = 1000.0;
    HeuristicMode heuristic = HeuristicMode::InverseCost;
    DepositRule deposit = DepositRule::BestSoFar;
    /// False: one deposit per distinct (level, type) pair of the depositor.
    bool deposit_per_decision = true;
    std::uint64_t seed = 0;

    bool operator==(const AcoParams&) const = default;
};

/// Throws ModelError on out-of-range parameters.
void check_params(const AcoParams& p);

/// 1/C, or max(N, 1)/C so zero-channel devices keep a positive weight.
double heuristic_value(const DeviceType& t, HeuristicMode mode);

/// Pheromone levels keyed by (hierarchy level, device type).
class PheromoneTable {
public:
    PheromoneTable(int levels, std::size_t types, double tau0);

    double at(int level, TypeIndex t) const;
    double& at(int level, TypeIndex t);
    int levels() const { return levels_; }
    std::size_t types() const { return types_; }

private:
    int levels_;
    std::size_t types_;
    std::vector<double> tau_;
};

/// Selection weights tau^alpha * eta^beta over point.allowed, normalized.
std::vector<double> selection_probabilities(const DecisionPoint& point, const PheromoneTable& table,
                                            const std::vector<double>& heuristic, const AcoParams& params);

/// Samples one allowed type with probability proportional to tau^alpha * eta^beta.
TypeIndex select(const DecisionPoint& point, const PheromoneTable& table,
                 const std::vector<double>& heuristic, const AcoParams& params, Rng& rng);

class AcoPolicy final : public DecisionPolicy {
public:
    AcoPolicy(const PheromoneTable& table, std::vector<double> heuristic, const AcoParams& params)
        : table_(table), heuristic_(std::move(heuristic)), params_(params) {}
    TypeIndex choose(const DecisionPoint& point, Rng& rng) const override;

private:
    const PheromoneTable& table_;
    std::vector<double> heuristic_;
    const AcoParams& params_;
};

/// Evaporates every entry, deposits q / cost per recorded decision (or per
/// distinct (level, type) pair) of the depositing feasible candidate, if
/// any, then applies the floor.
void update_pheromones(PheromoneTable& table, const Candidate* depositor, const AcoParams& params);

struct IterationRecord {
    int iteration = 0;
    std::optional<double> best_cost;
    std::optional<double> iteration_best_cost;
    int feasible_ants = 0;
};

using ConvergenceTrace = std::vector<IterationRecord>;

struct SolveResult {
    std::optional<Architecture> best;
    std::optional<double> best_cost;
    bool feasible = false;
    ConvergenceTrace trace;
    double wall_time = 0.0;
    /// Decisions of the best candidate.
    std::vector<Decision> best_decisions;
};

/// Seed of the RNG driving ant `ant` in iteration `iteration` (1-based).
std::uint64_t ant_seed(std::uint64_t seed, int iteration, int ant);

SolveResult solve(const ProblemInstance& inst, const AcoParams& params);

/// Same driver with UniformPolicy: random search over the constructor.
SolveResult solve_random_baseline(const ProblemInstance& inst, const AcoParams& params);

}  // namespace dcsarch
