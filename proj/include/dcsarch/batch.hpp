#pragma once

#include "dcsarch/aco.hpp"
#include "dcsarch/model.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dcsarch {

struct RunRecord {
    int run = 0;
    std::uint64_t seed = 0;
    /// Absent when the run found no feasible architecture.
    std::optional<double> cost;
    double wall_time = 0.0;
};

/// Summary over repeated runs. Cost statistics cover successful runs only
/// and use the population standard deviation.
struct RunStats {
    int runs = 0;
    int successes = 0;
    std::optional<double> c_min;
    std::optional<double> c_avg;
    std::optional<double> cv_percent;
    double w_percent = 0.0;
    double t_avg = 0.0;
};

RunStats compute_run_stats(const std::vector<RunRecord>& records);

struct BatchResult {
    RunStats stats;
    std::vector<RunRecord> records;
};

/// Run r (0-based) solves with seed = params.seed + r.
BatchResult run_batch(const ProblemInstance& inst, const AcoParams& params, int repetitions);

/// "runs,successes,c_min,c_avg,cv_percent,w_percent,t_avg"; absent values
/// are rendered "-".
std::string format_stats_csv(const RunStats& stats);

/// "run,seed,cost,wall_time"; failed runs leave the cost field empty.
std::string format_records_csv(const std::vector<RunRecord>& records);
std::vector<RunRecord> parse_records_csv(std::string_view csv);

}  // namespace dcsarch
