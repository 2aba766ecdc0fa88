#include "dcsarch/batch.hpp"
#include "dcsarch/render.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dcsarch {

RunStats compute_run_stats(const std::vector<RunRecord>& records) {
    RunStats s;
    s.runs = static_cast<int>(records.size());
    double sum = 0.0;
    double time = 0.0;
    for (const auto& r : records) {
        time += r.wall_time;
        if (!r.cost) continue;
        ++s.successes;
        sum += *r.cost;
        s.c_min = s.c_min ? std::min(*s.c_min, *r.cost) : *r.cost;
    }
    if (s.runs > 0) {
        s.w_percent = 100.0 * s.successes / s.runs;
        s.t_avg = time / s.runs;
    }
    if (s.successes > 0) {
        const double avg = sum / s.successes;
        double sq = 0.0;
        for (const auto& r : records) {
            if (r.cost) sq += (*r.cost - avg) * (*r.cost - avg);
        }
        s.c_avg = avg;
        s.cv_percent = 100.0 * std::sqrt(sq / s.successes) / avg;
    }
    return s;
}

BatchResult run_batch(const ProblemInstance& inst, const AcoParams& params, int repetitions) {
    if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
    BatchResult out;
    for (int r = 0; r < repetitions; ++r) {
        AcoParams p = params;
        p.seed = params.seed + static_cast<std::uint64_t>(r);
        const SolveResult res = solve(inst, p);
        out.records.push_back({r, p.seed, res.best_cost, res.wall_time});
    }
    out.stats = compute_run_stats(out.records);
    return out;
}

namespace {

std::string opt(const std::optional<double>& x) { return x ? format_number(*x) : "-"; }

}  // namespace

std::string format_stats_csv(const RunStats& s) {
    std::string out = "runs,successes,c_min,c_avg,cv_percent,w_percent,t_avg\n";
    out += std::to_string(s.runs) + "," + std::to_string(s.successes) + "," + opt(s.c_min) + "," + opt(s.c_avg) +
           "," + opt(s.cv_percent) + "," + format_number(s.w_percent) + "," + format_number(s.t_avg) + "\n";
    return out;
}

std::string format_records_csv(const std::vector<RunRecord>& records) {
    std::string out = "run,seed,cost,wall_time\n";
    for (const auto& r : records) {
        out += std::to_string(r.run) + "," + std::to_string(r.seed) + "," + (r.cost ? format_number(*r.cost) : "") +
               "," + format_number(r.wall_time) + "\n";
    }
    return out;
}

std::vector<RunRecord> parse_records_csv(std::string_view csv) {
    std::istringstream in{std::string(csv)};
    std::string line;
    if (!std::getline(in, line) || line != "run,seed,cost,wall_time") {
        throw std::runtime_error("run records CSV: bad header");
    }
    std::vector<RunRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::string cell;
        std::istringstream row(line);
        while (std::getline(row, cell, ',')) f.push_back(cell);
        if (f.size() != 4) throw std::runtime_error("run records CSV: expected 4 fields: " + line);
        RunRecord r;
        r.run = std::stoi(f[0]);
        r.seed = std::stoull(f[1]);
        if (!f[2].empty()) r.cost = std::stod(f[2]);
        r.wall_time = std::stod(f[3]);
        out.push_back(r);
    }
    return out;
}

}  // namespace dcsarch
