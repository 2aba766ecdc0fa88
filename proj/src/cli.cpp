#include "dcsarch/cli.hpp"

#include "dcsarch/batch.hpp"
#include "dcsarch/feasibility.hpp"
#include "dcsarch/io.hpp"
#include "dcsarch/oracle.hpp"
#include "dcsarch/render.hpp"

#include "CLI11.hpp"

#include <cstdio>

namespace dcsarch {

namespace {

struct Options {
    std::string instance;
    std::string architecture;
    std::optional<std::uint64_t> seed;
    std::string heuristic;
    std::string out_tree;
    std::string out_dot;
    std::string out_trace;
    std::string out_arch;
    int runs = 20;
    std::string out_stats;
    std::string out_records;
    std::size_t max_nodes = ExactLimits{}.max_nodes;
    double time_budget = ExactLimits{}.time_budget;
    std::string mode = "auto";
};

std::string seconds(double t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", t);
    return buf;
}

LoadedInstance load(const Options& o) {
    LoadedInstance li = parse_instance(read_file(o.instance));
    if (o.seed) li.params.seed = *o.seed;
    if (o.heuristic == "inverse-cost") li.params.heuristic = HeuristicMode::InverseCost;
    if (o.heuristic == "channels-per-cost") li.params.heuristic = HeuristicMode::ChannelsPerCost;
    return li;
}

void emit_architecture(const Architecture& arch, const ProblemInstance& inst, const Options& o, std::ostream& out) {
    out << "cost " << format_number(total_cost(arch, inst)) << "\n";
    const std::string tree = render_tree(arch, inst, RenderFormat::Text);
    out << tree;
    if (!o.out_tree.empty()) write_file(o.out_tree, tree);
    if (!o.out_dot.empty()) write_file(o.out_dot, render_tree(arch, inst, RenderFormat::Dot));
    if (!o.out_arch.empty()) write_file(o.out_arch, serialize_architecture(arch, inst));
}

int run_solve(const Options& o, bool baseline, std::ostream& out) {
    const LoadedInstance li = load(o);
    const SolveResult res = baseline ? solve_random_baseline(li.instance, li.params) : solve(li.instance, li.params);
    if (!o.out_trace.empty()) write_file(o.out_trace, export_convergence(res.trace));
    if (!res.feasible) {
        out << "no feasible solution\n";
        out << "wall_time " << seconds(res.wall_time) << " s\n";
        return kExitInfeasible;
    }
    emit_architecture(*res.best, li.instance, o, out);
    out << "wall_time " << seconds(res.wall_time) << " s\n";
    return kExitOk;
}

int run_batch_cmd(const Options& o, std::ostream& out) {
    const LoadedInstance li = load(o);
    const BatchResult b = run_batch(li.instance, li.params, o.runs);
    out << format_records_csv(b.records) << "\n" << format_stats_csv(b.stats);
    if (!o.out_stats.empty()) write_file(o.out_stats, format_stats_csv(b.stats));
    if (!o.out_records.empty()) write_file(o.out_records, format_records_csv(b.records));
    return b.stats.successes > 0 ? kExitOk : kExitInfeasible;
}

int run_exact(const Options& o, std::ostream& out, std::ostream& err) {
    const LoadedInstance li = load(o);
    const ExactLimits limits{o.max_nodes, o.time_budget};
    bool identical = loops_identical(li.instance);
    if (o.mode == "enumerate") identical = false;
    if (o.mode == "identical" && !identical) {
        err << "error: --mode identical requires identical loops\n";
        return kExitUsage;
    }
    const ExactResult r = identical ? exact_solve_identical_loops(li.instance, limits) : exact_solve(li.instance, limits);
    switch (r.status) {
        case ExactStatus::Optimal:
            emit_architecture(*r.architecture, li.instance, o, out);
            return kExitOk;
        case ExactStatus::Infeasible:
            out << "infeasible\n";
            return kExitInfeasible;
        case ExactStatus::BudgetExceeded:
            out << "budget exceeded\n";
            return kExitBudget;
    }
    return kExitBudget;
}

int run_verify(const Options& o, std::ostream& out) {
    const LoadedInstance li = load(o);
    const Architecture arch = parse_architecture(read_file(o.architecture), li.instance);
    const FeasibilityReport rep = validate(arch, li.instance);
    out << "cost " << format_number(rep.total_cost) << "\n";
    out << "worst_loop_time " << format_number(rep.worst_loop_time) << "\n";
    out << "system_fail_prob " << format_number(rep.system_fail_prob) << "\n";
    for (const auto& v : rep.violations) {
        out << "violation " << constraint_name(v.constraint);
        if (!v.nodes.empty()) {
            out << " nodes";
            for (NodeId n : v.nodes) out << " " << n;
        }
        if (!v.loops.empty()) {
            out << " loops";
            for (LoopIndex a : v.loops) out << " " << a;
        }
        out << "\n";
    }
    out << (rep.feasible() ? "feasible\n" : "infeasible\n");
    return rep.feasible() ? kExitOk : kExitInfeasible;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Minimum-cost hierarchical control-system architecture synthesis", "dcsarch"};
    app.require_subcommand(1);
    Options o;

    auto add_solver_outputs = [&](CLI::App* cmd) {
        cmd->add_option("instance", o.instance, "Instance JSON")->required();
        cmd->add_option("--seed", o.seed, "RNG seed (overrides the instance)");
        cmd->add_option("--heuristic", o.heuristic, "inverse-cost | channels-per-cost")
            ->check(CLI::IsMember({"inverse-cost", "channels-per-cost"}));
        cmd->add_option("--out", o.out_tree, "Write the text tree to a file");
        cmd->add_option("--dot", o.out_dot, "Write a DOT graph to a file");
        cmd->add_option("--trace", o.out_trace, "Write the convergence CSV to a file");
        cmd->add_option("--arch", o.out_arch, "Write the architecture JSON to a file");
    };

    auto* solve_cmd = app.add_subcommand("solve", "Run the ant colony solver");
    add_solver_outputs(solve_cmd);
    auto* baseline_cmd = app.add_subcommand("baseline", "Random search with the same construction and budget");
    add_solver_outputs(baseline_cmd);

    auto* batch_cmd = app.add_subcommand(
        "batch", "Repeated solver runs (seed = base + run index); CV uses the population standard deviation");
    batch_cmd->add_option("instance", o.instance, "Instance JSON")->required();
    batch_cmd->add_option("--runs", o.runs, "Number of runs")->required()->check(CLI::PositiveNumber);
    batch_cmd->add_option("--seed", o.seed, "Base seed (overrides the instance)");
    batch_cmd->add_option("--heuristic", o.heuristic, "inverse-cost | channels-per-cost")
        ->check(CLI::IsMember({"inverse-cost", "channels-per-cost"}));
    batch_cmd->add_option("--csv", o.out_stats, "Write summary statistics CSV");
    batch_cmd->add_option("--records", o.out_records, "Write per-run records CSV");

    auto* exact_cmd = app.add_subcommand("exact", "Exact minimum by exhaustive search");
    exact_cmd->add_option("instance", o.instance, "Instance JSON")->required();
    exact_cmd->add_option("--max-nodes", o.max_nodes, "Largest tree considered");
    exact_cmd->add_option("--time-budget", o.time_budget, "Seconds before giving up");
    exact_cmd->add_option("--mode", o.mode, "auto | enumerate | identical")
        ->check(CLI::IsMember({"auto", "enumerate", "identical"}));
    exact_cmd->add_option("--out", o.out_tree, "Write the text tree to a file");
    exact_cmd->add_option("--dot", o.out_dot, "Write a DOT graph to a file");
    exact_cmd->add_option("--arch", o.out_arch, "Write the architecture JSON to a file");

    auto* verify_cmd = app.add_subcommand("verify", "Check an architecture against every constraint");
    verify_cmd->add_option("instance", o.instance, "Instance JSON")->required();
    verify_cmd->add_option("architecture", o.architecture, "Architecture JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (solve_cmd->parsed()) return run_solve(o, false, out);
        if (baseline_cmd->parsed()) return run_solve(o, true, out);
        if (batch_cmd->parsed()) return run_batch_cmd(o, out);
        if (exact_cmd->parsed()) return run_exact(o, out, err);
        if (verify_cmd->parsed()) return run_verify(o, out);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    err << app.help();
    return kExitUsage;
}

}  // namespace dcsarch
