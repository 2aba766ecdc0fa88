#include "doctest.h"

#include "dcsarch/batch.hpp"
#include "dcsarch/render.hpp"
#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace dcsarch;
using fixtures::kU2;
using fixtures::kU3;
using fixtures::kU4;
using fixtures::kU5;

namespace {

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

std::size_t count_of(const std::string& s, const std::string& what) {
    std::size_t n = 0;
    for (auto pos = s.find(what); pos != std::string::npos; pos = s.find(what, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("text rendering of the single-loop tree") {
    const auto text = render_tree(fixtures::a1_tree(), fixtures::table1(1), RenderFormat::Text);
    CHECK(text == "u5 (relay)\n  u2 (processor) 1 assigned\n    u5 (relay) 1 loop\n");
    CHECK(count_lines(text) == 3);
}

TEST_CASE("DOT rendering of the IMS tree") {
    const auto dot = render_tree(fixtures::ims_tree(), fixtures::table3_ims(), RenderFormat::Dot);
    CHECK(dot.rfind("digraph architecture {\n", 0) == 0);
    CHECK(dot.substr(dot.size() - 2) == "}\n");
    CHECK(count_of(dot, "[label=") == 22);
    CHECK(count_of(dot, " -> ") == 21);
    CHECK(dot.find("n0 [label=\"u1(processor) 260 assigned\"];") != std::string::npos);
    CHECK(count_of(dot, "u7(relay)") == 17);
}

TEST_CASE("rendering ignores node numbering") {
    const auto inst = fixtures::table1(3);
    auto build = [&](bool swapped) {
        ArchitectureBuilder b(3);
        const NodeId r = b.add_root(kU5);
        const NodeId p = b.add_child(r, kU2);
        const NodeId first = b.add_child(p, swapped ? kU4 : kU3);
        const NodeId second = b.add_child(p, swapped ? kU3 : kU4);
        const NodeId on3 = swapped ? second : first;
        const NodeId on4 = swapped ? first : second;
        b.connect(0, on3);
        b.connect(1, on3);
        b.connect(2, on4);
        for (LoopIndex a = 0; a < 3; ++a) b.assign(a, p);
        return std::move(b).build();
    };
    for (auto fmt : {RenderFormat::Text, RenderFormat::Dot}) {
        const auto a = render_tree(build(false), inst, fmt);
        CHECK(a == render_tree(build(true), inst, fmt));
        CHECK(a == render_tree(build(false), inst, fmt));
    }
}

TEST_CASE("convergence CSV") {
    ConvergenceTrace one = {{1, 1120.0, 1120.0, 7}};
    CHECK(export_convergence(one) == "iteration,best_cost,iter_best_cost,feasible_ants\n1,1120,1120,7\n");

    ConvergenceTrace gap = {{1, std::nullopt, std::nullopt, 0}, {2, 1500.0, 1500.0, 2}, {3, 1500.0, std::nullopt, 0}};
    const auto csv = export_convergence(gap);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    CHECK(line == "1,,,0");
    std::getline(in, line);
    std::getline(in, line);
    CHECK(line == "3,1500,,0");
}

TEST_CASE("convergence CSV round trips bit for bit") {
    Rng rng(17);
    ConvergenceTrace trace;
    double best = 1e6;
    for (int i = 1; i <= 50; ++i) {
        const double it_best = 1000 + uniform01(rng) * 1e5 / 3.0;
        best = std::min(best, it_best);
        const bool none = i % 7 == 0;
        trace.push_back({i, best, none ? std::nullopt : std::optional<double>(it_best), none ? 0 : i % 20});
    }
    const auto back = parse_convergence(export_convergence(trace));
    REQUIRE(back.size() == trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i) {
        CHECK(back[i].iteration == trace[i].iteration);
        CHECK(back[i].best_cost == trace[i].best_cost);
        CHECK(back[i].iteration_best_cost == trace[i].iteration_best_cost);
        CHECK(back[i].feasible_ants == trace[i].feasible_ants);
    }
    CHECK_THROWS(parse_convergence("iteration,cost\n1,2\n"));
    CHECK_THROWS(parse_convergence("iteration,best_cost,iter_best_cost,feasible_ants\n1,2\n"));
}

TEST_CASE("a solver trace exports with a non-increasing best column") {
    AcoParams p;
    p.q = 20;
    const auto res = solve(fixtures::table1(20), p);
    const auto csv = export_convergence(res.trace);
    CHECK(count_lines(csv) == 21);
    const auto back = parse_convergence(csv);
    for (std::size_t i = 1; i < back.size(); ++i) CHECK(*back[i].best_cost <= *back[i - 1].best_cost);
}

TEST_CASE("run statistics") {
    SUBCASE("identical costs") {
        std::vector<RunRecord> runs;
        for (int r = 0; r < 20; ++r) runs.push_back({r, static_cast<std::uint64_t>(r), 1120.0, 0.01});
        const auto s = compute_run_stats(runs);
        CHECK(s.c_min == 1120.0);
        CHECK(s.c_avg == 1120.0);
        CHECK(s.cv_percent == 0.0);
        CHECK(s.w_percent == 100.0);
        CHECK(s.t_avg == doctest::Approx(0.01));
    }
    SUBCASE("population deviation") {
        const auto s = compute_run_stats({{0, 0, 10.0, 1.0}, {1, 1, 20.0, 3.0}});
        CHECK(*s.c_avg == 15.0);
        CHECK(*s.cv_percent == doctest::Approx(100.0 / 3.0).epsilon(1e-12));
        CHECK(s.t_avg == 2.0);
    }
    SUBCASE("failures only") {
        const auto s = compute_run_stats({{0, 0, std::nullopt, 0.5}, {1, 1, std::nullopt, 0.5}});
        CHECK(s.successes == 0);
        CHECK(s.w_percent == 0.0);
        CHECK_FALSE(s.c_min.has_value());
        CHECK_FALSE(s.c_avg.has_value());
        CHECK_FALSE(s.cv_percent.has_value());
        CHECK(format_stats_csv(s) == "runs,successes,c_min,c_avg,cv_percent,w_percent,t_avg\n2,0,-,-,-,0,0.5\n");
    }
    SUBCASE("failures are left out of the cost figures") {
        const auto s = compute_run_stats({{0, 0, 100.0, 1.0}, {1, 1, std::nullopt, 1.0}, {2, 2, 300.0, 1.0}});
        CHECK(*s.c_avg == 200.0);
        CHECK(s.w_percent == doctest::Approx(200.0 / 3.0));
    }
}

TEST_CASE("batch seeds and recomputed statistics") {
    AcoParams p;
    p.q = 20;
    p.seed = 100;
    p.iterations = 5;
    const auto b = run_batch(fixtures::table1(25), p, 6);
    REQUIRE(b.records.size() == 6);
    for (int r = 0; r < 6; ++r) {
        CHECK(b.records[static_cast<std::size_t>(r)].run == r);
        CHECK(b.records[static_cast<std::size_t>(r)].seed == 100u + static_cast<unsigned>(r));
        auto single = p;
        single.seed = 100 + static_cast<std::uint64_t>(r);
        CHECK(solve(fixtures::table1(25), single).best_cost == b.records[static_cast<std::size_t>(r)].cost);
    }
    const auto reparsed = parse_records_csv(format_records_csv(b.records));
    const auto again = compute_run_stats(reparsed);
    CHECK(format_stats_csv(again) == format_stats_csv(b.stats));
    CHECK(again.c_avg == b.stats.c_avg);
    CHECK(again.cv_percent == b.stats.cv_percent);
    CHECK(again.t_avg == b.stats.t_avg);
    CHECK_THROWS_AS(run_batch(fixtures::table1(1), p, 0), std::invalid_argument);
}

TEST_CASE("records CSV keeps failed runs") {
    const std::vector<RunRecord> recs = {{0, 7, std::nullopt, 0.25}, {1, 8, 1234.5, 0.125}};
    const auto csv = format_records_csv(recs);
    CHECK(csv == "run,seed,cost,wall_time\n0,7,,0.25\n1,8,1234.5,0.125\n");
    const auto back = parse_records_csv(csv);
    REQUIRE(back.size() == 2);
    CHECK_FALSE(back[0].cost.has_value());
    CHECK(back[1].cost == 1234.5);
    CHECK_THROWS(parse_records_csv("seed,cost\n"));
}
