#include "doctest.h"

#include "dcsarch/aco.hpp"
#include "dcsarch/feasibility.hpp"
#include "fixtures.hpp"

#include <cmath>
#include <numeric>

using namespace dcsarch;
using fixtures::kU1;
using fixtures::kU3;

namespace {

DecisionPoint point_of(int level, std::vector<TypeIndex> allowed) {
    return DecisionPoint{level, std::move(allowed), DecisionContext::BackbonePlacement};
}

Candidate fake_candidate(double cost, std::vector<std::pair<int, TypeIndex>> picks) {
    Candidate c;
    c.feasible = true;
    c.cost = cost;
    c.status = CandidateStatus::Feasible;
    for (auto [level, t] : picks) c.decisions.push_back(Decision{point_of(level, {t}), t});
    return c;
}

AcoParams quick(std::uint64_t seed = 0) {
    AcoParams p;
    p.seed = seed;
    p.q = 20;
    return p;
}

}  // namespace

TEST_CASE("heuristic values") {
    const auto inst = fixtures::table1(1);
    CHECK(heuristic_value(inst.type(kU3), HeuristicMode::InverseCost) == doctest::Approx(0.0125));
    CHECK(heuristic_value(inst.type(kU3), HeuristicMode::ChannelsPerCost) == doctest::Approx(0.1));
    CHECK(heuristic_value(inst.type(kU1), HeuristicMode::ChannelsPerCost) == doctest::Approx(0.001));
    DeviceType free_device = inst.type(kU3);
    free_device.cost = 0;
    CHECK_THROWS_AS(heuristic_value(free_device, HeuristicMode::InverseCost), std::invalid_argument);
}

TEST_CASE("parameter validation") {
    AcoParams p;
    CHECK_NOTHROW(check_params(p));
    p.rho = 1.5;
    CHECK_THROWS_AS(check_params(p), ModelError);
    p = AcoParams{};
    p.ants = 0;
    CHECK_THROWS_AS(check_params(p), ModelError);
    p = AcoParams{};
    p.tau_min = 0;
    CHECK_THROWS_AS(check_params(p), ModelError);
    p = AcoParams{};
    p.tau0 = 1e-9;
    CHECK_THROWS_AS(check_params(p), ModelError);
}

TEST_CASE("a single allowed option is always chosen") {
    PheromoneTable table(3, 5, 1.0);
    const std::vector<double> eta(5, 0.5);
    AcoParams p;
    Rng rng(1);
    for (int i = 0; i < 100; ++i) CHECK(select(point_of(2, {3}), table, eta, p, rng) == 3);
    CHECK(selection_probabilities(point_of(2, {3}), table, eta, p) == std::vector<double>{1.0});
}

TEST_CASE("selection follows pheromone squared times heuristic") {
    PheromoneTable table(1, 2, 1.0);
    const std::vector<double> eta = {0.001, 0.0125};
    AcoParams p;
    const auto pr = selection_probabilities(point_of(1, {0, 1}), table, eta, p);
    CHECK(pr[0] == doctest::Approx(0.001 / 0.0135).epsilon(1e-12));
    CHECK(pr[0] == doctest::Approx(0.0741).epsilon(1e-3));
    CHECK(pr[1] == doctest::Approx(0.9259).epsilon(1e-4));

    Rng rng(9);
    const int n = 20000;
    int first = 0;
    for (int i = 0; i < n; ++i) first += select(point_of(1, {0, 1}), table, eta, p, rng) == 0 ? 1 : 0;
    const double sigma = std::sqrt(pr[0] * pr[1] / n);
    CHECK(std::abs(static_cast<double>(first) / n - pr[0]) < 4 * sigma);

    table.at(1, 0) = 2.0;
    const auto pr2 = selection_probabilities(point_of(1, {0, 1}), table, eta, p);
    CHECK(pr2[0] == doctest::Approx(4 * 0.001 / (4 * 0.001 + 0.0125)).epsilon(1e-12));
}

TEST_CASE("zero exponents give a uniform choice") {
    PheromoneTable table(1, 3, 1.0);
    table.at(1, 0) = 50.0;
    const std::vector<double> eta = {1.0, 0.01, 0.5};
    AcoParams p;
    p.alpha = 0;
    p.beta = 0;
    Rng rng(123);
    const int n = 30000;
    std::vector<int> counts(3, 0);
    for (int i = 0; i < n; ++i) ++counts[select(point_of(1, {0, 1, 2}), table, eta, p, rng)];
    double chi2 = 0.0;
    for (int c : counts) chi2 += (c - n / 3.0) * (c - n / 3.0) / (n / 3.0);
    // 99th percentile of chi-square with 2 degrees of freedom
    CHECK(chi2 < 9.2103);
}

TEST_CASE("probabilities are normalized and scale free") {
    Rng rng(8);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t k = 2 + rng() % 6;
        PheromoneTable table(1, k, 1.0);
        std::vector<double> eta(k);
        std::vector<TypeIndex> all(k);
        for (std::size_t i = 0; i < k; ++i) {
            table.at(1, i) = 1e-3 + uniform01(rng) * 10;
            eta[i] = 1e-4 + uniform01(rng);
            all[i] = i;
        }
        AcoParams p;
        p.alpha = uniform01(rng) * 3;
        p.beta = uniform01(rng) * 3;
        const auto pr = selection_probabilities(point_of(1, all), table, eta, p);
        CHECK(std::abs(std::accumulate(pr.begin(), pr.end(), 0.0) - 1.0) <= 1e-12);

        const double c = 0.25 + uniform01(rng) * 8;
        auto eta_scaled = eta;
        for (double& e : eta_scaled) e *= c;
        PheromoneTable tau_scaled = table;
        for (std::size_t i = 0; i < k; ++i) tau_scaled.at(1, i) *= c;
        const auto pe = selection_probabilities(point_of(1, all), table, eta_scaled, p);
        const auto pt = selection_probabilities(point_of(1, all), tau_scaled, eta, p);
        for (std::size_t i = 0; i < k; ++i) {
            CHECK(std::abs(pe[i] - pr[i]) <= 1e-12);
            CHECK(std::abs(pt[i] - pr[i]) <= 1e-12);
        }
    }
}

TEST_CASE("evaporation and deposit") {
    AcoParams p;
    p.rho = 0.25;

    PheromoneTable idle(2, 2, 1.0);
    update_pheromones(idle, nullptr, p);
    CHECK(idle.at(1, 0) == 0.75);
    CHECK(idle.at(2, 1) == 0.75);

    PheromoneTable fed(2, 2, 1.0);
    p.q = 50;
    const auto cand = fake_candidate(100, {{1, 1}});
    update_pheromones(fed, &cand, p);
    CHECK(fed.at(1, 1) == 1.25);
    CHECK(fed.at(1, 0) == 0.75);

    PheromoneTable still(2, 2, 1.0);
    AcoParams frozen;
    frozen.rho = 0;
    frozen.q = 0;
    update_pheromones(still, &cand, frozen);
    for (int s = 1; s <= 2; ++s) {
        for (TypeIndex t = 0; t < 2; ++t) CHECK(still.at(s, t) == 1.0);
    }

    auto infeasible = cand;
    infeasible.feasible = false;
    PheromoneTable ignored(2, 2, 1.0);
    update_pheromones(ignored, &infeasible, p);
    CHECK(ignored.at(1, 1) == 0.75);
}

TEST_CASE("deposit counts repeated decisions unless asked not to") {
    AcoParams p;
    p.rho = 0.0;
    p.q = 10;
    const auto cand = fake_candidate(10, {{2, 0}, {2, 0}, {2, 0}, {1, 1}});
    PheromoneTable each(2, 2, 1.0);
    update_pheromones(each, &cand, p);
    CHECK(each.at(2, 0) == 4.0);
    CHECK(each.at(1, 1) == 2.0);

    p.deposit_per_decision = false;
    PheromoneTable once(2, 2, 1.0);
    update_pheromones(once, &cand, p);
    CHECK(once.at(2, 0) == 2.0);
    CHECK(once.at(1, 1) == 2.0);
}

TEST_CASE("the floor keeps every option alive") {
    AcoParams p;
    p.rho = 0.9;
    p.tau_min = 1e-3;
    p.beta = 0;
    PheromoneTable table(1, 3, 1.0);
    const auto cand = fake_candidate(1, {{1, 0}});
    for (int i = 0; i < 200; ++i) update_pheromones(table, &cand, p);
    CHECK(table.at(1, 1) == p.tau_min);
    const auto pr = selection_probabilities(point_of(1, {0, 1, 2}), table, std::vector<double>(3, 1.0), p);
    for (double x : pr) CHECK(x > 0.0);
}

TEST_CASE("ant seeds differ across ants, iterations and runs") {
    CHECK(ant_seed(0, 1, 0) != ant_seed(0, 1, 1));
    CHECK(ant_seed(0, 1, 0) != ant_seed(0, 2, 0));
    CHECK(ant_seed(0, 1, 0) != ant_seed(1, 1, 0));
    CHECK(ant_seed(5, 3, 7) == ant_seed(5, 3, 7));
}

TEST_CASE("solve finds the single-loop optimum") {
    const auto res = solve(fixtures::table1(1), quick());
    REQUIRE(res.feasible);
    CHECK(*res.best_cost == 1120);
    CHECK(res.trace.size() == 20);
    CHECK(validate(*res.best, fixtures::table1(1)).feasible());
    CHECK(res.best_decisions.size() == res.best->node_count());
}

TEST_CASE("solve reports infeasibility for 180 loops on three levels") {
    const auto res = solve(fixtures::table1(180), quick());
    CHECK_FALSE(res.feasible);
    CHECK_FALSE(res.best.has_value());
    CHECK_FALSE(res.best_cost.has_value());
    for (const auto& r : res.trace) {
        CHECK(r.feasible_ants == 0);
        CHECK_FALSE(r.best_cost.has_value());
    }
}

TEST_CASE("solve is deterministic") {
    auto p = quick(42);
    p.ants = 1;
    p.iterations = 1;
    const auto inst = fixtures::table1(23);
    const auto a = solve(inst, p);
    const auto b = solve(inst, p);
    CHECK(a.best_cost == b.best_cost);

    p = quick(42);
    const auto c = solve(inst, p);
    const auto d = solve(inst, p);
    REQUIRE(c.trace.size() == d.trace.size());
    for (std::size_t i = 0; i < c.trace.size(); ++i) {
        CHECK(c.trace[i].best_cost == d.trace[i].best_cost);
        CHECK(c.trace[i].iteration_best_cost == d.trace[i].iteration_best_cost);
        CHECK(c.trace[i].feasible_ants == d.trace[i].feasible_ants);
    }
}

TEST_CASE("best-so-far never rises and bounds every iteration best") {
    for (auto rule : {DepositRule::BestSoFar, DepositRule::IterationBest}) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            auto p = quick(seed);
            p.deposit = rule;
            const auto inst = fixtures::table1(40);
            const auto res = solve(inst, p);
            std::optional<double> prev;
            for (const auto& r : res.trace) {
                if (prev) {
                    REQUIRE(r.best_cost.has_value());
                    CHECK(*r.best_cost <= *prev);
                }
                if (r.iteration_best_cost) CHECK(*r.best_cost <= *r.iteration_best_cost);
                prev = r.best_cost;
            }
            REQUIRE(res.feasible);
            CHECK(res.best_cost == res.trace.back().best_cost);
            CHECK(validate(*res.best, inst).feasible());
        }
    }
}

TEST_CASE("random search equals the colony with zero exponents") {
    const auto inst = fixtures::table1(17);
    auto p = quick(3);
    p.alpha = 0;
    p.beta = 0;
    const auto colony = solve(inst, p);
    const auto random = solve_random_baseline(inst, quick(3));
    CHECK(colony.best_cost == random.best_cost);
    REQUIRE(colony.trace.size() == random.trace.size());
    for (std::size_t i = 0; i < colony.trace.size(); ++i) {
        CHECK(colony.trace[i].iteration_best_cost == random.trace[i].iteration_best_cost);
    }
}

TEST_CASE("random search still solves the single-loop case") {
    const auto res = solve_random_baseline(fixtures::table1(1), quick());
    REQUIRE(res.feasible);
    CHECK(*res.best_cost == 1120);
}
