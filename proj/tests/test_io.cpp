#include "doctest.h"

#include "dcsarch/io.hpp"
#include "fixtures.hpp"
#include "random_gen.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

using namespace dcsarch;

namespace {

const char* kMinimal = R"({
  "levels": 3, "t_max": 1.0, "p_max": 0.1,
  "device_types": [
    {"id": "p", "cost": 990, "channels": 0, "memory": 256, "fail_prob": 0.02, "instr_time": 0.004,
     "is_processor": true, "max_children": 4, "relay_delay": 0},
    {"id": "r", "cost": 65, "channels": 2, "memory": null, "fail_prob": 0.001, "instr_time": null,
     "is_processor": false, "max_children": 8, "relay_delay": 0.02}
  ],
  "loops": [{"count": 2, "signals": 1, "memory": 1, "instructions": 5},
            {"count": 1, "signals": 2, "memory": 3, "instructions": 1}]
})";

std::string with(std::string text, const std::string& from, const std::string& to) {
    const auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    return text.replace(pos, from.size(), to);
}

std::string field_of(const std::string& text) {
    try {
        parse_instance(text);
    } catch (const ParseError& e) {
        return e.field();
    }
    return "<accepted>";
}

std::set<NodeId> as_set(const std::vector<NodeId>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("bundled five-type instance") {
    const auto li = parse_instance(read_file(fixtures::data_path("table1_A20_S3.json")));
    CHECK(li.instance.device_types.size() == 5);
    CHECK(li.instance.loops.size() == 20);
    CHECK(li.instance.levels == 3);
    CHECK(li.instance.t_max == 1.0);
    CHECK(li.instance.p_max == 0.1);
    CHECK(li.instance == fixtures::table1(20));
    CHECK(li.params.ants == 20);
    CHECK(li.params.iterations == 20);
    CHECK(li.params.rho == 0.25);
    CHECK(li.params.alpha == 2.0);
    CHECK(li.params.beta == 1.0);
}

TEST_CASE("bundled IMS instance") {
    const auto li = parse_instance(read_file(fixtures::data_path("table3_ims.json")));
    CHECK(li.instance.device_types.size() == 7);
    CHECK(li.instance.loops.size() == 260);
    CHECK(li.instance.loops[0] == ControlLoop{1, 2e-4, 1});
    CHECK(li.instance.device_types[0].cost == 77544);
    CHECK_FALSE(li.instance.note.empty());
    auto expected = fixtures::table3_ims();
    expected.note = li.instance.note;
    CHECK(li.instance == expected);
}

TEST_CASE("every bundled instance parses") {
    for (int a = 5; a < 100; a += 5) {
        CHECK_NOTHROW(parse_instance(read_file(fixtures::data_path("table1_A" + std::to_string(a) + "_S3.json"))));
    }
    for (const char* name : {"table1_A1_S3.json", "table1_A180_S3.json", "table1_A180_S4.json", "table1_A500_S4.json"}) {
        CHECK_NOTHROW(parse_instance(read_file(fixtures::data_path(name))));
    }
}

TEST_CASE("defaults apply when the aco block is absent") {
    const auto li = parse_instance(kMinimal);
    CHECK(li.params == AcoParams{});
    CHECK(li.instance.loops.size() == 3);
    CHECK(li.instance.device_types[1].memory == 0.0);
    CHECK(li.instance.device_types[1].instr_time == 0.0);
}

TEST_CASE("parse errors name the field") {
    const std::string base = kMinimal;
    CHECK(field_of(with(base, R"("levels": 3, )", "")) == "levels");
    CHECK(field_of(with(base, R"("cost": 65)", R"("cost": "cheap")")) == "device_types[1].cost");
    CHECK(field_of(with(base, R"("cost": 65)", R"("cost": 65, "colour": 1)")) == "device_types[1].colour");
    CHECK(field_of(with(base, R"("count": 2)", R"("count": 0)")) == "loops[0].count");
    CHECK(field_of(with(base, R"("fail_prob": 0.02)", R"("fail_prob": 2)")) == "device_types[0]");
    CHECK(field_of(base.substr(0, base.size() - 2) + R"(, "aco": {"rho": 1.5}})") == "aco");
    CHECK(field_of(base.substr(0, base.size() - 2) + R"(, "aco": {"heuristic": "greedy"}})") == "aco.heuristic");
    CHECK(field_of(base.substr(0, base.size() - 2) + R"(, "aco": {"seed": -1}})") == "aco.seed");
    CHECK_THROWS_AS(parse_instance("{ not json"), ParseError);
}

TEST_CASE("an empty device list is rejected") {
    const std::string text = R"({"levels": 2, "t_max": 1, "p_max": 1, "device_types": [],
                                 "loops": [{"count": 1, "signals": 1, "memory": 1, "instructions": 1}]})";
    CHECK(field_of(text) == "device_types");
}

TEST_CASE("instances survive a serialize and parse round trip") {
    Rng rng(99);
    for (int i = 0; i < 300; ++i) {
        auto inst = gen::instance(rng, 12, 5);
        inst.note = i % 3 ? "" : "generated";
        AcoParams p;
        p.alpha = uniform01(rng) * 4;
        p.beta = uniform01(rng) * 4;
        p.rho = uniform01(rng);
        p.q = uniform01(rng) * 5000;
        p.seed = rng();
        p.heuristic = i % 2 ? HeuristicMode::InverseCost : HeuristicMode::ChannelsPerCost;
        p.deposit = i % 4 < 2 ? DepositRule::BestSoFar : DepositRule::IterationBest;
        p.deposit_per_decision = i % 5 != 0;
        const auto back = parse_instance(serialize_instance(inst, p));
        CHECK(back.instance == inst);
        CHECK(back.params == p);
    }
    const auto ims = fixtures::table3_ims();
    CHECK(parse_instance(serialize_instance(ims, AcoParams{})).instance == ims);
}

TEST_CASE("architectures survive a serialize and parse round trip") {
    const auto inst = fixtures::table3_ims();
    const auto ims = fixtures::ims_tree();
    const auto back = parse_architecture(serialize_architecture(ims, inst), inst);
    REQUIRE(back.node_count() == ims.node_count());
    for (NodeId v = 0; v < ims.node_count(); ++v) {
        CHECK(back.node(v).type == ims.node(v).type);
        CHECK(back.node(v).parent == ims.node(v).parent);
    }
    for (LoopIndex a = 0; a < 260; ++a) {
        CHECK(back.connections(a) == ims.connections(a));
        CHECK(back.assignments(a) == ims.assignments(a));
    }

    Rng rng(4);
    for (int i = 0; i < 300; ++i) {
        const auto ri = gen::instance(rng, 4, 4);
        const auto arch = gen::architecture(ri, rng, 8);
        const auto again = parse_architecture(serialize_architecture(arch, ri), ri);
        REQUIRE(again.node_count() == arch.node_count());
        for (LoopIndex a = 0; a < ri.loops.size(); ++a) {
            CHECK(as_set(again.connections(a)) == as_set(arch.connections(a)));
            CHECK(as_set(again.assignments(a)) == as_set(arch.assignments(a)));
        }
    }
}

TEST_CASE("architecture parse errors") {
    const auto inst = fixtures::table1(1);
    auto field = [&](const std::string& text) {
        try {
            parse_architecture(text, inst);
        } catch (const ParseError& e) {
            return e.field();
        }
        return std::string("<accepted>");
    };
    CHECK(field(R"({"nodes": [{"id": 0, "type": "u9", "parent": null}]})") == "nodes[0].type");
    CHECK(field(R"({"nodes": [{"id": 0, "type": "u5", "parent": 3}]})") == "nodes[0].parent");
    CHECK(field(R"({"nodes": [{"id": 0, "type": "u5", "parent": null, "connected_loops": [4]}]})") ==
          "nodes[0].connected_loops");
    CHECK(field(R"({"nodes": [{"id": 0, "type": "u5", "parent": null}, {"id": 0, "type": "u5", "parent": 0}]})") ==
          "nodes[1].id");
    CHECK(field(R"({"nodes": [], "extra": 1})") == "extra");
}

TEST_CASE("file helpers") {
    const std::string path = "io_roundtrip.tmp";
    write_file(path, "abc\n");
    CHECK(read_file(path) == "abc\n");
    std::remove(path.c_str());
    CHECK_THROWS(read_file("does/not/exist.json"));
}
