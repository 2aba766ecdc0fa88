#include "dcsarch/io.hpp"

#include "json.hpp"

#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace dcsarch {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> known) {
    const std::set<std::string> allowed(known.begin(), known.end());
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) throw ParseError(where.empty() ? key : where + "." + key, "unknown field");
    }
}

std::string path(const std::string& where, const char* key) {
    return where.empty() ? key : where + "." + key;
}

const json& required(const json& obj, const std::string& where, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(path(where, key), "missing required field");
    return *it;
}

double number(const json& v, const std::string& field) {
    if (!v.is_number()) throw ParseError(field, "expected a number");
    return v.get<double>();
}

double number_or_null(const json& obj, const std::string& where, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return 0.0;
    return number(*it, path(where, key));
}

long long integer(const json& v, const std::string& field) {
    if (!v.is_number_integer()) throw ParseError(field, "expected an integer");
    if (v.is_number_unsigned()) {
        const auto u = v.get<std::uint64_t>();
        if (u > static_cast<std::uint64_t>(std::numeric_limits<long long>::max())) {
            throw ParseError(field, "integer out of range");
        }
    }
    return v.get<long long>();
}

int small_int(const json& v, const std::string& field) {
    const long long x = integer(v, field);
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
        throw ParseError(field, "integer out of range");
    }
    return static_cast<int>(x);
}

DeviceType parse_device(const json& j, const std::string& where) {
    if (!j.is_object()) throw ParseError(where, "expected an object");
    reject_unknown(j, where, {"id", "cost", "channels", "memory", "fail_prob", "instr_time", "is_processor",
                              "max_children", "relay_delay"});
    DeviceType t;
    const json& id = required(j, where, "id");
    if (!id.is_string()) throw ParseError(path(where, "id"), "expected a string");
    t.id = id.get<std::string>();
    t.cost = number(required(j, where, "cost"), path(where, "cost"));
    t.channels = small_int(required(j, where, "channels"), path(where, "channels"));
    t.memory = number_or_null(j, where, "memory");
    t.fail_prob = number(required(j, where, "fail_prob"), path(where, "fail_prob"));
    t.instr_time = number_or_null(j, where, "instr_time");
    const json& proc = required(j, where, "is_processor");
    if (!proc.is_boolean()) throw ParseError(path(where, "is_processor"), "expected a boolean");
    t.is_processor = proc.get<bool>();
    t.max_children = small_int(required(j, where, "max_children"), path(where, "max_children"));
    t.relay_delay = number(required(j, where, "relay_delay"), path(where, "relay_delay"));
    try {
        check_device_type(t);
    } catch (const ModelError& e) {
        throw ParseError(where, e.what());
    }
    return t;
}

LoopGroup parse_loop(const json& j, const std::string& where) {
    if (!j.is_object()) throw ParseError(where, "expected an object");
    reject_unknown(j, where, {"count", "signals", "memory", "instructions"});
    LoopGroup g;
    g.count = small_int(required(j, where, "count"), path(where, "count"));
    if (g.count < 1) throw ParseError(path(where, "count"), "must be >= 1");
    g.loop.signals = small_int(required(j, where, "signals"), path(where, "signals"));
    g.loop.memory = number(required(j, where, "memory"), path(where, "memory"));
    g.loop.instructions = small_int(required(j, where, "instructions"), path(where, "instructions"));
    try {
        check_loop(g.loop);
    } catch (const ModelError& e) {
        throw ParseError(where, e.what());
    }
    return g;
}

AcoParams parse_params(const json& j) {
    const std::string where = "aco";
    if (!j.is_object()) throw ParseError(where, "expected an object");
    reject_unknown(j, where, {"alpha", "beta", "rho", "ants", "iterations", "tau0", "tau_min", "q", "heuristic",
                              "deposit", "deposit_per_decision", "seed"});
    AcoParams p;
    auto num = [&](const char* key, double& out) {
        if (auto it = j.find(key); it != j.end()) out = number(*it, path(where, key));
    };
    num("alpha", p.alpha);
    num("beta", p.beta);
    num("rho", p.rho);
    num("tau0", p.tau0);
    num("tau_min", p.tau_min);
    num("q", p.q);
    if (auto it = j.find("ants"); it != j.end()) p.ants = small_int(*it, path(where, "ants"));
    if (auto it = j.find("iterations"); it != j.end()) p.iterations = small_int(*it, path(where, "iterations"));
    if (auto it = j.find("seed"); it != j.end()) {
        if (!it->is_number_integer() || (!it->is_number_unsigned() && it->get<long long>() < 0)) {
            throw ParseError(path(where, "seed"), "expected a non-negative integer");
        }
        p.seed = it->get<std::uint64_t>();
    }
    if (auto it = j.find("heuristic"); it != j.end()) {
        const std::string field = path(where, "heuristic");
        if (!it->is_string()) throw ParseError(field, "expected a string");
        const auto h = it->get<std::string>();
        if (h == "inverse_cost") {
            p.heuristic = HeuristicMode::InverseCost;
        } else if (h == "channels_per_cost") {
            p.heuristic = HeuristicMode::ChannelsPerCost;
        } else {
            throw ParseError(field, "expected \"inverse_cost\" or \"channels_per_cost\"");
        }
    }
    if (auto it = j.find("deposit"); it != j.end()) {
        const std::string field = path(where, "deposit");
        if (!it->is_string()) throw ParseError(field, "expected a string");
        const auto d = it->get<std::string>();
        if (d == "best_so_far") {
            p.deposit = DepositRule::BestSoFar;
        } else if (d == "iteration_best") {
            p.deposit = DepositRule::IterationBest;
        } else {
            throw ParseError(field, "expected \"best_so_far\" or \"iteration_best\"");
        }
    }
    if (auto it = j.find("deposit_per_decision"); it != j.end()) {
        if (!it->is_boolean()) throw ParseError(path(where, "deposit_per_decision"), "expected a boolean");
        p.deposit_per_decision = it->get<bool>();
    }
    try {
        check_params(p);
    } catch (const ModelError& e) {
        throw ParseError(where, e.what());
    }
    return p;
}

}  // namespace

LoadedInstance parse_instance(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("", std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("", "instance must be a JSON object");
    reject_unknown(j, "", {"levels", "t_max", "p_max", "device_types", "loops", "aco", "note"});

    LoadedInstance out;
    ProblemInstance& inst = out.instance;
    inst.levels = small_int(required(j, "", "levels"), "levels");
    inst.t_max = number(required(j, "", "t_max"), "t_max");
    inst.p_max = number(required(j, "", "p_max"), "p_max");
    if (auto it = j.find("note"); it != j.end()) {
        if (!it->is_string()) throw ParseError("note", "expected a string");
        inst.note = it->get<std::string>();
    }

    const json& types = required(j, "", "device_types");
    if (!types.is_array()) throw ParseError("device_types", "expected an array");
    if (types.empty()) throw ParseError("device_types", "must be non-empty");
    for (std::size_t i = 0; i < types.size(); ++i) {
        inst.device_types.push_back(parse_device(types[i], "device_types[" + std::to_string(i) + "]"));
    }

    const json& loops = required(j, "", "loops");
    if (!loops.is_array()) throw ParseError("loops", "expected an array");
    if (loops.empty()) throw ParseError("loops", "must be non-empty");
    std::vector<LoopGroup> groups;
    for (std::size_t i = 0; i < loops.size(); ++i) {
        groups.push_back(parse_loop(loops[i], "loops[" + std::to_string(i) + "]"));
    }
    inst.loops = expand_loops(groups);

    if (auto it = j.find("aco"); it != j.end()) out.params = parse_params(*it);

    try {
        check_instance(inst);
    } catch (const ModelError& e) {
        throw ParseError("", e.what());
    }
    return out;
}

std::string serialize_instance(const ProblemInstance& inst, const AcoParams& params) {
    json j;
    j["levels"] = inst.levels;
    j["t_max"] = inst.t_max;
    j["p_max"] = inst.p_max;
    if (!inst.note.empty()) j["note"] = inst.note;
    j["device_types"] = json::array();
    for (const auto& t : inst.device_types) {
        json d;
        d["id"] = t.id;
        d["cost"] = t.cost;
        d["channels"] = t.channels;
        d["memory"] = t.is_processor || t.memory != 0.0 ? json(t.memory) : json(nullptr);
        d["fail_prob"] = t.fail_prob;
        d["instr_time"] = t.is_processor || t.instr_time != 0.0 ? json(t.instr_time) : json(nullptr);
        d["is_processor"] = t.is_processor;
        d["max_children"] = t.max_children;
        d["relay_delay"] = t.relay_delay;
        j["device_types"].push_back(std::move(d));
    }
    j["loops"] = json::array();
    for (const auto& g : group_loops(inst.loops)) {
        j["loops"].push_back({{"count", g.count},
                              {"signals", g.loop.signals},
                              {"memory", g.loop.memory},
                              {"instructions", g.loop.instructions}});
    }
    j["aco"] = {{"alpha", params.alpha},
                {"beta", params.beta},
                {"rho", params.rho},
                {"ants", params.ants},
                {"iterations", params.iterations},
                {"tau0", params.tau0},
                {"tau_min", params.tau_min},
                {"q", params.q},
                {"heuristic", params.heuristic == HeuristicMode::InverseCost ? "inverse_cost" : "channels_per_cost"},
                {"deposit", params.deposit == DepositRule::BestSoFar ? "best_so_far" : "iteration_best"},
                {"deposit_per_decision", params.deposit_per_decision},
                {"seed", params.seed}};
    return j.dump(2) + "\n";
}

Architecture parse_architecture(std::string_view text, const ProblemInstance& inst) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("", std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("", "architecture must be a JSON object");
    reject_unknown(j, "", {"nodes"});
    const json& nodes = required(j, "", "nodes");
    if (!nodes.is_array()) throw ParseError("nodes", "expected an array");

    ArchitectureBuilder b(inst.loops.size());
    std::map<long long, NodeId> ids;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::string where = "nodes[" + std::to_string(i) + "]";
        const json& n = nodes[i];
        if (!n.is_object()) throw ParseError(where, "expected an object");
        reject_unknown(n, where, {"id", "type", "parent", "connected_loops", "assigned_loops"});
        const long long id = integer(required(n, where, "id"), path(where, "id"));
        if (ids.count(id)) throw ParseError(path(where, "id"), "duplicate node id");

        const json& type = required(n, where, "type");
        if (!type.is_string()) throw ParseError(path(where, "type"), "expected a catalog id");
        TypeIndex t = inst.device_types.size();
        for (TypeIndex k = 0; k < inst.device_types.size(); ++k) {
            if (inst.device_types[k].id == type.get<std::string>()) t = k;
        }
        if (t == inst.device_types.size()) throw ParseError(path(where, "type"), "unknown device type");

        const json& parent = required(n, where, "parent");
        NodeId v;
        if (parent.is_null()) {
            v = b.add_root(t);
        } else {
            const long long p = integer(parent, path(where, "parent"));
            auto it = ids.find(p);
            if (it == ids.end()) throw ParseError(path(where, "parent"), "parent must be listed before the node");
            v = b.add_child(it->second, t);
        }
        ids[id] = v;

        auto loops = [&](const char* key, bool connect) {
            auto it = n.find(key);
            if (it == n.end()) return;
            const std::string field = path(where, key);
            if (!it->is_array()) throw ParseError(field, "expected an array");
            for (const auto& a : *it) {
                const long long idx = integer(a, field);
                if (idx < 0 || static_cast<std::size_t>(idx) >= inst.loops.size()) {
                    throw ParseError(field, "loop index out of range");
                }
                if (connect) {
                    b.connect(static_cast<LoopIndex>(idx), v);
                } else {
                    b.assign(static_cast<LoopIndex>(idx), v);
                }
            }
        };
        loops("connected_loops", true);
        loops("assigned_loops", false);
    }
    return std::move(b).build();
}

std::string serialize_architecture(const Architecture& arch, const ProblemInstance& inst) {
    json nodes = json::array();
    for (NodeId v = 0; v < arch.node_count(); ++v) {
        const auto& n = arch.node(v);
        nodes.push_back({{"id", v},
                         {"type", inst.type(n.type).id},
                         {"parent", n.parent ? json(*n.parent) : json(nullptr)},
                         {"connected_loops", arch.loops_connected_to(v)},
                         {"assigned_loops", arch.loops_assigned_to(v)}});
    }
    return json{{"nodes", nodes}}.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace dcsarch
