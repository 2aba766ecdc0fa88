#include "dcsarch/render.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace dcsarch {

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::string label(const Architecture& arch, const ProblemInstance& inst, NodeId v, const char* sep) {
    const auto& n = arch.node(v);
    const auto& t = inst.type(n.type);
    std::string s = t.id + sep + "(" + (t.is_processor ? "processor" : "relay") + ")";
    std::vector<std::string> notes;
    if (t.is_processor) notes.push_back(std::to_string(arch.loops_assigned_to(v).size()) + " assigned");
    if (n.children.empty()) {
        const auto k = arch.loops_connected_to(v).size();
        notes.push_back(std::to_string(k) + (k == 1 ? " loop" : " loops"));
    }
    for (std::size_t i = 0; i < notes.size(); ++i) s += (i == 0 ? " " : ", ") + notes[i];
    return s;
}

struct Ordered {
    NodeId node;
    std::string text;
    std::vector<Ordered> children;
};

Ordered canonical(const Architecture& arch, const ProblemInstance& inst, NodeId v, int depth) {
    Ordered o{v, {}, {}};
    for (NodeId c : arch.node(v).children) o.children.push_back(canonical(arch, inst, c, depth + 1));
    std::stable_sort(o.children.begin(), o.children.end(),
                     [](const Ordered& a, const Ordered& b) { return a.text < b.text; });
    o.text = std::string(static_cast<std::size_t>(depth) * 2, ' ') + label(arch, inst, v, " ") + "\n";
    for (const auto& c : o.children) o.text += c.text;
    return o;
}

void dot_nodes(const Architecture& arch, const ProblemInstance& inst, const Ordered& o, int& counter,
               std::ostringstream& out) {
    const int id = counter++;
    out << "  n" << id << " [label=\"" << label(arch, inst, o.node, "") << "\"];\n";
    for (const auto& c : o.children) {
        out << "  n" << id << " -> n" << counter << ";\n";
        dot_nodes(arch, inst, c, counter, out);
    }
}

}  // namespace

std::string render_tree(const Architecture& arch, const ProblemInstance& inst, RenderFormat format) {
    std::vector<Ordered> roots;
    for (NodeId r : arch.roots()) roots.push_back(canonical(arch, inst, r, 0));
    std::stable_sort(roots.begin(), roots.end(), [](const Ordered& a, const Ordered& b) { return a.text < b.text; });
    if (format == RenderFormat::Text) {
        std::string s;
        for (const auto& r : roots) s += r.text;
        return s;
    }
    std::ostringstream out;
    out << "digraph architecture {\n";
    int counter = 0;
    for (const auto& r : roots) dot_nodes(arch, inst, r, counter, out);
    out << "}\n";
    return out.str();
}

std::string export_convergence(const ConvergenceTrace& trace) {
    std::string s = "iteration,best_cost,iter_best_cost,feasible_ants\n";
    for (const auto& r : trace) {
        s += std::to_string(r.iteration) + ",";
        if (r.best_cost) s += format_number(*r.best_cost);
        s += ",";
        if (r.iteration_best_cost) s += format_number(*r.iteration_best_cost);
        s += "," + std::to_string(r.feasible_ants) + "\n";
    }
    return s;
}

ConvergenceTrace parse_convergence(std::string_view csv) {
    std::istringstream in{std::string(csv)};
    std::string line;
    if (!std::getline(in, line) || line != "iteration,best_cost,iter_best_cost,feasible_ants") {
        throw std::runtime_error("convergence CSV: bad header");
    }
    ConvergenceTrace trace;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::string cell;
        std::istringstream row(line);
        while (std::getline(row, cell, ',')) f.push_back(cell);
        if (line.back() == ',') f.emplace_back();
        if (f.size() != 4) throw std::runtime_error("convergence CSV: expected 4 fields: " + line);
        IterationRecord r;
        r.iteration = std::stoi(f[0]);
        if (!f[1].empty()) r.best_cost = std::stod(f[1]);
        if (!f[2].empty()) r.iteration_best_cost = std::stod(f[2]);
        r.feasible_ants = std::stoi(f[3]);
        trace.push_back(r);
    }
    return trace;
}

}  // namespace dcsarch
