#include "fixtures.hpp"

#include <algorithm>
#include <vector>

using namespace dcsarch;

namespace fixtures {

namespace {

DeviceType dev(std::string id, double cost, int channels, double memory, double p, double t, bool proc, int m,
               double tau) {
    return DeviceType{std::move(id), cost, channels, memory, p, t, proc, m, tau};
}

}  // namespace

ProblemInstance table1(int loops, int levels, double p_max) {
    ProblemInstance inst;
    inst.device_types = {
        dev("u1", 1000, 0, 512, 0.01, 0.002, true, 4, 0.0),
        dev("u2", 990, 0, 256, 0.02, 0.004, true, 4, 0.0),
        dev("u3", 80, 8, 0, 0.005, 0, false, 4, 0.01),
        dev("u4", 78, 4, 0, 0.005, 0, false, 4, 0.03),
        dev("u5", 65, 2, 0, 0.001, 0, false, 8, 0.02),
    };
    inst.loops.assign(static_cast<std::size_t>(loops), ControlLoop{1, 1.0, 5});
    inst.levels = levels;
    inst.t_max = 1.0;
    inst.p_max = p_max;
    return inst;
}

ProblemInstance table3_ims() {
    ProblemInstance inst;
    inst.device_types = {
        dev("u1", 77544, 0, 256, 0.0839, 1e-6, true, 1, 0.0),
        dev("u2", 91988, 0, 1024, 0.0839, 0.8e-6, true, 1, 0.0),
        dev("u3", 8968, 0, 0, 0.0839, 0, false, 5, 0.0),
        dev("u4", 13285, 0, 0, 0.0839, 0, false, 8, 0.0),
        dev("u5", 22977, 8, 0, 0.0839, 0, false, 0, 0.6),
        dev("u6", 28182, 8, 0, 0.0839, 0, false, 0, 0.28),
        dev("u7", 21350, 16, 0, 0.0839, 0, false, 0, 0.08),
    };
    inst.loops.assign(260, ControlLoop{1, 2e-4, 1});
    inst.levels = 4;
    inst.t_max = 1.0;
    inst.p_max = 1.0;
    return inst;
}

Architecture a1_tree() {
    ArchitectureBuilder b(1);
    const NodeId root = b.add_root(kU5);
    const NodeId mid = b.add_child(root, kU2);
    const NodeId leaf = b.add_child(mid, kU5);
    b.connect(0, leaf);
    b.assign(0, mid);
    return std::move(b).build();
}

Architecture ims_tree() {
    ArchitectureBuilder b(260);
    const NodeId root = b.add_root(0);
    const NodeId top = b.add_child(root, 2);
    std::vector<NodeId> mids = {b.add_child(top, 2), b.add_child(top, 2), b.add_child(top, 3)};
    const int per_mid[] = {5, 5, 7};
    std::vector<NodeId> leaves;
    for (std::size_t i = 0; i < mids.size(); ++i) {
        for (int k = 0; k < per_mid[i]; ++k) leaves.push_back(b.add_child(mids[i], 6));
    }
    for (LoopIndex a = 0; a < 260; ++a) {
        b.connect(a, leaves[std::min<std::size_t>(a / 16, leaves.size() - 1)]);
        b.assign(a, root);
    }
    return std::move(b).build();
}

std::string data_path(const std::string& name) { return std::string(DCSARCH_DATA_DIR) + "/" + name; }

}  // namespace fixtures
