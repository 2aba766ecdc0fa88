#pragma once

#include "dcsarch/model.hpp"

#include <string>

namespace fixtures {

// Five-type catalog indices.
inline constexpr dcsarch::TypeIndex kU1 = 0, kU2 = 1, kU3 = 2, kU4 = 3, kU5 = 4;

dcsarch::ProblemInstance table1(int loops, int levels = 3, double p_max = 0.1);
dcsarch::ProblemInstance table3_ims();

/// u5 root, u2 processor, u5 leaf; loop 0 on the leaf, run by the u2.
dcsarch::Architecture a1_tree();

/// u1 -> u3 -> {u3, u3, u4} -> 17 x u7, loops dealt 16 per u7 leaf with the
/// remainder on the last one, all run by the root.
dcsarch::Architecture ims_tree();

std::string data_path(const std::string& name);

}  // namespace fixtures
