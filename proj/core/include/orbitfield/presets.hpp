#pragma once

#include <string>
#include <vector>

#include "orbitfield/algebra.hpp"

namespace orbitfield {

// heis3, heis5, h3xh3, free32, free42, abelian2.
LieAlgebra load_preset(const std::string& name);
const std::vector<std::string>& preset_names();

// Free two-step nilpotent algebra on g generators: e_1..e_g, then e_ij (i<j).
LieAlgebra free_two_step(int generators);
// h_{2d+1}: X_1, Y_1, ..., X_d, Y_d, Z with [X_i, Y_i] = Z.
LieAlgebra heisenberg(int d);

}  // namespace orbitfield
