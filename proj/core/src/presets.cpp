#include "orbitfield/presets.hpp"

#include "orbitfield/errors.hpp"

namespace orbitfield {

LieAlgebra free_two_step(int generators) {
  const int g = generators;
  const int n = g + g * (g - 1) / 2;
  std::vector<std::string> names;
  for (int i = 1; i <= g; ++i) names.push_back("e" + std::to_string(i));
  for (int i = 1; i <= g; ++i)
    for (int j = i + 1; j <= g; ++j) names.push_back("e" + std::to_string(i) + std::to_string(j));
  LieAlgebra a(n, names, g);
  int pos = g;
  for (int i = 0; i < g; ++i) {
    for (int j = i + 1; j < g; ++j) {
      a.set_bracket(i, j, Vec::Unit(n, pos));
      ++pos;
    }
  }
  return a;
}

LieAlgebra heisenberg(int d) {
  const int n = 2 * d + 1;
  std::vector<std::string> names;
  for (int i = 1; i <= d; ++i) {
    names.push_back(d == 1 ? "X" : "X" + std::to_string(i));
    names.push_back(d == 1 ? "Y" : "Y" + std::to_string(i));
  }
  names.push_back("Z");
  LieAlgebra a(n, names, 2 * d);
  for (int i = 0; i < d; ++i) a.set_bracket(2 * i, 2 * i + 1, Vec::Unit(n, 2 * d));
  return a;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"heis3", "heis5", "h3xh3", "free32", "free42", "abelian2"};
  return names;
}

LieAlgebra load_preset(const std::string& name) {
  if (name == "heis3") return heisenberg(1);
  if (name == "heis5") return heisenberg(2);
  if (name == "free32") return free_two_step(3);
  if (name == "free42") return free_two_step(4);
  if (name == "abelian2") return LieAlgebra(2, {"X", "Y"}, 2);
  if (name == "h3xh3") {
    LieAlgebra a(6, {"X1", "Y1", "X2", "Y2", "Z1", "Z2"}, 4);
    a.set_bracket(0, 1, Vec::Unit(6, 4));
    a.set_bracket(2, 3, Vec::Unit(6, 5));
    return a;
  }
  throw MalformedInput("unknown preset '" + name + "'");
}

}  // namespace orbitfield
