#pragma once

#include <string>
#include <vector>

#include "orbitfield/algebra.hpp"
#include "orbitfield/testfunction.hpp"

namespace orbitfield {

struct ParsedAlgebra {
  std::string name;
  std::vector<std::string> basis;
  StructureTensor tensor;
};

// Algebra JSON, indices 1-based:
//   {"dim": 3, "basis": ["X","Y","Z"], "derived_start": 3,
//    "brackets": [{"i": 1, "j": 2, "result": {"3": 1.0}}]}
// Basis references may also be names ({"i": "X", "j": "Y", "result": {"Z": 1}});
// {"left", "right", "value"} is accepted as a synonym. Omitted brackets are zero
// and [H_j,H_i] = -[H_i,H_j] is filled in. "structure_constants": c[i][j][k]
// replaces the bracket list. Without "derived_start" the first basis index
// carrying a bracket coordinate is used. ParsedAlgebra stores it 0-based.
ParsedAlgebra parse_algebra_json(const std::string& text);
// A readable file path, else a preset name.
ParsedAlgebra load_algebra_source(const std::string& path_or_preset);
LieAlgebra load_algebra(const std::string& path_or_preset);
std::string algebra_to_json(const LieAlgebra& a, const std::string& name = "");

// {"factors": [{"role": "x1", "kind": "gaussian", "w": 1.0},
//              {"role": "z", "kind": "bandlimited", "B": 2.0}]}
TestFunction parse_testfunction_json(const std::string& text);
std::string testfunction_to_json(const TestFunction& f);

// {"functionals": [[...], ...]} or a bare array of coordinate arrays.
std::vector<Vec> parse_functionals_json(const std::string& text, int n);

// "0,0,1" or "Z=1,X=0.5" (names from the algebra basis).
Vec parse_vector(const std::string& spec, const LieAlgebra& a);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace orbitfield
