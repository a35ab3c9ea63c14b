#pragma once

#include <json.hpp>

#include "orbitfield/algebra.hpp"
#include "orbitfield/testfunction.hpp"

namespace orbitfield::detail {

using json = nlohmann::json;

json parse_json(const std::string& text, const std::string& what);
Vec vector_from_json(const json& j, const LieAlgebra& a, const std::string& what);
TestFunction testfunction_from_json(const json& j);
json testfunction_json(const TestFunction& f);
json vector_json(const Vec& v);

}  // namespace orbitfield::detail
