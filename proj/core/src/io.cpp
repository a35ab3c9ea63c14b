#include "orbitfield/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json_util.hpp"
#include "orbitfield/errors.hpp"
#include "orbitfield/presets.hpp"

namespace orbitfield {

namespace detail {

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw MalformedInput(what + ": " + e.what());
  }
}

namespace {

// Basis references are names or 1-based indices (as numbers or digit strings).
int basis_index(const std::vector<std::string>& names, const json& key, const std::string& what) {
  const int n = static_cast<int>(names.size());
  auto from_one_based = [&](long long i) {
    if (i < 1 || i > n) throw MalformedInput(what + ": index " + std::to_string(i) + " out of range 1.." + std::to_string(n));
    return static_cast<int>(i - 1);
  };
  if (key.is_number_integer()) return from_one_based(key.get<long long>());
  if (key.is_string()) {
    const auto s = key.get<std::string>();
    for (int i = 0; i < n; ++i)
      if (names[i] == s) return i;
    if (!s.empty() && s.size() < 10 && s.find_first_not_of("0123456789") == std::string::npos) {
      return from_one_based(std::stoll(s));
    }
    throw MalformedInput(what + ": unknown basis element '" + s + "'");
  }
  throw MalformedInput(what + ": basis reference must be a name or an index");
}

Vec coords_from_json(const json& j, const std::vector<std::string>& names, const std::string& what) {
  const int n = static_cast<int>(names.size());
  Vec v = Vec::Zero(n);
  if (j.is_array()) {
    if (static_cast<int>(j.size()) != n) {
      throw MalformedInput(what + ": expected " + std::to_string(n) + " coordinates, got " +
                           std::to_string(j.size()));
    }
    for (int i = 0; i < n; ++i) {
      if (!j[i].is_number()) throw MalformedInput(what + ": coordinates must be numbers");
      v(i) = j[i].get<double>();
    }
    return v;
  }
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!it.value().is_number()) throw MalformedInput(what + ": coordinates must be numbers");
      v(basis_index(names, json(it.key()), what)) += it.value().get<double>();
    }
    return v;
  }
  throw MalformedInput(what + ": expected an array or an object of coordinates");
}

}  // namespace

Vec vector_from_json(const json& j, const LieAlgebra& a, const std::string& what) {
  return coords_from_json(j, a.basis_names(), what);
}

TestFunction testfunction_from_json(const json& j) {
  TestFunction f;
  if (!j.is_object() || !j.contains("factors") || !j["factors"].is_array()) {
    throw MalformedInput("test function: expected {\"factors\": [...]}");
  }
  for (const auto& e : j["factors"]) {
    if (!e.is_object() || !e.contains("role") || !e.contains("kind")) {
      throw MalformedInput("test function: each factor needs role and kind");
    }
    const auto role = e["role"].get<std::string>();
    const auto kind = e["kind"].get<std::string>();
    if (kind == "gaussian") {
      f.set(role, Factor::gaussian(e.value("w", 1.0)));
    } else if (kind == "bandlimited") {
      if (!e.contains("B")) throw MalformedInput("test function: bandlimited factor needs B");
      f.set(role, Factor::bandlimited(e["B"].get<double>()));
    } else {
      throw MalformedInput("test function: unknown factor kind '" + kind + "'");
    }
  }
  return f;
}

json testfunction_json(const TestFunction& f) {
  json arr = json::array();
  for (const auto& [role, fac] : f.factors()) {
    if (fac.kind == FactorKind::Gaussian) {
      arr.push_back({{"role", role}, {"kind", "gaussian"}, {"w", fac.param}});
    } else {
      arr.push_back({{"role", role}, {"kind", "bandlimited"}, {"B", fac.param}});
    }
  }
  return {{"factors", arr}};
}

json vector_json(const Vec& v) {
  json arr = json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

}  // namespace detail

using detail::json;

ParsedAlgebra parse_algebra_json(const std::string& text) {
  const json j = detail::parse_json(text, "algebra");
  if (!j.is_object()) throw MalformedInput("algebra: expected a JSON object");
  ParsedAlgebra out;
  out.name = j.value("name", std::string());
  int n = 0;
  if (j.contains("basis")) {
    if (!j["basis"].is_array()) throw MalformedInput("algebra: basis must be an array of names");
    for (const auto& b : j["basis"]) out.basis.push_back(b.get<std::string>());
    n = static_cast<int>(out.basis.size());
  } else if (j.contains("dim")) {
    n = j["dim"].get<int>();
    for (int i = 0; i < n; ++i) out.basis.push_back("H" + std::to_string(i + 1));
  } else if (j.contains("structure_constants")) {
    n = static_cast<int>(j["structure_constants"].size());
    for (int i = 0; i < n; ++i) out.basis.push_back("H" + std::to_string(i + 1));
  } else {
    throw MalformedInput("algebra: needs basis, dim or structure_constants");
  }
  if (n <= 0 || n > kMaxAlgebraDim) throw MalformedInput("algebra: dimension out of range");

  StructureTensor& t = out.tensor;
  t.n = n;
  t.c.assign(n, std::vector<Vec>(n, Vec::Zero(n)));
  if (j.contains("structure_constants")) {
    const json& sc = j["structure_constants"];
    if (!sc.is_array() || static_cast<int>(sc.size()) != n) {
      throw MalformedInput("algebra: structure_constants must be n x n x n");
    }
    for (int i = 0; i < n; ++i) {
      if (!sc[i].is_array() || static_cast<int>(sc[i].size()) != n) {
        throw MalformedInput("algebra: structure_constants row " + std::to_string(i) + " has wrong length");
      }
      for (int k = 0; k < n; ++k) {
        t.c[i][k] = detail::coords_from_json(sc[i][k], out.basis,
                                             "structure_constants[" + std::to_string(i) + "][" +
                                                 std::to_string(k) + "]");
      }
    }
  }
  if (j.contains("brackets")) {
    for (const auto& b : j["brackets"]) {
      const bool ij = b.contains("i") && b.contains("j") && b.contains("result");
      const bool lr = b.contains("left") && b.contains("right") && b.contains("value");
      if (!ij && !lr) throw MalformedInput("algebra: bracket entries need i, j, result");
      const int l = detail::basis_index(out.basis, ij ? b["i"] : b["left"], "bracket");
      const int r = detail::basis_index(out.basis, ij ? b["j"] : b["right"], "bracket");
      if (l == r) throw MalformedInput("algebra: bracket of a basis element with itself");
      const Vec v = detail::coords_from_json(ij ? b["result"] : b["value"], out.basis, "bracket result");
      t.c[l][r] = v;
      t.c[r][l] = -v;
    }
  }
  if (j.contains("derived_start")) {
    const int ds = j["derived_start"].get<int>();
    if (ds < 1 || ds > n + 1) throw MalformedInput("algebra: derived_start out of range 1.." + std::to_string(n + 1));
    t.derived_start = ds - 1;
  } else {
    int ds = n;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m)
          if (t.c[i][k](m) != 0.0) ds = std::min(ds, m);
    t.derived_start = ds;
  }
  return out;
}

ParsedAlgebra load_algebra_source(const std::string& path_or_preset) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(path_or_preset, ec)) {
    return parse_algebra_json(read_text_file(path_or_preset));
  }
  const LieAlgebra a = load_preset(path_or_preset);
  ParsedAlgebra out;
  out.name = path_or_preset;
  out.basis = a.basis_names();
  out.tensor.n = a.dim();
  out.tensor.derived_start = a.derived_start();
  out.tensor.c.assign(a.dim(), std::vector<Vec>(a.dim()));
  for (int i = 0; i < a.dim(); ++i)
    for (int k = 0; k < a.dim(); ++k) out.tensor.c[i][k] = a.structure(i, k);
  return out;
}

LieAlgebra load_algebra(const std::string& path_or_preset) {
  const ParsedAlgebra p = load_algebra_source(path_or_preset);
  return from_tensor(p.tensor, p.basis);
}

std::string algebra_to_json(const LieAlgebra& a, const std::string& name) {
  json j;
  if (!name.empty()) j["name"] = name;
  j["dim"] = a.dim();
  j["basis"] = a.basis_names();
  j["derived_start"] = a.derived_start() + 1;
  json br = json::array();
  for (int i = 0; i < a.dim(); ++i) {
    for (int k = i + 1; k < a.dim(); ++k) {
      const Vec v = a.structure(i, k);
      if (v.isZero(0.0)) continue;
      json val = json::object();
      for (int m = 0; m < a.dim(); ++m)
        if (v(m) != 0.0) val[std::to_string(m + 1)] = v(m);
      br.push_back({{"i", i + 1}, {"j", k + 1}, {"result", val}});
    }
  }
  j["brackets"] = br;
  return j.dump(2) + "\n";
}

TestFunction parse_testfunction_json(const std::string& text) {
  return detail::testfunction_from_json(detail::parse_json(text, "test function"));
}

std::string testfunction_to_json(const TestFunction& f) {
  return detail::testfunction_json(f).dump(2) + "\n";
}

std::vector<Vec> parse_functionals_json(const std::string& text, int n) {
  const json j = detail::parse_json(text, "functionals");
  const json& arr = j.is_object() && j.contains("functionals") ? j["functionals"] : j;
  if (!arr.is_array()) throw MalformedInput("functionals: expected an array");
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("H" + std::to_string(i + 1));
  std::vector<Vec> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_array()) throw MalformedInput("functionals: entry " + std::to_string(i) + " is not an array");
    out.push_back(detail::coords_from_json(arr[i], names, "functional " + std::to_string(i)));
  }
  return out;
}

Vec parse_vector(const std::string& spec, const LieAlgebra& a) {
  const int n = a.dim();
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) parts.push_back(tok);
  Vec v = Vec::Zero(n);
  const bool named = spec.find('=') != std::string::npos;
  if (!named && static_cast<int>(parts.size()) != n) {
    throw MalformedInput("vector '" + spec + "' needs " + std::to_string(n) + " coordinates");
  }
  for (std::size_t i = 0; i < parts.size(); ++i) {
    std::string key, val = parts[i];
    if (named) {
      const auto eq = parts[i].find('=');
      if (eq == std::string::npos) throw MalformedInput("vector '" + spec + "': mix of named and positional");
      key = parts[i].substr(0, eq);
      val = parts[i].substr(eq + 1);
    }
    double x = 0.0;
    try {
      std::size_t used = 0;
      x = std::stod(val, &used);
      if (used != val.size()) throw std::invalid_argument(val);
    } catch (const std::exception&) {
      throw MalformedInput("vector '" + spec + "': bad number '" + val + "'");
    }
    if (named) {
      v(detail::basis_index(a.basis_names(), json(key), "vector")) += x;
    } else {
      v(static_cast<int>(i)) = x;
    }
  }
  return v;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedInput("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MalformedInput("cannot write '" + path + "'");
  out << text;
}

}  // namespace orbitfield
