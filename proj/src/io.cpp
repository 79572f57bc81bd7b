#include "renyi/io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "renyi/errors.hpp"

#ifndef RENYI_VERSION_STRING
#define RENYI_VERSION_STRING "0.0.0"
#endif

namespace renyi {

std::string library_version() { return RENYI_VERSION_STRING; }

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ParseError((path.empty() ? std::string("/") : path) + ": " + what);
}

void expect_keys(const Json& j, const std::string& path, const std::set<std::string>& required,
                 const std::set<std::string>& optional) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : j.items())
    if (!required.count(key) && !optional.count(key)) fail(path + "/" + key, "unknown key");
  for (const auto& key : required)
    if (!j.contains(key)) fail(path + "/" + key, "missing required key");
}

double number_at(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

int index_at(const Json& j, const std::string& path) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) fail(path, "expected an integer");
  const auto v = j.get<long long>();
  if (v < 0 || v > std::numeric_limits<int>::max()) fail(path, "index out of range");
  return static_cast<int>(v);
}

Vector vector_at(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = number_at(j[i], path + "/" + std::to_string(i));
  return v;
}

std::vector<int> indices_at(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of integers");
  std::vector<int> v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = index_at(j[i], path + "/" + std::to_string(i));
  return v;
}

ConeKind cone_at(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  if (!j.contains("kind") || !j["kind"].is_string()) fail(path + "/kind", "expected a string");
  const std::string kind = j["kind"].get<std::string>();
  const bool renyi = kind == "renyi_hypo" || kind == "renyi_epi" || kind == "renyi_persp_epi";
  if (kind == "nonneg") {
    expect_keys(j, path, {"kind", "n"}, {});
  } else if (kind == "psd") {
    expect_keys(j, path, {"kind", "n"}, {"field"});
  } else if (renyi) {
    expect_keys(j, path, {"kind", "n", "alpha"}, {"field"});
  } else {
    fail(path + "/kind", "unknown cone kind '" + kind + "'");
  }
  const int n = index_at(j["n"], path + "/n");
  Field field = Field::Complex;
  if (j.contains("field")) {
    const Json& f = j["field"];
    if (!f.is_string() || (f != "real" && f != "complex"))
      fail(path + "/field", "expected \"real\" or \"complex\"");
    field = f == "real" ? Field::Real : Field::Complex;
  }
  try {
    if (kind == "nonneg") return ConeKind::nonneg(n);
    if (kind == "psd") return ConeKind::psd(n, field);
    const double alpha = number_at(j["alpha"], path + "/alpha");
    if (kind == "renyi_hypo") return ConeKind::renyi_hypo(n, alpha, field);
    if (kind == "renyi_epi") return ConeKind::renyi_epi(n, alpha, field);
    return ConeKind::renyi_persp_epi(n, alpha, field);
  } catch (const std::logic_error& e) {
    fail(path, e.what());
  }
}

std::string position(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

}  // namespace

std::string cone_kind_name(ConeType type) {
  switch (type) {
    case ConeType::NonNeg: return "nonneg";
    case ConeType::PSD: return "psd";
    case ConeType::RenyiHypo: return "renyi_hypo";
    case ConeType::RenyiEpi: return "renyi_epi";
    case ConeType::RenyiPerspEpi: return "renyi_persp_epi";
  }
  return "unknown";
}

ConicProblem parse_problem(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError("syntax error at " + position(text, e.byte) + " (byte " +
                     std::to_string(e.byte) + "): " + e.what());
  }
  expect_keys(j, "", {"schema", "objective", "A", "b", "cones"}, {"start"});
  if (!j["schema"].is_number_integer() || j["schema"].get<long long>() != kSchemaVersion)
    fail("/schema", "unsupported schema version (expected " + std::to_string(kSchemaVersion) + ")");

  ConicProblem p;
  p.c = vector_at(j["objective"], "/objective");
  p.b = vector_at(j["b"], "/b");
  p.rows = static_cast<int>(p.b.size());

  const Json& a = j["A"];
  expect_keys(a, "/A", {"rows", "cols", "vals"}, {});
  const std::vector<int> rows = indices_at(a["rows"], "/A/rows");
  const std::vector<int> cols = indices_at(a["cols"], "/A/cols");
  const Vector vals = vector_at(a["vals"], "/A/vals");
  if (rows.size() != cols.size() || rows.size() != static_cast<std::size_t>(vals.size()))
    fail("/A", "rows, cols and vals differ in length");
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] >= p.rows) fail("/A/rows/" + std::to_string(k), "row index exceeds length of b");
    if (cols[k] >= p.c.size()) fail("/A/cols/" + std::to_string(k), "column index exceeds length of objective");
    p.A.emplace_back(rows[k], cols[k], vals[static_cast<Eigen::Index>(k)]);
  }

  const Json& cones = j["cones"];
  if (!cones.is_array() || cones.empty()) fail("/cones", "expected a nonempty array");
  for (std::size_t i = 0; i < cones.size(); ++i)
    p.cones.push_back(cone_at(cones[i], "/cones/" + std::to_string(i)));
  if (j.contains("start")) p.start = vector_at(j["start"], "/start");

  if (p.start && p.start->size() != p.dim())
    fail("/start", "length differs from the total cone dimension");
  try {
    p.validate();
  } catch (const std::logic_error& e) {
    fail("", std::string("inconsistent problem: ") + e.what());
  }
  return p;
}

ConicProblem load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream s;
  s << in.rdbuf();
  try {
    return parse_problem(s.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

Json problem_to_json(const ConicProblem& p) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["objective"] = to_json(p.c);
  Json rows = Json::array(), cols = Json::array(), vals = Json::array();
  for (const auto& t : p.A) {
    rows.push_back(t.row());
    cols.push_back(t.col());
    vals.push_back(t.value());
  }
  j["A"] = {{"rows", rows}, {"cols", cols}, {"vals", vals}};
  j["b"] = to_json(p.b);
  Json cones = Json::array();
  for (const auto& c : p.cones) {
    Json cj;
    cj["kind"] = cone_kind_name(c.type);
    cj["n"] = c.n;
    if (c.is_renyi()) cj["alpha"] = c.alpha;
    if (c.type != ConeType::NonNeg) cj["field"] = c.field == Field::Real ? "real" : "complex";
    cones.push_back(cj);
  }
  j["cones"] = cones;
  if (p.start) j["start"] = to_json(*p.start);
  return j;
}

void save_problem(const std::string& path, const ConicProblem& p) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot write file");
  out << problem_to_json(p).dump(1) << '\n';
}

Json config_json(const SolverConfig& c) {
  return {{"gap_tolerance", c.gap_tolerance},
          {"max_iterations", c.max_iterations},
          {"mu_reduction", c.mu_reduction},
          {"line_search_backtrack", c.line_search_backtrack},
          {"feasibility_tolerance", c.feasibility_tolerance},
          {"predictor", c.predictor},
          {"parallel", c.parallel}};
}

Json solve_result_json(const SolveResult& r) {
  Json trace = Json::array();
  for (const auto& t : r.trace)
    trace.push_back({{"iteration", t.iteration},
                     {"mu", t.mu},
                     {"newton_decrement", t.newton_decrement},
                     {"step", t.step},
                     {"objective", t.objective}});
  return {{"status", to_string(r.status)},
          {"message", r.message},
          {"objective", r.objective_value},
          {"gap_bound", r.gap_bound},
          {"mu", r.mu},
          {"iterations", r.iterations},
          {"trace", trace}};
}

Json kkt_json(const KktResiduals& k) {
  return {{"primal", k.primal}, {"dual", k.dual}, {"gap", k.gap}};
}

Json verification_json(const VerificationReport& r) {
  Json j = {{"property", r.property_name},
            {"passed", r.passed},
            {"informational", r.informational},
            {"samples", r.samples},
            {"resampled", r.resampled},
            {"worst_violation", r.worst_violation},
            {"tolerance", r.tolerance}};
  if (std::isfinite(r.statistic)) j["statistic"] = r.statistic;
  j["worst_case"] = {{"label", r.worst_case_label}, {"inputs", r.worst_case_inputs}};
  j["seed"] = r.seed;
  return j;
}

Json matrix_json(const Matrix& m) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json rr = Json::array(), ii = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      rr.push_back(m(i, k).real());
      ii.push_back(m(i, k).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return {{"re", re}, {"im", im}};
}

}  // namespace renyi
