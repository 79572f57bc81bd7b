#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "renyi/experiments.hpp"
#include "renyi/solver.hpp"
#include "renyi/verifier.hpp"

namespace renyi {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
std::string library_version();

/// Malformed or invalid problem file. The message carries the position
/// (line and column for syntax errors, a JSON pointer for schema errors).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Problem files:
// {
//   "schema": 1,
//   "objective": [c...],
//   "A": {"rows": [...], "cols": [...], "vals": [...]},
//   "b": [...],
//   "cones": [{"kind": "nonneg" | "psd" | "renyi_hypo" | "renyi_epi" | "renyi_persp_epi",
//              "n": int, "alpha": real, "field": "real" | "complex"}],
//   "start": [...]            (optional)
// }
// "alpha" is required for the Rényi kinds and rejected otherwise; "field"
// defaults to "complex" and is rejected for nonneg. Matrix blocks use svec.
// Unknown keys are errors.
ConicProblem parse_problem(const std::string& text);
ConicProblem load_problem(const std::string& path);
Json problem_to_json(const ConicProblem& p);
void save_problem(const std::string& path, const ConicProblem& p);

std::string cone_kind_name(ConeType type);

Json config_json(const SolverConfig& config);
/// Status, objective, gap bound, μ, iterations and the iteration trace.
Json solve_result_json(const SolveResult& r);
Json kkt_json(const KktResiduals& k);
Json verification_json(const VerificationReport& r);
/// Hermitian matrix as {"re": rows, "im": rows}.
Json matrix_json(const Matrix& m);

}  // namespace renyi
