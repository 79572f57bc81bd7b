#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "renyi/errors.hpp"
#include "renyi/experiments.hpp"
#include "renyi/io.hpp"
#include "renyi/trace_fn.hpp"
#include "renyi/verifier.hpp"

using namespace renyi;

namespace {

enum Exit : int {
  kOk = 0,
  kError = 1,  // bad arguments, unsupported parameters or a failed verification
  kIterationLimit = 2,
  kNumericalFailure = 3,
  kParseError = 4,
  kInfeasible = 5,
};

int exit_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return kOk;
    case SolveStatus::IterationLimit: return kIterationLimit;
    case SolveStatus::NumericalFailure: return kNumericalFailure;
    case SolveStatus::Infeasible: return kInfeasible;
  }
  return kNumericalFailure;
}

// Worse status wins when several solves feed one report.
int worst(int a, int b) {
  auto rank = [](int e) { return e == kOk ? 0 : e == kIterationLimit ? 1 : e == kInfeasible ? 2 : 3; };
  return rank(a) >= rank(b) ? a : b;
}

struct Globals {
  std::uint64_t seed = 1;
  std::optional<double> tol;
  std::optional<int> max_iter;
  std::string output;
  std::string format = "json";
  bool serial = false;
};

SolverConfig make_config(const Globals& g, double default_tol = SolverConfig{}.gap_tolerance) {
  SolverConfig c;
  c.gap_tolerance = g.tol.value_or(default_tol);
  if (g.max_iter) c.max_iterations = *g.max_iter;
  c.parallel = !g.serial;
  c.validate();
  return c;
}

class Report {
 public:
  Report(std::string command, const Globals& g) : globals_(g), start_(Clock::now()) {
    json_["schema"] = kSchemaVersion;
    json_["command"] = std::move(command);
    json_["version"] = library_version();
  }
  Json& operator[](const char* key) { return json_[key]; }

  void solve_fields(const SolveResult& r) {
    json_["status"] = to_string(r.status);
    json_["objective"] = r.objective_value;
    json_["solve"] = solve_result_json(r);
  }

  int emit(int code) {
    json_["exit_code"] = code;
    json_["timing"] = {
        {"wall_seconds", std::chrono::duration<double>(Clock::now() - start_).count()}};
    const std::string text = json_.dump(2) + "\n";
    if (globals_.output.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(globals_.output, std::ios::binary);
      if (!out) {
        std::cerr << "error: cannot write " << globals_.output << "\n";
        return kError;
      }
      out << text;
      std::cout << json_["command"].get<std::string>() << ": "
                << (json_.contains("status") ? json_["status"].get<std::string>() : "done")
                << ", report written to " << globals_.output << "\n";
    }
    return code;
  }

 private:
  using Clock = std::chrono::steady_clock;
  Json json_;
  const Globals& globals_;
  Clock::time_point start_;
};

void check_alpha(double alpha) {
  if (!(alpha >= 0.5 && alpha <= 2.0) || alpha == 1.0)
    throw DomainError("alpha must lie in [1/2, 1) or (1, 2]");
}

void check_n(int n, int lo, int hi) {
  if (n < lo || n > hi)
    throw DomainError("n must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

Matrix unit_trace(const Matrix& x) { return x / x.trace().real(); }

// ---------------------------------------------------------------------------

struct MutualInfoArgs {
  int n = 2;
  double alpha = 0.75;
  std::string state = "random";
};

int run_mutual_info(const MutualInfoArgs& a, const Globals& g) {
  check_n(a.n, 2, 8);
  check_alpha(a.alpha);
  Report report("mutual-info", g);
  report["seed"] = g.seed;
  report["arguments"] = {{"n", a.n}, {"alpha", a.alpha}, {"state", a.state}};
  const SolverConfig cfg = make_config(g);
  report["config"] = config_json(cfg);

  Rng rng(g.seed);
  Matrix state;
  std::optional<Matrix> sigma;
  if (a.state == "random") {
    state = random_bipartite_state(rng, a.n);
  } else if (a.state == "mixed") {
    state = identity(a.n * a.n) / double(a.n * a.n);
  } else {
    const Matrix rho = unit_trace(random_positive_definite(rng, a.n));
    sigma = unit_trace(random_positive_definite(rng, a.n));
    state = kron(rho, *sigma);
  }

  const MutualInfoResult r = solve_mutual_info(state, a.n, a.alpha, cfg);
  report.solve_fields(r.solve);
  // Hypograph objective is -Ψ (maximized), epigraph objective is Ψ.
  const double psi_from_objective = a.alpha < 1.0 ? -r.solve.objective_value : r.solve.objective_value;
  Json result = {{"divergence", r.divergence},
                 {"psi", r.psi},
                 {"psi_objective_mismatch", std::abs(psi_from_objective - r.psi)},
                 {"fixed_point_residual", r.residual},
                 {"X", matrix_json(r.X)}};
  if (sigma) result["distance_to_sigma"] = (r.X - *sigma).norm();
  report["residuals"] = {{"gap_bound", r.solve.gap_bound}, {"fixed_point", r.residual}};
  report["result"] = result;
  return report.emit(exit_code(r.solve.status));
}

struct RateDistortionArgs {
  int n = 2;
  double delta = 0.25;
  double alpha = 0.75;
  std::string export_path;
};

int run_rate_distortion(const RateDistortionArgs& a, const Globals& g) {
  check_n(a.n, 2, 4);
  check_alpha(a.alpha);
  if (!(a.delta >= 0.0 && a.delta <= 1.0)) throw DomainError("delta must lie in [0, 1]");
  const ConicProblem problem = rate_distortion_problem(a.n, a.delta, a.alpha);
  if (!a.export_path.empty()) save_problem(a.export_path, problem);

  Report report("rate-distortion", g);
  report["arguments"] = {{"n", a.n}, {"delta", a.delta}, {"alpha", a.alpha}};
  const SolverConfig cfg = make_config(g, rate_distortion_gap_tolerance(a.alpha));
  report["config"] = config_json(cfg);
  const SolveResult s = solve(problem, cfg);
  const RateDistortionResult r = rate_distortion_result(a.n, a.delta, a.alpha, s);
  report.solve_fields(s);
  if (s.x.size() == problem.dim())
    report["residuals"] = kkt_json(kkt_residuals(problem, s.x, s.mu));
  report["result"] = {{"value", r.value},
                      {"closed_form", r.closed_form},
                      {"distance_to_closed_form", std::abs(r.value - r.closed_form)},
                      {"X", matrix_json(r.X)}};
  if (!a.export_path.empty()) report["exported_problem"] = a.export_path;
  return report.emit(exit_code(s.status));
}

struct FidelityArgs {
  int n = 3;
  int trials = 10;
};

int run_fidelity(const FidelityArgs& a, const Globals& g) {
  check_n(a.n, 1, 8);
  if (a.trials < 1) throw DomainError("trials must be positive");
  Report report("fidelity-check", g);
  report["seed"] = g.seed;
  report["arguments"] = {{"n", a.n}, {"trials", a.trials}};
  const SolverConfig cfg = make_config(g);
  report["config"] = config_json(cfg);

  Json trials = Json::array();
  double max_error = 0.0, max_gap = 0.0;
  int code = kOk;
  for (int k = 0; k < a.trials; ++k) {
    Rng rng = Rng::stream(g.seed, static_cast<std::uint64_t>(k));
    const Matrix x = random_positive_definite(rng, a.n);
    const Matrix y = random_positive_definite(rng, a.n);
    const FidelityResult r = fidelity_check(x, y, cfg);
    const double err = std::abs(r.sdp - r.direct);
    max_error = std::max(max_error, err);
    max_gap = std::max(max_gap, r.solve.gap_bound);
    code = worst(code, exit_code(r.solve.status));
    trials.push_back({{"status", to_string(r.solve.status)},
                      {"sdp", r.sdp},
                      {"direct", r.direct},
                      {"error", err},
                      {"iterations", r.solve.iterations}});
  }
  report["status"] = code == kOk ? "optimal" : "failed";
  report["residuals"] = {{"max_gap_bound", max_gap}};
  report["result"] = {{"max_abs_error", max_error}, {"trials", trials}};
  return report.emit(code);
}

struct VerifyArgs {
  std::string suite = "all";
};

int run_verify(const VerifyArgs& a, const Globals& g) {
  Report report("verify", g);
  report["seed"] = g.seed;
  report["arguments"] = {{"suite", a.suite}, {"parallel", !g.serial}};
  const auto reports = run_suite(a.suite, g.seed, !g.serial);
  Json items = Json::array();
  for (const auto& r : reports) items.push_back(verification_json(r));
  const bool ok = all_passed(reports);
  report["status"] = ok ? "passed" : "failed";
  report["result"] = {{"passed", ok}, {"reports", items}};
  return report.emit(ok ? kOk : kError);
}

struct SolveArgs {
  std::string path;
  bool phase1 = false;
};

int run_solve(const SolveArgs& a, const Globals& g) {
  ConicProblem problem;
  try {
    problem = load_problem(a.path);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParseError;
  }
  if (!problem.start && !a.phase1) {
    std::cerr << "parse error: " << a.path << ": no \"start\" in the file; pass --phase1\n";
    return kParseError;
  }
  Report report("solve", g);
  report["arguments"] = {{"problem", a.path}, {"phase1", a.phase1}};
  const SolverConfig cfg = make_config(g);
  report["config"] = config_json(cfg);
  SolveResult s;
  try {
    s = solve(problem, cfg);
  } catch (const DomainError& e) {
    std::cerr << "parse error: " << a.path << ": " << e.what() << "\n";
    return kParseError;
  } catch (const DimensionError& e) {
    std::cerr << "parse error: " << a.path << ": " << e.what() << "\n";
    return kParseError;
  }
  report.solve_fields(s);
  if (s.x.size() == problem.dim()) {
    report["residuals"] = kkt_json(kkt_residuals(problem, s.x, s.mu));
    Json x = Json::array();
    for (Eigen::Index i = 0; i < s.x.size(); ++i) x.push_back(s.x[i]);
    report["result"] = {{"x", x}};
  }
  return report.emit(exit_code(s.status));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sandwiched Rényi entropy cones: experiments, verification and a conic solver"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", library_version());

  Globals g;
  app.add_option("--seed", g.seed, "Seed for randomized commands")->capture_default_str();
  app.add_option("--tol", g.tol, "Gap tolerance (defaults per command)")->check(CLI::PositiveNumber);
  app.add_option("--max-iter", g.max_iter, "Iteration limit")->check(CLI::PositiveNumber);
  app.add_option("--output", g.output, "Write the report to this path instead of stdout");
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"json"}))->capture_default_str();
  app.add_flag("--serial", g.serial, "Disable the OpenMP kernels");

  MutualInfoArgs mi;
  auto* mi_cmd = app.add_subcommand("mutual-info", "Sandwiched Rényi mutual information of a bipartite state");
  mi_cmd->add_option("-n,--n", mi.n, "Local dimension")->capture_default_str();
  mi_cmd->add_option("--alpha", mi.alpha, "Order α")->capture_default_str();
  mi_cmd->add_option("--state", mi.state, "random, mixed (I/n²) or product (ρ ⊗ σ)")
      ->check(CLI::IsMember({"random", "mixed", "product"}))
      ->capture_default_str();

  RateDistortionArgs rd;
  auto* rd_cmd = app.add_subcommand("rate-distortion", "Entanglement-assisted rate distortion of the maximally entangled state");
  rd_cmd->add_option("-n,--n", rd.n, "Local dimension")->capture_default_str();
  rd_cmd->add_option("--delta", rd.delta, "Distortion level")->capture_default_str();
  rd_cmd->add_option("--alpha", rd.alpha, "Order α")->capture_default_str();
  rd_cmd->add_option("--export-problem", rd.export_path, "Also write the conic problem to this file");

  FidelityArgs fd;
  auto* fd_cmd = app.add_subcommand("fidelity-check", "SDP fidelity against the direct Ψ_{1/2}");
  fd_cmd->add_option("-n,--n", fd.n, "Dimension")->capture_default_str();
  fd_cmd->add_option("--trials", fd.trials, "Random instances")->capture_default_str();

  VerifyArgs vf;
  auto* vf_cmd = app.add_subcommand("verify", "Numerical verification suites");
  vf_cmd->add_option("suite", vf.suite, "Suite name")
      ->check(CLI::IsMember(suite_names()))
      ->capture_default_str();

  SolveArgs sv;
  auto* sv_cmd = app.add_subcommand("solve", "Solve a conic problem file");
  sv_cmd->add_option("problem", sv.path, "Problem file (JSON)")->required();
  sv_cmd->add_flag("--phase1", sv.phase1, "Find a strictly feasible start when the file has none");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kError;
  }

  try {
    if (*mi_cmd) return run_mutual_info(mi, g);
    if (*rd_cmd) return run_rate_distortion(rd, g);
    if (*fd_cmd) return run_fidelity(fd, g);
    if (*vf_cmd) return run_verify(vf, g);
    if (*sv_cmd) return run_solve(sv, g);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
