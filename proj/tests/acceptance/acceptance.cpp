// Acceptance checks. `renyi_acceptance <id>` runs one check and exits nonzero
// on failure; `renyi_acceptance all` runs every check. Each check prints
// indented detail lines followed by one PASS/FAIL line.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "renyi/experiments.hpp"
#include "renyi/io.hpp"
#include "renyi/verifier.hpp"

using namespace renyi;

namespace {

constexpr std::uint64_t kSeed = 1;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string num(double v, int digits = 10) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

void detail(const std::string& line) { std::cout << "  " << line << "\n"; }

struct Outcome {
  bool passed = true;
  std::string summary;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail("violated: " + what);
    }
  }
};

SolverConfig rd_config(double alpha) {
  SolverConfig c;
  c.gap_tolerance = rate_distortion_gap_tolerance(alpha);
  return c;
}

// Verification suites: every non-informational report must pass.
Outcome suite_outcome(const std::vector<std::string>& suites,
                      const std::function<void(const VerificationReport&, Outcome&)>& extra = {}) {
  Outcome o;
  const auto t0 = Clock::now();
  int count = 0;
  for (const auto& suite : suites) {
    for (const auto& r : run_suite(suite, kSeed)) {
      ++count;
      detail((r.passed ? "ok   " : "FAIL ") + r.property_name + "  samples " +
             std::to_string(r.samples) + "  worst " + num(r.worst_violation, 4) + " / tol " +
             num(r.tolerance, 4) + (std::isfinite(r.statistic) ? "  stat " + num(r.statistic, 12) : ""));
      if (!r.informational) o.require(r.passed, r.property_name + ": " + r.worst_case_label);
      if (extra) extra(r, o);
    }
  }
  o.summary = std::to_string(count) + " reports in " + num(seconds_since(t0), 3) + " s";
  return o;
}

// ---------------------------------------------------------------------------

const std::vector<std::pair<double, double>> kTable2 = {
    {0.9, 0.0027555},   {0.99, 0.1332757}, {0.999, 0.1455750},
    {1.001, 0.1470813}, {1.01, 0.1604453}, {1.1, 0.2740472}};

Outcome rate_distortion_table() {
  Outcome o;
  double slowest = 0.0, worst = 0.0;
  for (const auto& [alpha, expected] : kTable2) {
    const auto t0 = Clock::now();
    const RateDistortionResult r = solve_rate_distortion(4, 0.25, alpha, rd_config(alpha));
    const double dt = seconds_since(t0), err = std::abs(r.value - expected);
    slowest = std::max(slowest, dt);
    worst = std::max(worst, err);
    detail("alpha " + num(alpha) + ": " + num(r.value) + " expected " + num(expected) + "  |err| " +
           num(err, 3) + "  " + num(dt, 3) + " s  " + to_string(r.solve.status));
    o.require(r.solve.status == SolveStatus::Optimal, "status at alpha " + num(alpha));
    o.require(err <= 5e-6, "value at alpha " + num(alpha) + " within 5e-6");
    o.require(dt <= 120.0, "solve time at alpha " + num(alpha));
  }
  o.summary = "max |err| " + num(worst, 3) + ", slowest solve " + num(slowest, 3) + " s";
  return o;
}

Outcome closed_form_bracketing() {
  Outcome o;
  const double closed = rate_distortion_closed_form(4, 0.25);
  const std::vector<double> grid = {0.9, 0.99, 0.999, 0.9999, 1.0001, 1.001, 1.01, 1.1};
  std::vector<double> values;
  for (double alpha : grid) {
    const RateDistortionResult r = solve_rate_distortion(4, 0.25, alpha, rd_config(alpha));
    o.require(r.solve.status == SolveStatus::Optimal, "status at alpha " + num(alpha));
    values.push_back(r.value);
    detail("alpha " + num(alpha) + ": " + num(r.value));
  }
  detail("closed form " + num(closed));
  o.require(values[3] < closed && closed < values[4], "alpha 0.9999 and 1.0001 straddle the closed form");
  for (std::size_t i = 1; i < values.size(); ++i)
    o.require(values[i] >= values[i - 1], "nondecreasing from alpha " + num(grid[i - 1]) + " to " + num(grid[i]));
  o.summary = num(values[3]) + " < " + num(closed) + " < " + num(values[4]);
  return o;
}

Outcome closed_form_boundary() {
  Outcome o;
  double worst = 0.0;
  for (int n : {2, 3, 4}) {
    const double edge = 1.0 - 1.0 / (double(n) * n);
    for (double delta : {edge, 0.5 * (edge + 1.0)}) {
      for (double alpha : {0.75, 1.5}) {
        const RateDistortionResult r = solve_rate_distortion(n, delta, alpha, rd_config(alpha));
        worst = std::max(worst, std::abs(r.value));
        detail("n " + std::to_string(n) + " delta " + num(delta, 6) + " alpha " + num(alpha) + ": " +
               num(r.value) + " (closed form " + num(r.closed_form) + ", -log n " +
               num(-std::log(double(n))) + ")  " + to_string(r.solve.status));
        o.require(r.solve.status == SolveStatus::Optimal, "status");
        o.require(std::abs(r.value) <= 1e-6, "value within 1e-6 of 0");
      }
    }
  }
  o.summary = "max |value| " + num(worst, 6);
  return o;
}

Outcome mutual_info_fixed_point() {
  Outcome o;
  double worst = 0.0, slowest = 0.0;
  for (int n : {4, 8})
    for (double alpha : {0.75, 1.5})
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Rng rng(seed);
        const Matrix a = random_bipartite_state(rng, n);
        const auto t0 = Clock::now();
        const MutualInfoResult r = solve_mutual_info(a, n, alpha, SolverConfig{});
        const double dt = seconds_since(t0);
        slowest = std::max(slowest, dt);
        worst = std::max(worst, r.residual);
        detail("n " + std::to_string(n) + " alpha " + num(alpha) + " seed " + std::to_string(seed) +
               ": D " + num(r.divergence) + "  residual " + num(r.residual, 3) + "  " + num(dt, 3) +
               " s  " + to_string(r.solve.status));
        o.require(r.solve.status == SolveStatus::Optimal, "status");
        o.require(r.residual <= 1e-6, "fixed-point residual within 1e-6");
      }
  o.summary = "max residual " + num(worst, 3) + ", slowest solve " + num(slowest, 3) + " s";
  return o;
}

Outcome fidelity_cross_check() {
  Outcome o;
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const int n = 1 + k % 8;
    Rng rng = Rng::stream(kSeed, static_cast<std::uint64_t>(k));
    const Matrix x = random_positive_definite(rng, n);
    const Matrix y = random_positive_definite(rng, n);
    const FidelityResult r = fidelity_check(x, y, SolverConfig{});
    const double err = std::abs(r.sdp - r.direct);
    worst = std::max(worst, err);
    detail("n " + std::to_string(n) + ": sdp " + num(r.sdp, 12) + " direct " + num(r.direct, 12) +
           "  |diff| " + num(err, 3));
    o.require(r.solve.status == SolveStatus::Optimal, "status");
    o.require(err <= 1e-6, "agreement within 1e-6");
  }
  o.summary = "max |SDP - direct| " + num(worst, 3);
  return o;
}

Outcome self_concordance() {
  const auto t0 = Clock::now();
  Outcome o = suite_outcome({"self-concordance"}, [](const VerificationReport& r, Outcome& out) {
    out.require(r.samples >= 1000, r.property_name + ": at least 1000 samples");
  });
  o.require(seconds_since(t0) <= 600.0, "runtime within 10 minutes");
  return o;
}

Outcome barrier_parameter() {
  return suite_outcome({"barrier-parameter"}, [](const VerificationReport& r, Outcome& out) {
    out.require(r.samples >= 1000, r.property_name + ": at least 1000 samples");
  });
}

Outcome log_homogeneity() { return suite_outcome({"log-homogeneity"}); }

Outcome compatibility() {
  return suite_outcome({"compatibility", "scalar-alpha-gt2"});
}

Outcome operator_lines() {
  return suite_outcome({"operator-lines"}, [](const VerificationReport& r, Outcome& out) {
    out.require(r.samples >= 100, r.property_name + ": at least 100 instances");
    out.require(r.statistic == 0.0, r.property_name + ": midpoint and Hansen-Tomiyama agree");
  });
}

Outcome kron_identity() { return suite_outcome({"kron-identity"}); }

Outcome derivative_consistency() {
  return suite_outcome({"derivatives"}, [](const VerificationReport& r, Outcome& out) {
    out.require(r.samples >= 50, r.property_name + ": at least 50 instances");
  });
}

// ---------------------------------------------------------------------------
// CLI checks

namespace fs = std::filesystem;

int run(const std::string& args) {
  const std::string cmd = std::string(RENYI_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Json read_json(const fs::path& p) {
  std::ifstream in(p);
  return Json::parse(in);
}

fs::path workdir() {
  const fs::path d = fs::path(RENYI_ACCEPTANCE_WORKDIR) / "acceptance_work";
  fs::create_directories(d);
  return d;
}

Outcome cli_round_trip() {
  Outcome o;
  const fs::path d = workdir();
  const fs::path problem = d / "rd_problem.json", rd = d / "rd_report.json", sv = d / "solve_report.json";
  double worst = 0.0;
  for (double alpha : {0.75, 1.25}) {
    const std::string a = num(alpha, 17);
    const int c1 = run("rate-distortion -n 2 --delta 0.2 --alpha " + a + " --export-problem " +
                       problem.string() + " --output " + rd.string());
    o.require(c1 == 0, "rate-distortion exit code 0");
    if (c1 != 0) continue;
    const Json r1 = read_json(rd);
    const double tol = r1["config"]["gap_tolerance"].get<double>();
    const int c2 = run("solve " + problem.string() + " --tol " + num(tol, 17) + " --output " + sv.string());
    o.require(c2 == 0, "solve exit code 0");
    if (c2 != 0) continue;
    const Json r2 = read_json(sv);
    const double v1 = r1["objective"].get<double>(), v2 = r2["objective"].get<double>();
    worst = std::max(worst, std::abs(v1 - v2));
    detail("alpha " + a + ": rate-distortion objective " + num(v1, 17) + ", re-solved " + num(v2, 17));
    o.require(std::abs(v1 - v2) <= 1e-9, "re-solved objective within 1e-9");
  }
  o.summary = "max |difference| " + num(worst, 3);
  return o;
}

Outcome cli_exit_codes() {
  Outcome o;
  const fs::path d = workdir();
  const auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream(d / name) << text;
    return (d / name).string();
  };
  const std::string lp = write("lp.json",
                               R"({"schema": 1, "objective": [1], "A": {"rows": [0], "cols": [0], "vals": [1]},)"
                               R"( "b": [1], "cones": [{"kind": "nonneg", "n": 1}], "start": [1]})");
  const std::string bad = write("malformed.json", "{\"schema\": 1,\n \"objective\": [1,]}");
  const std::string infeasible = write(
      "infeasible.json",
      R"({"schema": 1, "objective": [1], "A": {"rows": [0], "cols": [0], "vals": [1]},)"
      R"( "b": [-1], "cones": [{"kind": "nonneg", "n": 1}]})");
  const fs::path out = d / "lp_report.json";

  const int lp_code = run("solve " + lp + " --output " + out.string());
  o.require(lp_code == 0, "LP toy exits 0");
  if (lp_code == 0) {
    const double v = read_json(out)["objective"].get<double>();
    detail("LP toy objective " + num(v, 17));
    o.require(std::abs(v - 1.0) <= 1e-8, "LP toy value 1");
  }
  const int bad_code = run("solve " + bad);
  detail("malformed JSON exit code " + std::to_string(bad_code));
  o.require(bad_code == 4, "malformed JSON exits 4");
  const int inf_code = run("solve " + infeasible + " --phase1");
  detail("infeasible toy exit code " + std::to_string(inf_code));
  o.require(inf_code == 5, "infeasible toy exits 5");
  o.summary = "exit codes " + std::to_string(lp_code) + ", " + std::to_string(bad_code) + ", " +
              std::to_string(inf_code);
  return o;
}

struct Check {
  std::string id;
  std::string title;
  std::function<Outcome()> run;
};

const std::vector<Check>& checks() {
  static const std::vector<Check> all = {
      {"1", "rate-distortion regression against the reference table", rate_distortion_table},
      {"2", "closed-form bracketing and monotonicity in alpha", closed_form_bracketing},
      {"3", "closed-form boundary value at saturated distortion", closed_form_boundary},
      {"4", "mutual-information fixed point", mutual_info_fixed_point},
      {"5", "fidelity SDP against direct evaluation", fidelity_cross_check},
      {"6", "self-concordance suite", self_concordance},
      {"7", "barrier-parameter suite", barrier_parameter},
      {"8", "logarithmic homogeneity", log_homogeneity},
      {"9", "compatibility suites", compatibility},
      {"10", "operator concavity along lines", operator_lines},
      {"11", "Kronecker perspective identity", kron_identity},
      {"12", "derivative consistency", derivative_consistency},
      {"cli-round-trip", "exported problem re-solves to the same value", cli_round_trip},
      {"cli-exit-codes", "solve exit codes", cli_exit_codes},
  };
  return all;
}

bool run_check(const Check& c) {
  std::cout << "criterion " << c.id << ": " << c.title << "\n";
  Outcome o;
  try {
    o = c.run();
  } catch (const std::exception& e) {
    o.passed = false;
    o.summary = std::string("exception: ") + e.what();
  }
  std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " ("
            << o.summary << ")\n"
            << std::flush;
  return o.passed;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: renyi_acceptance <id | all>\n";
    return 2;
  }
  const std::string id = argv[1];
  bool ok = true, found = false;
  for (const auto& c : checks()) {
    if (id == "all" || id == c.id) {
      found = true;
      ok = run_check(c) && ok;
    }
  }
  if (!found) {
    std::cerr << "unknown check " << id << "\n";
    return 2;
  }
  return ok ? 0 : 1;
}
