#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "renyi/barrier.hpp"
#include "renyi/random.hpp"
#include "renyi/trace_fn.hpp"

namespace renyi {

/// Sampling plan for one check. Sample k draws from Rng::stream(seed, k), so
/// serial and parallel sweeps produce identical reports.
struct SampleSpec {
  std::uint64_t seed = 1;
  int count = 1000;
  std::vector<int> dims = {2};
  std::vector<double> alpha_grid = {0.75};
  double boundary_bias = 0.0;
  bool parallel = true;

  /// Throws std::invalid_argument on count < 1, empty dims or bias outside [0, 1).
  void validate() const;
};

struct VerificationReport {
  std::string property_name;
  int samples = 0;
  int resampled = 0;
  double worst_violation = -std::numeric_limits<double>::infinity();
  double tolerance = 0.0;
  /// Point (and direction) at the worst sample, in the check's own layout.
  std::vector<double> worst_case_inputs;
  std::string worst_case_label;
  /// Property-specific summary, e.g. the largest observed ratio.
  double statistic = std::numeric_limits<double>::quiet_NaN();
  /// Exploration runs are reported but never gate a suite.
  bool informational = false;
  bool passed = false;
  std::uint64_t seed = 0;
};

/// |D³F| - 2(D²F)^{3/2}, divided by (D²F)^{3/2}. statistic is the largest
/// |D³F|/(2(D²F)^{3/2}). Directions with D²F < 1e-14 are redrawn.
VerificationReport check_self_concordance(const ConeKind& cone, const SampleSpec& spec);

/// 2DF[h] - D²F[h,h] - ν at h = s·d with the maximizing scale s = DF[d]/D²F[d,d];
/// d mixes -x with a Gaussian direction and sample 0 uses d = -x exactly.
/// statistic is the largest value of 2DF[h] - D²F[h,h].
VerificationReport check_barrier_parameter(const ConeKind& cone, const SampleSpec& spec);

/// |F(λp) - F(p) + ν log λ| over the sampled points and every λ.
VerificationReport check_log_homogeneity(const ConeKind& cone, const SampleSpec& spec,
                                         const std::vector<double>& lambdas = {0.5, 3.0});

enum class CompatFamily {
  PsiConcave,      // f = Ψ_α, α ∈ [1/2, 1]
  NegPsi,          // f = -Ψ_α, α ∈ [1, 2]
  NegPerspective,  // f = -u·log(Ψ_α(X, Y)/u)/(α - 1), α ∈ [1/2, 1)
  NegPsiExplore,   // f = -Ψ_α for any α > 0, exploration only
};
std::string to_string(CompatFamily family);

/// Factors applied to the largest admissible direction.
inline const std::vector<double> kDirectionScales = {0.1, 0.5, 0.9, 0.999};

/// (D³f + 3β·D²f)/max(1, 3β|D²f|) over spec.count samples per dimension in
/// spec.dims. Directions H = θ·X^{1/2} G X^{1/2}/||G|| so that X ± H ⪰ 0
/// exactly at θ = 1, likewise for V and s = ±θu. statistic is the largest
/// -D³f/D²f, the smallest admissible 3β.
VerificationReport check_compatibility(CompatFamily family, double alpha, double beta,
                                       const SampleSpec& spec);

/// Passes iff some sample violates compatibility with the given β, i.e. β is
/// not admissible: worst_violation is minus the largest normalized violation.
VerificationReport check_compatibility_fails(CompatFamily family, double alpha, double beta,
                                             const SampleSpec& spec);

/// Scalar f(x, y) = -x^α y^{1-α}, α > 1, with closed-form partials along
/// (h, v) = (x̂x, ŷy), (x̂, ŷ) ∈ [-1, 1]². The corners of the square are always
/// included.
struct ScalarCompatibility {
  double sup_ratio = 0.0;           // max -D³f/D²f
  double argmax_xhat = 0.0, argmax_yhat = 0.0;
  double worst_violation = 0.0;     // normalized, at the given β
  int samples = 0;
};
ScalarCompatibility scalar_compatibility(double alpha, double beta, const SampleSpec& spec);
/// Three reports: compatibility at β, |sup ratio - (2α - 1)| ≤ 1e-9 with the
/// argmax at (1, -1), and failure at 0.99β.
std::vector<VerificationReport> check_scalar_compatibility(double alpha, const SampleSpec& spec);

/// Taylor coefficients f^{(k)}(t)/k!, k = 0..order, from Chebyshev
/// interpolation on [t - r, t + r] with `nodes` points.
std::vector<double> taylor_coefficients(const std::function<double(double)>& f, double t,
                                        double radius, int order, int nodes = 20);
/// [f^{(i+j)}(t)/(i+j)!], i, j = 1..m, from Taylor coefficients a_0..a_{2m}.
RealMatrix hansen_tomiyama(const std::vector<double>& taylor, int m);

/// F(t) = Ψ_α(X + tH, Y + tV) on (-1, 1), requires X ± H ⪰ 0 and Y ± V ⪰ 0.
/// (a) midpoint test on spectral lifts of size m ∈ lift_dims, (b) the smallest
/// eigenvalue of H_m(t; ∓F)/max(1, ||H_m||). Concave regime for α ≤ 1, convex
/// for α > 1. Violations are divided by their tolerances (1e-7 and 1e-6);
/// statistic counts instances where the two sub-checks disagree. Lift
/// dimensions above 3 throw DomainError.
VerificationReport check_operator_concavity_line(const TraceFnParams& params, const Matrix& x,
                                                 const Matrix& y, const DirectionPair& d,
                                                 const std::vector<int>& lift_dims,
                                                 const SampleSpec& spec);
/// spec.count random (base, direction) instances per dimension in spec.dims.
VerificationReport check_operator_lines(double alpha, const std::vector<int>& lift_dims,
                                        const SampleSpec& spec);

/// ω*Mω with ω = Σ_i e_i ⊗ e_i; maps X ⊗ conj(Y) to tr[XY].
Complex kron_contraction(const Matrix& m, int n);
/// |Φ(P_{g,h}(X⊗I, Y⊗I, I⊗conj(Y))) + Ψ_α(X, Y)|, g = -x^{1-α}, h = x^{1/α}.
/// α ∈ [1, 2], n ≤ 3.
double kron_identity_violation(double alpha, const Matrix& x, const Matrix& y);
VerificationReport check_kron_identity(double alpha, const Matrix& x, const Matrix& y);
/// spec.count random PD pairs per dimension in spec.dims and α in spec.alpha_grid.
VerificationReport check_kron_identity(const SampleSpec& spec);

/// Analytic first, second and third directional derivatives against central
/// differences (Richardson-extrapolated) of the order below, with relative
/// tolerances 1e-6, 1e-5, 1e-4. Reported violation is the largest error
/// divided by its tolerance; statistic is the largest raw relative error.
/// The first overload sweeps Ψ_α over spec.dims × spec.alpha_grid, the
/// second checks the barrier of one cone.
VerificationReport check_derivative_consistency(const SampleSpec& spec);
VerificationReport check_derivative_consistency(const ConeKind& cone, const SampleSpec& spec);

/// Suites: self-concordance, barrier-parameter, log-homogeneity,
/// compatibility, operator-lines, kron-identity, scalar-alpha-gt2,
/// derivatives, conjecture (informational) and all.
std::vector<std::string> suite_names();
std::vector<VerificationReport> run_suite(const std::string& suite, std::uint64_t seed,
                                          bool parallel = true);
/// Catalogue of cones used by the barrier suites.
std::vector<ConeKind> barrier_suite_cones();
/// True when every non-informational report passed.
bool all_passed(const std::vector<VerificationReport>& reports);

}  // namespace renyi
