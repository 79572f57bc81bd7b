#pragma once

#include <optional>

#include "renyi/random.hpp"
#include "renyi/solver.hpp"

namespace renyi {

/// Orthonormal basis (trace inner product) of the traceless Hermitian n×n
/// matrices: n² - 1 elements (complex) or n(n+1)/2 - 1 (real).
std::vector<Matrix> traceless_basis(int n, Field field);

/// A = B B*/tr[B B*] with B an n²×n² complex matrix whose real and imaginary
/// parts are uniform on [0, 1), drawn row-major as (re, im) pairs.
Matrix random_bipartite_state(Rng& rng, int n);

// ---------------------------------------------------------------------------
// Sandwiched Rényi mutual information: min D_α(A ‖ tr₂(A) ⊗ X), tr X = 1.

struct MutualInfoResult {
  SolveResult solve;
  Matrix X;
  double psi = 0.0;        // Ψ_α(A, tr₂A ⊗ X) recomputed from X
  double divergence = 0.0; // log(psi)/(α - 1)
  double residual = 0.0;   // fixed_point_residual at X
};

/// Affine form over z = (t, coordinates of X - I/n in the traceless basis)
/// with a strictly feasible z0 (X = I/n). Hypograph cone for α < 1
/// (maximize t), epigraph for α > 1 (minimize t).
AffineForm mutual_info_form(const Matrix& a, int n, double alpha, Vector& z0);
MutualInfoResult solve_mutual_info(const Matrix& a, int n, double alpha,
                                   const SolverConfig& config);

/// ||X - tr₁Z/tr Z||_F with Z = ((tr₂A ⊗ X)^b A (tr₂A ⊗ X)^b)^α, b = (1-α)/2α.
/// Throws DomainError when tr₂A ⊗ X is singular.
double fixed_point_residual(const Matrix& a, double alpha, const Matrix& x);

// ---------------------------------------------------------------------------
// Rate distortion for the maximally entangled state:
// min D_α(X ‖ I ⊗ tr₁X) s.t. tr₂X = I/n, <X, Δ> ≤ δ, X ⪰ 0.

/// log n + (1-δ) log(1-δ) + δ log(δ/(n²-1)) for δ ≤ 1 - 1/n², else 0.
double rate_distortion_closed_form(int n, double delta);
/// Distortion observable Δ = I - |Φ⟩⟨Φ|·n, |Φ⟩ = Σ_i |ii⟩/√n.
Matrix distortion_observable(int n);
/// Default gap tolerance: the value is log(Ψ)/(α-1), so Ψ must be resolved
/// to about |α-1| times the target accuracy.
double rate_distortion_gap_tolerance(double alpha);

/// Standard-form problem over [t, svec X, svec Y | w] (real field) with an
/// analytic strictly feasible start.
ConicProblem rate_distortion_problem(int n, double delta, double alpha);

struct RateDistortionResult {
  SolveResult solve;
  Matrix X;
  double value = 0.0;        // D_α(X ‖ I ⊗ tr₁X) recomputed from X
  double closed_form = 0.0;
};

/// Value extraction from a solution of rate_distortion_problem(n, ·, α).
RateDistortionResult rate_distortion_result(int n, double delta, double alpha,
                                            const SolveResult& solve);
RateDistortionResult solve_rate_distortion(int n, double delta, double alpha,
                                           const SolverConfig& config);

// ---------------------------------------------------------------------------
// Fidelity: Ψ_{1/2}(X, Y) = max Re tr Z s.t. [[X, Z], [Z*, Y]] ⪰ 0.

/// PSD(2n) problem minimizing -Re tr Z with the diagonal blocks pinned;
/// start Z = 0.
ConicProblem fidelity_problem(const Matrix& x, const Matrix& y);
struct FidelityResult {
  SolveResult solve;
  double sdp = 0.0;
  double direct = 0.0;
};
FidelityResult fidelity_check(const Matrix& x, const Matrix& y, const SolverConfig& config);

}  // namespace renyi
