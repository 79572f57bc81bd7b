#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "renyi/barrier.hpp"

namespace renyi {

/// minimize <c, x> subject to A x = b, x in cones[0] × cones[1] × ...
/// A is stored as triplets (row, col, value); duplicates are summed.
struct ConicProblem {
  Vector c;
  int rows = 0;
  std::vector<Eigen::Triplet<double>> A;
  Vector b;
  std::vector<ConeKind> cones;
  /// Optional strictly feasible start.
  std::optional<Vector> start;

  int dim() const;
  RealMatrix dense_A() const;
  /// Throws DimensionError on inconsistent bookkeeping.
  void validate() const;
};

/// Affine parametrization x = x0 + N z of the feasible affine set, with the
/// objective <c, x> = c0 + <q, z>.
struct AffineForm {
  std::vector<ConeKind> cones;
  Vector x0;
  RealMatrix N;
  Vector q;
  double c0 = 0.0;

  int dim() const { return static_cast<int>(x0.size()); }
  int free_dim() const { return static_cast<int>(N.cols()); }
  Vector point(const Vector& z) const { return x0 + N * z; }
};

struct SolverConfig {
  double gap_tolerance = 1e-8;
  int max_iterations = 200;
  double mu_reduction = 0.1;
  double line_search_backtrack = 0.8;
  double feasibility_tolerance = 1e-9;
  /// Extrapolate along the central path after each μ reduction.
  bool predictor = true;
  /// Use the OpenMP reduced-Hessian kernel (results are identical either way).
  bool parallel = true;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

enum class SolveStatus { Optimal, IterationLimit, NumericalFailure, Infeasible };
std::string to_string(SolveStatus status);

struct IterationRecord {
  int iteration = 0;
  double mu = 0.0;
  double newton_decrement = 0.0;
  double step = 0.0;
  double objective = 0.0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::NumericalFailure;
  Vector x;
  double objective_value = 0.0;
  double gap_bound = 0.0;
  double mu = 0.0;
  int iterations = 0;
  std::vector<IterationRecord> trace;
  /// Objective at each centered point, one entry per value of μ.
  std::vector<double> centered_objectives;
  std::string message;
};

/// Barrier oracles of a product cone at one point.
class ProductBarrier {
 public:
  /// Throws DomainError if any block is not interior.
  ProductBarrier(const std::vector<ConeKind>& cones, const Vector& x);

  double value() const { return value_; }
  const Vector& gradient() const { return gradient_; }
  double nu() const { return nu_; }
  /// Blocks whose segment of d is exactly zero are skipped.
  Vector hessian_apply(const Vector& d) const;
  const std::vector<BarrierEval>& blocks() const { return blocks_; }
  const std::vector<int>& offsets() const { return offsets_; }

 private:
  std::vector<BarrierEval> blocks_;
  std::vector<int> offsets_;
  double value_ = 0.0;
  double nu_ = 0.0;
  Vector gradient_;
};

double total_nu(const std::vector<ConeKind>& cones);
int total_dim(const std::vector<ConeKind>& cones);
bool interior(const std::vector<ConeKind>& cones, const Vector& x, double margin = 0.0);

/// Nᵀ H(x) N, one Hessian-vector product per column of N.
RealMatrix reduced_hessian_serial(const ProductBarrier& barrier, const RealMatrix& n);
/// Same columns distributed over OpenMP threads; bit-identical to the serial
/// kernel because each column is computed independently.
RealMatrix reduced_hessian_parallel(const ProductBarrier& barrier, const RealMatrix& n);

/// Null-space parametrization of {x : A x = b}. Throws DimensionError when A
/// is not of full row rank (QR with column pivoting, tolerance 1e-10
/// relative). The columns of N are orthonormal and x0 is the minimum-norm
/// solution.
AffineForm presolve(const ConicProblem& problem);

/// Path following from a strictly feasible z0 (x0 + N z0 interior).
SolveResult solve(const AffineForm& form, const SolverConfig& config, const Vector& z0);
/// Standard-form entry: uses problem.start when present, otherwise Phase I.
SolveResult solve(const ConicProblem& problem, const SolverConfig& config);
/// Same with an explicit start (A·start = b within the feasibility tolerance).
SolveResult solve(const ConicProblem& problem, const SolverConfig& config, const Vector& start);

/// Strictly feasible z for the affine form, from the auxiliary problem
/// min τ s.t. x0 + N z + τ e ∈ K (e an interior point). Returns nullopt when
/// the optimal τ is certified nonnegative.
std::optional<Vector> phase1(const AffineForm& form, const SolverConfig& config);
/// Strictly feasible x for the problem, or nullopt.
std::optional<Vector> phase1_start(const ConicProblem& problem, const SolverConfig& config = {});

struct KktResiduals {
  double primal = 0.0;  // ||A x - b||
  double dual = 0.0;    // ||c - s - Aᵀ y|| with s = -μ ∇F(x), y least squares
  double gap = 0.0;     // <c, x> - <b, y>
};
KktResiduals kkt_residuals(const ConicProblem& problem, const Vector& x, double mu);

}  // namespace renyi
