#pragma once

#include <memory>
#include <optional>
#include <string>

#include "renyi/hermitian.hpp"
#include "renyi/trace_fn.hpp"

namespace renyi {

using Vector = Eigen::VectorXd;

enum class ConeType { NonNeg, PSD, RenyiHypo, RenyiEpi, RenyiPerspEpi };

/// One cone of the catalogue.
///   NonNeg(k)            x ∈ R^k_+
///   PSD(n, field)        X ⪰ 0
///   RenyiHypo(n, α)      Ψ_α(X, Y) ≥ t,           α ∈ [1/2, 1]
///   RenyiEpi(n, α)       Ψ_α(X, Y) ≤ t,           α ∈ [1, 2]
///   RenyiPerspEpi(n, α)  u·log(Ψ_α(X, Y)/u)/(α - 1) ≤ t,  α ∈ [1/2, 1)
/// Vectorized layouts: NonNeg entries; PSD svec(X); hypo/epi
/// [t, svec X, svec Y]; perspective [t, u, svec X, svec Y].
struct ConeKind {
  ConeType type = ConeType::NonNeg;
  int n = 1;
  double alpha = 0.0;
  Field field = Field::Complex;

  static ConeKind nonneg(int k);
  static ConeKind psd(int n, Field field = Field::Complex);
  static ConeKind renyi_hypo(int n, double alpha, Field field = Field::Complex);
  static ConeKind renyi_epi(int n, double alpha, Field field = Field::Complex);
  static ConeKind renyi_persp_epi(int n, double alpha, Field field = Field::Complex);

  bool is_renyi() const { return type == ConeType::RenyiHypo || type == ConeType::RenyiEpi ||
                                 type == ConeType::RenyiPerspEpi; }
  /// Length of the vectorized point.
  int dim() const;
  /// Barrier parameter: k, n, 1 + 2n or 2 + 2n.
  double nu() const;
  /// e.g. "renyi_hypo(n=4, alpha=0.75)".
  std::string name() const;
  /// An interior point: ones, I, (0, I, I), (n + 1, I, I) or (1, 1, I, I).
  Vector interior_point() const;
  /// Throws DomainError/DimensionError for invalid parameters.
  void validate() const;

  bool operator==(const ConeKind&) const = default;
};

/// A point of one cone in structured form. Unused fields stay empty.
struct ConePoint {
  double t = 0.0;
  double u = 0.0;
  Matrix X;
  Matrix Y;
  Vector entries;  // NonNeg

  static ConePoint renyi(double t, Matrix x, Matrix y);
  static ConePoint perspective(double t, double u, Matrix x, Matrix y);
  static ConePoint nonneg(Vector v);
  static ConePoint psd(Matrix x);
};

/// Structured point <-> vectorized layout.
Vector pack(const ConeKind& cone, const ConePoint& p);
ConePoint unpack(const ConeKind& cone, const Vector& v);

/// Strict membership with margin: matrices ≻ margin·I, u > margin and
/// slack > margin. Throws DimensionError on shape mismatch.
bool interior_membership(const ConeKind& cone, const Vector& v, double margin = 0.0);
bool interior_membership(const ConeKind& cone, const ConePoint& p, double margin = 0.0);

/// First three directional derivatives of the barrier along one direction.
struct BarrierDirectional {
  double first = 0.0;
  double second = 0.0;
  double third = 0.0;
};

/// Barrier oracles at one interior point, in the vectorized layout: the
/// gradient and Hessian products are returned as vectors that pair with
/// directions through the Euclidean inner product. Immutable after
/// construction, so Hessian products may run concurrently.
class BarrierEval {
 public:
  /// Throws DomainError if the point is not interior.
  BarrierEval(const ConeKind& cone, const Vector& v);

  const ConeKind& cone() const { return cone_; }
  double value() const { return value_; }
  const Vector& gradient() const { return gradient_; }
  /// Slack s of the epigraph/hypograph constraint (Rényi cones only).
  double slack() const { return slack_; }

  Vector hessian_apply(const Vector& d) const;
  /// H⁻¹ rhs via a dense factorization (LLT, falling back to LDLT with
  /// iterative refinement). Throws NumericalError when both fail.
  Vector hessian_solve(const Vector& rhs) const;
  /// Dense Hessian in the vectorized layout.
  RealMatrix hessian_matrix() const;
  BarrierDirectional directional(const Vector& d) const;
  double third_directional(const Vector& d) const { return directional(d).third; }

 private:
  Vector slack_hessian_apply(const Vector& d) const;
  void unpack_direction(const Vector& d, double& dt, double& du, Matrix& h, Matrix& v) const;

  ConeKind cone_;
  int mat_dim_ = 0;  // svec length of one matrix block
  Vector x_;
  Matrix X_, Y_, Xinv_, Yinv_;
  double t_ = 0.0, u_ = 0.0;
  std::optional<PsiEvaluator> psi_;
  double slack_ = 0.0;
  Vector slack_grad_;  // gradient of the slack s
  double value_ = 0.0;
  Vector gradient_;
};

double barrier_value(const ConeKind& cone, const ConePoint& p);
ConePoint barrier_gradient(const ConeKind& cone, const ConePoint& p);
ConePoint barrier_hessian_apply(const ConeKind& cone, const ConePoint& p, const ConePoint& d);
ConePoint barrier_hessian_solve(const ConeKind& cone, const ConePoint& p, const ConePoint& rhs);
double barrier_third_directional(const ConeKind& cone, const ConePoint& p, const ConePoint& d);
double barrier_parameter(const ConeKind& cone);

}  // namespace renyi
