#pragma once

#include <array>
#include <optional>
#include <utility>

#include "renyi/hermitian.hpp"
#include "renyi/scalar_function.hpp"

namespace renyi {

/// Parameters of Psi_alpha(X, Y) = tr[(Y^b X Y^b)^alpha], b = (1 - alpha)/(2 alpha).
/// Written as tr[g(h(Y)^{1/2} X h(Y)^{1/2})] with g = x^alpha and
/// h = x^{(1-alpha)/alpha}; `sandwich` is h^{1/2}.
struct TraceFnParams {
  double alpha = 0.5;
  ScalarFunction g;
  ScalarFunction h;
  ScalarFunction gprime;
  ScalarFunction gtilde;
  ScalarFunction sandwich;

  /// alpha in [1/2, 2]; anything else throws DomainError.
  explicit TraceFnParams(double alpha);
  /// Any alpha > 0. Used only by the conjecture exploration in the verifier.
  static TraceFnParams unrestricted(double alpha);

  double sandwich_exponent() const { return (1.0 - alpha) / (2.0 * alpha); }

 private:
  TraceFnParams(double alpha, bool checked);
};

/// Line direction (H, V) at a base point (X, Y).
struct DirectionPair {
  Matrix H;
  Matrix V;
};

/// A pair of Hermitian matrices in the dual of (X, Y), e.g. a gradient.
struct MatrixPair {
  Matrix X;
  Matrix Y;
};

/// First three derivatives of t -> Psi(X + tH, Y + tV) at t = 0.
struct DirectionalDerivatives {
  double first = 0.0;
  double second = 0.0;
  double third = 0.0;
};

/// Psi_alpha and its derivatives at one point. The constructor performs the
/// two eigendecompositions (Y and the sandwich M = Y^b X Y^b) and the
/// divided-difference tables; all queries reuse them. Immutable afterwards,
/// so one evaluator can serve concurrent Hessian-vector products.
class PsiEvaluator {
 public:
  /// Requires X, Y Hermitian with smallest eigenvalue > 1e-12·(largest).
  PsiEvaluator(const TraceFnParams& params, const Matrix& x, const Matrix& y);

  int dim() const { return n_; }
  const TraceFnParams& params() const { return params_; }
  double value() const { return value_; }
  const MatrixPair& gradient() const { return gradient_; }

  /// D^2 Psi [d, ·] as a pair of Hermitian matrices.
  MatrixPair hessian_apply(const DirectionPair& d) const;
  /// Symmetrized D^2 Psi [d1, d2].
  double hessian_bilinear(const DirectionPair& d1, const DirectionPair& d2) const;
  DirectionalDerivatives directional(const DirectionPair& d) const;
  double third_directional(const DirectionPair& d) const { return directional(d).third; }

 private:
  void check_direction(const DirectionPair& d) const;

  TraceFnParams params_;
  int n_ = 0;
  Matrix x_;
  EigenDecomposition eig_y_;
  std::optional<DividedDifferences> k_dd_;   // sandwich function on spec(Y)
  Matrix p_;                 // Y^b
  Matrix xp_;                // X P
  EigenDecomposition eig_m_;
  std::optional<DividedDifferences> gp_dd_;  // g' on spec(M)
  Matrix gp_;                // g'(M)
  Matrix pg_;                // P g'(M)
  Matrix w_hat_;             // U_Y* (X P G + G P X) U_Y
  double value_ = 0.0;
  MatrixPair gradient_;
};

/// Smallest eigenvalue must exceed this multiple of the spectral scale.
inline constexpr double kPositivityFloor = 1e-12;

double psi_value(const TraceFnParams& params, const Matrix& x, const Matrix& y);
MatrixPair psi_gradient(const TraceFnParams& params, const Matrix& x, const Matrix& y);
double psi_hessian_bilinear(const TraceFnParams& params, const Matrix& x, const Matrix& y,
                            const DirectionPair& d1, const DirectionPair& d2);
double psi_third_directional(const TraceFnParams& params, const Matrix& x, const Matrix& y,
                             const DirectionPair& d);

/// log(Psi_alpha)/(alpha - 1); alpha = 1 throws DomainError.
double d_alpha_value(const TraceFnParams& params, const Matrix& x, const Matrix& y);
/// u·log(Psi_alpha(X, Y)/u)/(alpha - 1) = u·D_alpha(X/u, Y/u), alpha in [1/2, 1).
double d_alpha_perspective(const TraceFnParams& params, double u, const Matrix& x,
                           const Matrix& y);

/// X^{1/2} g(X^{-1/2} Y X^{-1/2}) X^{1/2}.
Matrix nc_perspective(const ScalarFunction& g, const Matrix& x, const Matrix& y);
/// P_g(X, P_h(Y, Z)).
Matrix composed_perspective(const ScalarFunction& g, const ScalarFunction& h, const Matrix& x,
                            const Matrix& y, const Matrix& z);

/// Throws DomainError unless X is Hermitian with smallest eigenvalue above
/// kPositivityFloor times its largest. `what` names the argument.
void require_positive_definite(const Matrix& x, const char* what);

}  // namespace renyi
