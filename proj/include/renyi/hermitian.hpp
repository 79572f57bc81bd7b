#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "renyi/scalar_function.hpp"

namespace renyi {

using Complex = std::complex<double>;
/// Dense complex matrix. Functions documented as taking Hermitian input
/// assume exact conjugate symmetry; route external data through hermitize().
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// Relative asymmetry above which checked_hermitian() rejects its input.
inline constexpr double kHermitianTolerance = 1e-8;

/// (M + M*)/2. Throws DimensionError for non-square input and DomainError for
/// non-finite entries.
Matrix hermitize(const Matrix& m);

/// hermitize() for externally supplied data: additionally throws DomainError
/// when the relative asymmetry exceeds `tolerance`.
Matrix checked_hermitian(const Matrix& m, double tolerance = kHermitianTolerance);

/// Relative Frobenius asymmetry ||M - M*|| / max(1, ||M||).
double asymmetry(const Matrix& m);

Matrix identity(int n);

/// Spectral decomposition X = U diag(eigenvalues) U*, eigenvalues ascending.
struct EigenDecomposition {
  RealVector eigenvalues;
  Matrix unitary;

  int dim() const { return static_cast<int>(eigenvalues.size()); }
  /// U diag(values) U*.
  Matrix reconstruct(const RealVector& values) const;
  Matrix reconstruct() const { return reconstruct(eigenvalues); }
  /// U* A U.
  Matrix to_eigenbasis(const Matrix& a) const;
  /// U A U*.
  Matrix from_eigenbasis(const Matrix& a) const;
};

/// Self-adjoint eigensolver (Householder tridiagonalization + implicit QL).
/// Deterministic for a fixed input and platform; bit-exactness across
/// platforms is not provided. Throws NumericalError if the QL iteration cap is
/// reached.
EigenDecomposition eigh(const Matrix& x);

/// g(X) = sum_i g(lambda_i) v_i v_i*. Throws DomainError when an eigenvalue is
/// outside dom g.
Matrix spectral_apply(const ScalarFunction& g, const Matrix& x);
Matrix spectral_apply(const ScalarFunction& g, const EigenDecomposition& eig);

/// Fréchet derivatives of a spectral function, evaluated in the eigenbasis of
/// X through divided differences. For order 1 `directions` holds one matrix,
/// for order 2 two matrices (the result is D^2 g(X)[H1, H2], symmetric in the
/// two directions).
Matrix frechet_derivative(const ScalarFunction& g, const Matrix& x,
                          const std::vector<Matrix>& directions, int order);

/// Divided-difference tables of one scalar function on one spectrum. The first
/// table is always built; the second-order tensor only when max_order >= 2
/// (otherwise second() evaluates on demand). Immutable after construction.
class DividedDifferences {
 public:
  DividedDifferences(ScalarFunction f, RealVector eigenvalues, int max_order = 1);

  int dim() const { return static_cast<int>(lambda_.size()); }
  const RealVector& eigenvalues() const { return lambda_; }
  const ScalarFunction& function() const { return f_; }

  /// f[lambda_i, lambda_j].
  const RealMatrix& first() const { return first_; }
  /// f[lambda_i, lambda_k, lambda_j].
  double second(int i, int k, int j) const;
  /// f[lambda_i, lambda_k, lambda_l, lambda_j].
  double third(int i, int k, int l, int j) const;

  /// Eigenbasis form of Df(X)[A]: first() ∘ A.
  Matrix first_order(const Matrix& a_hat) const;
  /// Eigenbasis form of D^2 f(X)[A, B].
  Matrix second_order(const Matrix& a_hat, const Matrix& b_hat) const;
  /// Eigenbasis form of D^3 f(X)[A, A, A].
  Matrix third_order(const Matrix& a_hat) const;

 private:
  ScalarFunction f_;
  RealVector lambda_;
  RealMatrix first_;
  std::vector<double> second_;
};

/// Kronecker product; rows of the result are indexed by i*m + k.
Matrix kron(const Matrix& x, const Matrix& y);

/// Block-diagonal [[X, 0], [0, Y]].
Matrix direct_sum(const Matrix& x, const Matrix& y);

/// Partial trace on C^n ⊗ C^m. subsystem 1 traces out the first factor
/// (result m×m, tr1(X⊗Y) = tr[X] Y); subsystem 2 the second (result n×n,
/// tr2(X⊗Y) = tr[Y] X).
Matrix partial_trace(const Matrix& m, int subsystem, int n, int k);

/// Real trace inner product Re tr[A* B].
double inner(const Matrix& a, const Matrix& b);

/// Whether X ≻ margin·I.
bool is_positive_definite(const Matrix& x, double margin = 0.0);

/// f[a, b, c] and f[a, b, c, d]; symmetric in their arguments. Nearly
/// coalescent arguments fall back to the Taylor value at their mean.
double divided_difference(const ScalarFunction& f, double a, double b, double c);
double divided_difference(const ScalarFunction& f, double a, double b, double c, double d);

/// Scalar field of a vectorized Hermitian block.
enum class Field { Real, Complex };

/// Length of svec for an n×n matrix: n(n+1)/2 (real) or n² (complex).
int svec_size(int n, Field field);

/// Column-major upper triangle: for j = 0..n-1 and i = 0..j, the diagonal
/// entry Re X_jj, or √2·Re X_ij followed (complex field only) by √2·Im X_ij.
/// The Euclidean inner product of two svecs equals Re tr[A B].
void svec(const Matrix& x, Field field, double* out);
Eigen::VectorXd svec(const Matrix& x, Field field);
Matrix smat(const double* v, int n, Field field);
Matrix smat(const Eigen::VectorXd& v, int n, Field field);

}  // namespace renyi
