#include "renyi/trace_fn.hpp"

#include <cmath>
#include <sstream>

#include "renyi/errors.hpp"

namespace renyi {

namespace {

Matrix herm(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

RealVector apply(const ScalarFunction& f, const RealVector& x) {
  RealVector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = f(x[i]);
  return out;
}

double pair_inner(const MatrixPair& a, const DirectionPair& d) {
  return inner(a.X, d.H) + inner(a.Y, d.V);
}

}  // namespace

TraceFnParams::TraceFnParams(double a, bool checked)
    : alpha(a),
      g(ScalarFunction::power(a)),
      h(ScalarFunction::power((1.0 - a) / a)),
      gprime(ScalarFunction::power(a - 1.0, a)),
      gtilde(ScalarFunction::power(a, a)),
      sandwich(ScalarFunction::power((1.0 - a) / (2.0 * a))) {
  if (!std::isfinite(a) || a <= 0.0) throw DomainError("alpha must be positive");
  if (checked && (a < 0.5 || a > 2.0)) {
    std::ostringstream os;
    os << "alpha = " << a << " is outside [1/2, 2]";
    throw DomainError(os.str());
  }
}

TraceFnParams::TraceFnParams(double a) : TraceFnParams(a, true) {}

TraceFnParams TraceFnParams::unrestricted(double a) { return TraceFnParams(a, false); }

void require_positive_definite(const Matrix& x, const char* what) {
  if (x.rows() != x.cols()) throw DimensionError(std::string(what) + ": not square");
  if (!x.allFinite()) throw DomainError(std::string(what) + ": non-finite entries");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(x, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericalError(std::string(what) + ": eigenvalue iteration failed");
  const RealVector& ev = solver.eigenvalues();
  const double lo = ev[0], hi = ev[ev.size() - 1];
  if (!(lo > 0.0) || lo <= kPositivityFloor * hi) {
    std::ostringstream os;
    os << what << ": not positive definite (smallest eigenvalue " << lo << ", largest " << hi
       << ")";
    throw DomainError(os.str());
  }
}

PsiEvaluator::PsiEvaluator(const TraceFnParams& params, const Matrix& x, const Matrix& y)
    : params_(params) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw DimensionError("Psi: X and Y differ in shape");
  x_ = checked_hermitian(x);
  const Matrix yh = checked_hermitian(y);
  require_positive_definite(x_, "X");
  require_positive_definite(yh, "Y");
  n_ = static_cast<int>(x_.rows());

  eig_y_ = eigh(yh);
  k_dd_.emplace(params_.sandwich, eig_y_.eigenvalues, 2);
  p_ = eig_y_.reconstruct(apply(params_.sandwich, eig_y_.eigenvalues));
  xp_ = x_ * p_;
  eig_m_ = eigh(herm(p_ * xp_));
  if (!(eig_m_.eigenvalues[0] > 0.0))
    throw DomainError("Psi: sandwiched matrix lost positive definiteness");
  gp_dd_.emplace(params_.gprime, eig_m_.eigenvalues, 1);

  value_ = apply(params_.g, eig_m_.eigenvalues).sum();
  gp_ = eig_m_.reconstruct(apply(params_.gprime, eig_m_.eigenvalues));
  pg_ = p_ * gp_;
  gradient_.X = herm(pg_ * p_);
  const Matrix xpg = xp_ * gp_;
  w_hat_ = eig_y_.to_eigenbasis(xpg + xpg.adjoint());
  gradient_.Y = herm(eig_y_.from_eigenbasis(k_dd_->first_order(w_hat_)));
}

void PsiEvaluator::check_direction(const DirectionPair& d) const {
  if (d.H.rows() != n_ || d.H.cols() != n_ || d.V.rows() != n_ || d.V.cols() != n_)
    throw DimensionError("Psi: direction shape differs from the base point");
}

MatrixPair PsiEvaluator::hessian_apply(const DirectionPair& d) const {
  check_direction(d);
  const bool h_zero = d.H.isZero(0.0);
  if (h_zero && d.V.isZero(0.0)) return {Matrix::Zero(n_, n_), Matrix::Zero(n_, n_)};
  const Matrix v_hat = eig_y_.to_eigenbasis(d.V);
  const Matrix p1 = eig_y_.from_eigenbasis(k_dd_->first_order(v_hat));

  const Matrix p1xp = p1 * xp_;
  Matrix m1 = p1xp + p1xp.adjoint();
  if (!h_zero) m1 += p_ * d.H * p_;
  const Matrix g1 = eig_m_.from_eigenbasis(gp_dd_->first_order(eig_m_.to_eigenbasis(m1)));

  MatrixPair out;
  const Matrix p1gp = p1 * pg_.adjoint();
  out.X = herm(p1gp + p1gp.adjoint() + p_ * g1 * p_);

  Matrix w1 = x_ * p1 * gp_ + xp_ * g1;
  if (!h_zero) w1 += d.H * pg_;
  w1 += w1.adjoint().eval();
  const Matrix y_hat = k_dd_->second_order(v_hat, w_hat_) +
                       k_dd_->first_order(eig_y_.to_eigenbasis(w1));
  out.Y = herm(eig_y_.from_eigenbasis(y_hat));
  return out;
}

double PsiEvaluator::hessian_bilinear(const DirectionPair& d1, const DirectionPair& d2) const {
  return 0.5 * (pair_inner(hessian_apply(d1), d2) + pair_inner(hessian_apply(d2), d1));
}

DirectionalDerivatives PsiEvaluator::directional(const DirectionPair& d) const {
  check_direction(d);
  const DividedDifferences& k = *k_dd_;
  const Matrix v_hat = eig_y_.to_eigenbasis(d.V);
  const Matrix p1 = eig_y_.from_eigenbasis(k.first_order(v_hat));
  const Matrix p2 = eig_y_.from_eigenbasis(k.second_order(v_hat, v_hat));
  const Matrix p3 = eig_y_.from_eigenbasis(k.third_order(v_hat));
  const Matrix& p = p_;
  const Matrix& x = x_;
  const Matrix& h = d.H;

  // Derivatives of M(t) = P(t) X(t) P(t) by the multinomial rule.
  const Matrix m1 = herm(2.0 * p1 * x * p) + p * h * p;
  const Matrix m2 = herm(2.0 * p2 * x * p) + 2.0 * p1 * x * p1 + herm(4.0 * p1 * h * p);
  const Matrix m3 = herm(2.0 * p3 * x * p) + herm(6.0 * p2 * x * p1) +
                    herm(6.0 * p2 * h * p) + 6.0 * p1 * h * p1;

  const Matrix a1 = eig_m_.to_eigenbasis(m1);
  const Matrix a2 = eig_m_.to_eigenbasis(m2);
  const Matrix a3 = eig_m_.to_eigenbasis(m3);
  const DividedDifferences& gd = *gp_dd_;
  const RealVector& mu = eig_m_.eigenvalues;

  DirectionalDerivatives out;
  double s1 = 0.0, s2 = 0.0, s3 = 0.0, t2 = 0.0, t3 = 0.0;
  for (int i = 0; i < n_; ++i) {
    const double gi = params_.gprime(mu[i]);
    s1 += gi * a1(i, i).real();
    s2 += gi * a2(i, i).real();
    s3 += gi * a3(i, i).real();
  }
  for (int j = 0; j < n_; ++j)
    for (int i = 0; i < n_; ++i) {
      const double f1 = gd.first()(i, j);
      t2 += f1 * std::norm(a1(i, j));
      t3 += f1 * (a1(i, j) * a2(j, i)).real();
    }
  double cubic = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int k2 = 0; k2 < n_; ++k2)
      for (int j = 0; j < n_; ++j)
        cubic += gd.second(i, k2, j) * (a1(i, k2) * a1(k2, j) * a1(j, i)).real();

  out.first = s1;
  out.second = t2 + s2;
  out.third = 2.0 * cubic + 3.0 * t3 + s3;
  return out;
}

double psi_value(const TraceFnParams& params, const Matrix& x, const Matrix& y) {
  return PsiEvaluator(params, x, y).value();
}

MatrixPair psi_gradient(const TraceFnParams& params, const Matrix& x, const Matrix& y) {
  return PsiEvaluator(params, x, y).gradient();
}

double psi_hessian_bilinear(const TraceFnParams& params, const Matrix& x, const Matrix& y,
                            const DirectionPair& d1, const DirectionPair& d2) {
  return PsiEvaluator(params, x, y).hessian_bilinear(d1, d2);
}

double psi_third_directional(const TraceFnParams& params, const Matrix& x, const Matrix& y,
                             const DirectionPair& d) {
  return PsiEvaluator(params, x, y).third_directional(d);
}

double d_alpha_value(const TraceFnParams& params, const Matrix& x, const Matrix& y) {
  if (params.alpha == 1.0) throw DomainError("D_alpha: alpha = 1 is not supported");
  return std::log(psi_value(params, x, y)) / (params.alpha - 1.0);
}

double d_alpha_perspective(const TraceFnParams& params, double u, const Matrix& x,
                           const Matrix& y) {
  if (!(params.alpha >= 0.5 && params.alpha < 1.0))
    throw DomainError("perspective D_alpha: alpha must lie in [1/2, 1)");
  if (!(u > 0.0) || !std::isfinite(u)) throw DomainError("perspective D_alpha: u must be positive");
  return u * std::log(psi_value(params, x, y) / u) / (params.alpha - 1.0);
}

Matrix nc_perspective(const ScalarFunction& g, const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw DimensionError("nc_perspective: X and Y differ in shape");
  const Matrix xh = checked_hermitian(x);
  const Matrix yh = checked_hermitian(y);
  require_positive_definite(xh, "X");
  require_positive_definite(yh, "Y");
  const EigenDecomposition ex = eigh(xh);
  const Matrix root = ex.reconstruct(ex.eigenvalues.cwiseSqrt());
  const Matrix inv_root = ex.reconstruct(ex.eigenvalues.cwiseSqrt().cwiseInverse());
  const Matrix inner_arg = herm(inv_root * yh * inv_root);
  return herm(root * spectral_apply(g, inner_arg) * root);
}

Matrix composed_perspective(const ScalarFunction& g, const ScalarFunction& h, const Matrix& x,
                            const Matrix& y, const Matrix& z) {
  return nc_perspective(g, x, nc_perspective(h, y, z));
}

}  // namespace renyi
