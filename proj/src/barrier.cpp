#include "renyi/barrier.hpp"

#include <cmath>
#include <sstream>

#include "renyi/errors.hpp"

namespace renyi {

namespace {

// Slack below this fraction of max(|t|, |value|) is treated as the boundary:
// the subtraction that forms it has no significant digits left.
constexpr double kSlackFloor = 1e-12;

struct Cholesky {
  bool ok = false;
  Matrix inverse;
  double logdet = 0.0;
};

Cholesky factor(const Matrix& x) {
  Cholesky c;
  Eigen::LLT<Matrix> llt(x);
  if (llt.info() != Eigen::Success) return c;
  const auto& l = llt.matrixL();
  const Matrix lm = l;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double d = lm(i, i).real();
    if (!(d > 0.0)) return c;
    c.logdet += 2.0 * std::log(d);
  }
  c.inverse = llt.solve(Matrix::Identity(x.rows(), x.cols()));
  c.inverse = 0.5 * (c.inverse + c.inverse.adjoint()).eval();
  c.ok = true;
  return c;
}

double slack_scale(double t, double value) {
  return std::max({1.0, std::abs(t), std::abs(value)});
}

// -log det along H: first -tr(W), second tr(W^2), third -2 tr(W^3), W = X⁻¹H.
void logdet_directional(const Matrix& xinv, const Matrix& h, double& d1, double& d2, double& d3) {
  const Matrix w = xinv * h;
  const Matrix w2 = w * w;
  d1 -= w.trace().real();
  d2 += w2.trace().real();
  d3 -= 2.0 * (w2 * w).trace().real();
}

}  // namespace

ConeKind ConeKind::nonneg(int k) {
  ConeKind c;
  c.type = ConeType::NonNeg;
  c.n = k;
  c.field = Field::Real;
  c.validate();
  return c;
}

ConeKind ConeKind::psd(int n, Field field) {
  ConeKind c;
  c.type = ConeType::PSD;
  c.n = n;
  c.field = field;
  c.validate();
  return c;
}

ConeKind ConeKind::renyi_hypo(int n, double alpha, Field field) {
  ConeKind c{ConeType::RenyiHypo, n, alpha, field};
  c.validate();
  return c;
}

ConeKind ConeKind::renyi_epi(int n, double alpha, Field field) {
  ConeKind c{ConeType::RenyiEpi, n, alpha, field};
  c.validate();
  return c;
}

ConeKind ConeKind::renyi_persp_epi(int n, double alpha, Field field) {
  ConeKind c{ConeType::RenyiPerspEpi, n, alpha, field};
  c.validate();
  return c;
}

void ConeKind::validate() const {
  if (n < 1) throw DimensionError(name() + ": dimension must be positive");
  auto bad_alpha = [&](const char* range) {
    std::ostringstream os;
    os << name() << ": alpha must lie in " << range;
    throw DomainError(os.str());
  };
  switch (type) {
    case ConeType::RenyiHypo:
      if (!(alpha >= 0.5 && alpha <= 1.0)) bad_alpha("[1/2, 1]");
      break;
    case ConeType::RenyiEpi:
      if (!(alpha >= 1.0 && alpha <= 2.0)) bad_alpha("[1, 2]");
      break;
    case ConeType::RenyiPerspEpi:
      if (!(alpha >= 0.5 && alpha < 1.0)) bad_alpha("[1/2, 1)");
      break;
    default:
      break;
  }
}

int ConeKind::dim() const {
  switch (type) {
    case ConeType::NonNeg: return n;
    case ConeType::PSD: return svec_size(n, field);
    case ConeType::RenyiHypo:
    case ConeType::RenyiEpi: return 1 + 2 * svec_size(n, field);
    case ConeType::RenyiPerspEpi: return 2 + 2 * svec_size(n, field);
  }
  return 0;
}

double ConeKind::nu() const {
  switch (type) {
    case ConeType::NonNeg:
    case ConeType::PSD: return n;
    case ConeType::RenyiHypo:
    case ConeType::RenyiEpi: return 1.0 + 2.0 * n;
    case ConeType::RenyiPerspEpi: return 2.0 + 2.0 * n;
  }
  return 0.0;
}

std::string ConeKind::name() const {
  std::ostringstream os;
  switch (type) {
    case ConeType::NonNeg: os << "nonneg(k=" << n << ")"; return os.str();
    case ConeType::PSD: os << "psd(n=" << n; break;
    case ConeType::RenyiHypo: os << "renyi_hypo(n=" << n << ", alpha=" << alpha; break;
    case ConeType::RenyiEpi: os << "renyi_epi(n=" << n << ", alpha=" << alpha; break;
    case ConeType::RenyiPerspEpi: os << "renyi_persp_epi(n=" << n << ", alpha=" << alpha; break;
  }
  if (field == Field::Real) os << ", real";
  os << ")";
  return os.str();
}

Vector ConeKind::interior_point() const {
  const Matrix id = identity(n);
  switch (type) {
    case ConeType::NonNeg: return Vector::Ones(n);
    case ConeType::PSD: return pack(*this, ConePoint::psd(id));
    case ConeType::RenyiHypo: return pack(*this, ConePoint::renyi(0.0, id, id));
    case ConeType::RenyiEpi: return pack(*this, ConePoint::renyi(n + 1.0, id, id));
    case ConeType::RenyiPerspEpi: return pack(*this, ConePoint::perspective(1.0, 1.0, id, id));
  }
  return {};
}

ConePoint ConePoint::renyi(double t, Matrix x, Matrix y) {
  ConePoint p;
  p.t = t;
  p.X = std::move(x);
  p.Y = std::move(y);
  return p;
}

ConePoint ConePoint::perspective(double t, double u, Matrix x, Matrix y) {
  ConePoint p = renyi(t, std::move(x), std::move(y));
  p.u = u;
  return p;
}

ConePoint ConePoint::nonneg(Vector v) {
  ConePoint p;
  p.entries = std::move(v);
  return p;
}

ConePoint ConePoint::psd(Matrix x) {
  ConePoint p;
  p.X = std::move(x);
  return p;
}

Vector pack(const ConeKind& cone, const ConePoint& p) {
  Vector v(cone.dim());
  const int m = svec_size(cone.n, cone.field);
  auto check = [&](const Matrix& a, const char* what) {
    if (a.rows() != cone.n || a.cols() != cone.n) {
      std::ostringstream os;
      os << cone.name() << ": block " << what << " is " << a.rows() << "x" << a.cols();
      throw DimensionError(os.str());
    }
  };
  switch (cone.type) {
    case ConeType::NonNeg:
      if (p.entries.size() != cone.n) throw DimensionError(cone.name() + ": wrong entry count");
      v = p.entries;
      break;
    case ConeType::PSD:
      check(p.X, "X");
      svec(p.X, cone.field, v.data());
      break;
    case ConeType::RenyiHypo:
    case ConeType::RenyiEpi:
      check(p.X, "X");
      check(p.Y, "Y");
      v[0] = p.t;
      svec(p.X, cone.field, v.data() + 1);
      svec(p.Y, cone.field, v.data() + 1 + m);
      break;
    case ConeType::RenyiPerspEpi:
      check(p.X, "X");
      check(p.Y, "Y");
      v[0] = p.t;
      v[1] = p.u;
      svec(p.X, cone.field, v.data() + 2);
      svec(p.Y, cone.field, v.data() + 2 + m);
      break;
  }
  return v;
}

ConePoint unpack(const ConeKind& cone, const Vector& v) {
  if (v.size() != cone.dim()) {
    std::ostringstream os;
    os << cone.name() << ": expected " << cone.dim() << " entries, got " << v.size();
    throw DimensionError(os.str());
  }
  const int m = svec_size(cone.n, cone.field);
  switch (cone.type) {
    case ConeType::NonNeg: return ConePoint::nonneg(v);
    case ConeType::PSD: return ConePoint::psd(smat(v.data(), cone.n, cone.field));
    case ConeType::RenyiHypo:
    case ConeType::RenyiEpi:
      return ConePoint::renyi(v[0], smat(v.data() + 1, cone.n, cone.field),
                              smat(v.data() + 1 + m, cone.n, cone.field));
    case ConeType::RenyiPerspEpi:
      return ConePoint::perspective(v[0], v[1], smat(v.data() + 2, cone.n, cone.field),
                                    smat(v.data() + 2 + m, cone.n, cone.field));
  }
  return {};
}

bool interior_membership(const ConeKind& cone, const Vector& v, double margin) {
  const ConePoint p = unpack(cone, v);
  if (!v.allFinite()) return false;
  switch (cone.type) {
    case ConeType::NonNeg:
      return (p.entries.array() > margin).all();
    case ConeType::PSD:
      return is_positive_definite(p.X, margin);
    default:
      break;
  }
  if (!is_positive_definite(p.X, margin) || !is_positive_definite(p.Y, margin)) return false;
  if (cone.type == ConeType::RenyiPerspEpi && !(p.u > margin)) return false;
  double psi = 0.0;
  try {
    psi = psi_value(TraceFnParams(cone.alpha), p.X, p.Y);
  } catch (const DomainError&) {
    return false;
  }
  double slack = 0.0;
  switch (cone.type) {
    case ConeType::RenyiHypo: slack = psi - p.t; break;
    case ConeType::RenyiEpi: slack = p.t - psi; break;
    default: slack = p.t - p.u * std::log(psi / p.u) / (cone.alpha - 1.0); break;
  }
  return slack > margin;
}

bool interior_membership(const ConeKind& cone, const ConePoint& p, double margin) {
  return interior_membership(cone, pack(cone, p), margin);
}

BarrierEval::BarrierEval(const ConeKind& cone, const Vector& v) : cone_(cone), x_(v) {
  if (v.size() != cone.dim()) {
    std::ostringstream os;
    os << cone.name() << ": expected " << cone.dim() << " entries, got " << v.size();
    throw DimensionError(os.str());
  }
  if (!v.allFinite()) throw DomainError(cone.name() + ": non-finite point");
  const int dim = cone.dim();
  gradient_.resize(dim);

  if (cone.type == ConeType::NonNeg) {
    if (!(v.array() > 0.0).all()) throw DomainError(cone.name() + ": point is not interior");
    value_ = -v.array().log().sum();
    gradient_ = -v.cwiseInverse();
    return;
  }

  mat_dim_ = svec_size(cone.n, cone.field);
  const ConePoint p = unpack(cone, v);
  X_ = p.X;
  const Cholesky cx = factor(X_);
  if (!cx.ok) throw DomainError(cone.name() + ": X is not positive definite");
  Xinv_ = cx.inverse;
  if (cone.type == ConeType::PSD) {
    value_ = -cx.logdet;
    svec(Matrix(-Xinv_), cone.field, gradient_.data());
    return;
  }

  Y_ = p.Y;
  t_ = p.t;
  u_ = p.u;
  const Cholesky cy = factor(Y_);
  if (!cy.ok) throw DomainError(cone.name() + ": Y is not positive definite");
  Yinv_ = cy.inverse;
  psi_.emplace(TraceFnParams(cone.alpha), X_, Y_);
  const double psi = psi_->value();
  const MatrixPair& g = psi_->gradient();

  const int off = cone.type == ConeType::RenyiPerspEpi ? 2 : 1;
  slack_grad_ = Vector::Zero(dim);
  Vector gpsi(2 * mat_dim_);
  svec(g.X, cone.field, gpsi.data());
  svec(g.Y, cone.field, gpsi.data() + mat_dim_);
  double reference = psi;
  switch (cone.type) {
    case ConeType::RenyiHypo:
      slack_ = psi - t_;
      slack_grad_[0] = -1.0;
      slack_grad_.tail(2 * mat_dim_) = gpsi;
      break;
    case ConeType::RenyiEpi:
      slack_ = t_ - psi;
      slack_grad_[0] = 1.0;
      slack_grad_.tail(2 * mat_dim_) = -gpsi;
      break;
    default: {
      if (!(u_ > 0.0)) throw DomainError(cone.name() + ": u must be positive");
      const double c = 1.0 / (cone.alpha - 1.0);
      const double ell = std::log(psi / u_);
      const double d = c * u_ * ell;
      reference = d;
      slack_ = t_ - d;
      slack_grad_[0] = 1.0;
      slack_grad_[1] = -c * (ell - 1.0);
      slack_grad_.tail(2 * mat_dim_) = -(c * u_ / psi) * gpsi;
      break;
    }
  }
  if (!(slack_ > kSlackFloor * slack_scale(t_, reference))) {
    std::ostringstream os;
    os << cone.name() << ": point is not interior (slack " << slack_ << ")";
    throw DomainError(os.str());
  }

  value_ = -std::log(slack_) - cx.logdet - cy.logdet;
  gradient_ = -slack_grad_ / slack_;
  Vector gx(mat_dim_), gy(mat_dim_);
  svec(Xinv_, cone.field, gx.data());
  svec(Yinv_, cone.field, gy.data());
  gradient_.segment(off, mat_dim_) -= gx;
  gradient_.segment(off + mat_dim_, mat_dim_) -= gy;
  if (cone.type == ConeType::RenyiPerspEpi) {
    value_ -= std::log(u_);
    gradient_[1] -= 1.0 / u_;
  }
}

void BarrierEval::unpack_direction(const Vector& d, double& dt, double& du, Matrix& h,
                                   Matrix& v) const {
  const int off = cone_.type == ConeType::RenyiPerspEpi ? 2 : 1;
  dt = d[0];
  du = off == 2 ? d[1] : 0.0;
  h = smat(d.data() + off, cone_.n, cone_.field);
  v = smat(d.data() + off + mat_dim_, cone_.n, cone_.field);
}

Vector BarrierEval::slack_hessian_apply(const Vector& d) const {
  double dt, du;
  Matrix h, v;
  unpack_direction(d, dt, du, h, v);
  const MatrixPair hp = psi_->hessian_apply({h, v});
  Vector out = Vector::Zero(cone_.dim());
  Vector hpsi(2 * mat_dim_);
  svec(hp.X, cone_.field, hpsi.data());
  svec(hp.Y, cone_.field, hpsi.data() + mat_dim_);
  switch (cone_.type) {
    case ConeType::RenyiHypo:
      out.tail(2 * mat_dim_) = hpsi;
      break;
    case ConeType::RenyiEpi:
      out.tail(2 * mat_dim_) = -hpsi;
      break;
    default: {
      // s = t - D with D = c u (log Ψ - log u).
      const double c = 1.0 / (cone_.alpha - 1.0);
      const double psi = psi_->value();
      const MatrixPair& g = psi_->gradient();
      const double g1 = inner(g.X, h) + inner(g.Y, v);
      Vector gpsi(2 * mat_dim_);
      svec(g.X, cone_.field, gpsi.data());
      svec(g.Y, cone_.field, gpsi.data() + mat_dim_);
      out[1] = -c * (-du / u_ + g1 / psi);
      out.tail(2 * mat_dim_) =
          -c * ((du / psi - u_ * g1 / (psi * psi)) * gpsi + (u_ / psi) * hpsi);
      break;
    }
  }
  return out;
}

Vector BarrierEval::hessian_apply(const Vector& d) const {
  if (d.size() != cone_.dim()) throw DimensionError(cone_.name() + ": direction length mismatch");
  if (cone_.type == ConeType::NonNeg) return d.cwiseQuotient(x_.cwiseProduct(x_));
  if (cone_.type == ConeType::PSD) {
    const Matrix h = smat(d.data(), cone_.n, cone_.field);
    return svec(Matrix(Xinv_ * h * Xinv_), cone_.field);
  }
  double dt, du;
  Matrix h, v;
  unpack_direction(d, dt, du, h, v);
  const double s1 = slack_grad_.dot(d);
  Vector out = (s1 / (slack_ * slack_)) * slack_grad_ - slack_hessian_apply(d) / slack_;
  const int off = cone_.type == ConeType::RenyiPerspEpi ? 2 : 1;
  if (!h.isZero(0.0)) out.segment(off, mat_dim_) += svec(Matrix(Xinv_ * h * Xinv_), cone_.field);
  out.segment(off + mat_dim_, mat_dim_) += svec(Matrix(Yinv_ * v * Yinv_), cone_.field);
  if (off == 2) out[1] += du / (u_ * u_);
  return out;
}

RealMatrix BarrierEval::hessian_matrix() const {
  const int dim = cone_.dim();
  RealMatrix hm(dim, dim);
  for (int j = 0; j < dim; ++j) hm.col(j) = hessian_apply(Vector::Unit(dim, j));
  return 0.5 * (hm + hm.transpose());
}

Vector BarrierEval::hessian_solve(const Vector& rhs) const {
  if (rhs.size() != cone_.dim()) throw DimensionError(cone_.name() + ": rhs length mismatch");
  if (cone_.type == ConeType::NonNeg) return rhs.cwiseProduct(x_.cwiseProduct(x_));
  if (cone_.type == ConeType::PSD) {
    const Matrix r = smat(rhs.data(), cone_.n, cone_.field);
    return svec(Matrix(X_ * r * X_), cone_.field);
  }
  const RealMatrix hm = hessian_matrix();
  const double scale = std::max(rhs.norm(), 1e-300);
  Eigen::LLT<RealMatrix> llt(hm);
  if (llt.info() == Eigen::Success) {
    Vector d = llt.solve(rhs);
    if ((hm * d - rhs).norm() <= 1e-10 * scale) return d;
  }
  Eigen::LDLT<RealMatrix> ldlt(hm);
  if (ldlt.info() != Eigen::Success) throw NumericalError(cone_.name() + ": Hessian factorization failed");
  Vector d = ldlt.solve(rhs);
  for (int it = 0; it < 5; ++it) {
    const Vector r = rhs - hm * d;
    if (r.norm() <= 1e-12 * scale) break;
    d += ldlt.solve(r);
  }
  if (!((hm * d - rhs).norm() <= 1e-8 * scale))
    throw NumericalError(cone_.name() + ": Hessian solve did not reach the residual target");
  return d;
}

BarrierDirectional BarrierEval::directional(const Vector& d) const {
  if (d.size() != cone_.dim()) throw DimensionError(cone_.name() + ": direction length mismatch");
  BarrierDirectional out;
  if (cone_.type == ConeType::NonNeg) {
    const Vector r = d.cwiseQuotient(x_);
    out.first = -r.sum();
    out.second = r.squaredNorm();
    out.third = -2.0 * r.array().cube().sum();
    return out;
  }
  if (cone_.type == ConeType::PSD) {
    logdet_directional(Xinv_, smat(d.data(), cone_.n, cone_.field), out.first, out.second,
                       out.third);
    return out;
  }
  double dt, du;
  Matrix h, v;
  unpack_direction(d, dt, du, h, v);
  const DirectionalDerivatives p = psi_->directional({h, v});
  double s1 = 0.0, s2 = 0.0, s3 = 0.0;
  switch (cone_.type) {
    case ConeType::RenyiHypo:
      s1 = p.first - dt;
      s2 = p.second;
      s3 = p.third;
      break;
    case ConeType::RenyiEpi:
      s1 = dt - p.first;
      s2 = -p.second;
      s3 = -p.third;
      break;
    default: {
      const double c = 1.0 / (cone_.alpha - 1.0);
      const double psi = psi_->value();
      const double ell = std::log(psi / u_);
      const double r = du / u_;
      const double q1 = p.first / psi, q2 = p.second / psi, q3 = p.third / psi;
      const double l1 = q1 - r;
      const double l2 = q2 - q1 * q1 + r * r;
      const double l3 = q3 - 3.0 * q1 * q2 + 2.0 * q1 * q1 * q1 - 2.0 * r * r * r;
      s1 = dt - c * (du * ell + u_ * l1);
      s2 = -c * (2.0 * du * l1 + u_ * l2);
      s3 = -c * (3.0 * du * l2 + u_ * l3);
      out.first -= r;
      out.second += r * r;
      out.third -= 2.0 * r * r * r;
      break;
    }
  }
  const double a = s1 / slack_;
  out.first += -a;
  out.second += -s2 / slack_ + a * a;
  out.third += -s3 / slack_ + 3.0 * a * s2 / slack_ - 2.0 * a * a * a;
  logdet_directional(Xinv_, h, out.first, out.second, out.third);
  logdet_directional(Yinv_, v, out.first, out.second, out.third);
  return out;
}

double barrier_value(const ConeKind& cone, const ConePoint& p) {
  return BarrierEval(cone, pack(cone, p)).value();
}

ConePoint barrier_gradient(const ConeKind& cone, const ConePoint& p) {
  return unpack(cone, BarrierEval(cone, pack(cone, p)).gradient());
}

ConePoint barrier_hessian_apply(const ConeKind& cone, const ConePoint& p, const ConePoint& d) {
  return unpack(cone, BarrierEval(cone, pack(cone, p)).hessian_apply(pack(cone, d)));
}

ConePoint barrier_hessian_solve(const ConeKind& cone, const ConePoint& p, const ConePoint& rhs) {
  return unpack(cone, BarrierEval(cone, pack(cone, p)).hessian_solve(pack(cone, rhs)));
}

double barrier_third_directional(const ConeKind& cone, const ConePoint& p, const ConePoint& d) {
  return BarrierEval(cone, pack(cone, p)).third_directional(pack(cone, d));
}

double barrier_parameter(const ConeKind& cone) { return cone.nu(); }

}  // namespace renyi
