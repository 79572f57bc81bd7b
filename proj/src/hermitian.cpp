#include "renyi/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "renyi/errors.hpp"

namespace renyi {

namespace {

// Relative spreads below which higher divided differences use the Taylor value
// at the mean. The mean cancels the first correction term, so the fallback
// error is O(spread^2) while the recursive quotient loses about eps/spread^k.
constexpr double kSecondOrderCoalesce = 1e-5;
constexpr double kThirdOrderCoalesce = 1e-4;

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << ": expected a square matrix, got " << m.rows() << "x" << m.cols();
    throw DimensionError(os.str());
  }
}

}  // namespace

double asymmetry(const Matrix& m) {
  return (m - m.adjoint()).norm() / std::max(1.0, m.norm());
}

Matrix hermitize(const Matrix& m) {
  require_square(m, "hermitize");
  if (!m.allFinite()) throw DomainError("hermitize: non-finite entries");
  return 0.5 * (m + m.adjoint());
}

Matrix checked_hermitian(const Matrix& m, double tolerance) {
  require_square(m, "hermitize");
  if (!m.allFinite()) throw DomainError("hermitize: non-finite entries");
  const double asym = asymmetry(m);
  if (asym > tolerance) {
    std::ostringstream os;
    os << "hermitize: relative asymmetry " << asym << " exceeds " << tolerance;
    throw DomainError(os.str());
  }
  return 0.5 * (m + m.adjoint());
}

Matrix identity(int n) { return Matrix::Identity(n, n); }

Matrix EigenDecomposition::reconstruct(const RealVector& values) const {
  return unitary * values.cast<Complex>().asDiagonal() * unitary.adjoint();
}

Matrix EigenDecomposition::to_eigenbasis(const Matrix& a) const {
  return unitary.adjoint() * a * unitary;
}

Matrix EigenDecomposition::from_eigenbasis(const Matrix& a) const {
  return unitary * a * unitary.adjoint();
}

EigenDecomposition eigh(const Matrix& x) {
  require_square(x, "eigh");
  // Eigen caps the implicit QL sweeps at 30 per eigenvalue.
  Eigen::SelfAdjointEigenSolver<Matrix> solver(x, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw NumericalError("eigh: QL iteration did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Matrix spectral_apply(const ScalarFunction& g, const EigenDecomposition& eig) {
  RealVector values(eig.dim());
  for (int i = 0; i < eig.dim(); ++i) {
    const double lambda = eig.eigenvalues[i];
    if (!g.in_domain(lambda)) {
      std::ostringstream os;
      os << "spectral_apply: eigenvalue " << lambda << " outside the domain of " << g.name();
      throw DomainError(os.str());
    }
    values[i] = g(lambda);
  }
  return eig.reconstruct(values);
}

Matrix spectral_apply(const ScalarFunction& g, const Matrix& x) {
  return spectral_apply(g, eigh(x));
}

double divided_difference(const ScalarFunction& f, double a, double b, double c) {
  std::array<double, 3> x{a, b, c};
  std::sort(x.begin(), x.end());
  const double scale = std::max(std::abs(x[0]), std::abs(x[2]));
  if (x[2] - x[0] <= kSecondOrderCoalesce * scale)
    return 0.5 * f.derivative(2, (x[0] + x[1] + x[2]) / 3.0);
  return (f.first_divided_difference(x[1], x[2]) - f.first_divided_difference(x[0], x[1])) /
         (x[2] - x[0]);
}

double divided_difference(const ScalarFunction& f, double a, double b, double c, double d) {
  std::array<double, 4> x{a, b, c, d};
  std::sort(x.begin(), x.end());
  const double scale = std::max(std::abs(x[0]), std::abs(x[3]));
  if (x[3] - x[0] <= kThirdOrderCoalesce * scale)
    return f.derivative(3, 0.25 * (x[0] + x[1] + x[2] + x[3])) / 6.0;
  return (divided_difference(f, x[1], x[2], x[3]) - divided_difference(f, x[0], x[1], x[2])) /
         (x[3] - x[0]);
}

DividedDifferences::DividedDifferences(ScalarFunction f, RealVector eigenvalues, int max_order)
    : f_(std::move(f)), lambda_(std::move(eigenvalues)) {
  const int n = dim();
  for (int i = 0; i < n; ++i) {
    if (!f_.in_domain(lambda_[i])) {
      std::ostringstream os;
      os << "divided differences: eigenvalue " << lambda_[i] << " outside the domain of "
         << f_.name();
      throw DomainError(os.str());
    }
  }
  first_.resize(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= j; ++i)
      first_(i, j) = first_(j, i) = f_.first_divided_difference(lambda_[i], lambda_[j]);
  if (max_order >= 2) {
    second_.resize(static_cast<std::size_t>(n) * n * n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
          second_[(static_cast<std::size_t>(i) * n + k) * n + j] =
              divided_difference(f_, lambda_[i], lambda_[k], lambda_[j]);
  }
}

double DividedDifferences::second(int i, int k, int j) const {
  if (!second_.empty()) {
    const auto n = static_cast<std::size_t>(dim());
    return second_[(i * n + k) * n + j];
  }
  return divided_difference(f_, lambda_[i], lambda_[k], lambda_[j]);
}

double DividedDifferences::third(int i, int k, int l, int j) const {
  return divided_difference(f_, lambda_[i], lambda_[k], lambda_[l], lambda_[j]);
}

Matrix DividedDifferences::first_order(const Matrix& a_hat) const {
  return first_.cast<Complex>().cwiseProduct(a_hat);
}

Matrix DividedDifferences::second_order(const Matrix& a_hat, const Matrix& b_hat) const {
  const int n = dim();
  Matrix out = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      Complex acc = 0.0;
      for (int k = 0; k < n; ++k)
        acc += second(i, k, j) * (a_hat(i, k) * b_hat(k, j) + b_hat(i, k) * a_hat(k, j));
      out(i, j) = acc;
    }
  return out;
}

Matrix DividedDifferences::third_order(const Matrix& a_hat) const {
  const int n = dim();
  Matrix out = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      Complex acc = 0.0;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          acc += third(i, k, l, j) * a_hat(i, k) * a_hat(k, l) * a_hat(l, j);
      out(i, j) = 6.0 * acc;
    }
  return out;
}

Matrix frechet_derivative(const ScalarFunction& g, const Matrix& x,
                          const std::vector<Matrix>& directions, int order) {
  if (order != 1 && order != 2)
    throw std::invalid_argument("frechet_derivative: order must be 1 or 2");
  if (static_cast<int>(directions.size()) != order)
    throw std::invalid_argument("frechet_derivative: need one direction per order");
  for (const auto& d : directions)
    if (d.rows() != x.rows() || d.cols() != x.cols())
      throw DimensionError("frechet_derivative: direction shape differs from the base point");
  const EigenDecomposition eig = eigh(x);
  const DividedDifferences dd(g, eig.eigenvalues, order);
  if (order == 1) return eig.from_eigenbasis(dd.first_order(eig.to_eigenbasis(directions[0])));
  return eig.from_eigenbasis(
      dd.second_order(eig.to_eigenbasis(directions[0]), eig.to_eigenbasis(directions[1])));
}

Matrix kron(const Matrix& x, const Matrix& y) {
  const auto n = x.rows(), m = y.rows();
  Matrix out(n * m, x.cols() * y.cols());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      out.block(i * m, j * y.cols(), m, y.cols()) = x(i, j) * y;
  return out;
}

Matrix direct_sum(const Matrix& x, const Matrix& y) {
  Matrix out = Matrix::Zero(x.rows() + y.rows(), x.cols() + y.cols());
  out.topLeftCorner(x.rows(), x.cols()) = x;
  out.bottomRightCorner(y.rows(), y.cols()) = y;
  return out;
}

Matrix partial_trace(const Matrix& m, int subsystem, int n, int k) {
  require_square(m, "partial_trace");
  if (subsystem != 1 && subsystem != 2)
    throw std::invalid_argument("partial_trace: subsystem must be 1 or 2");
  if (n <= 0 || k <= 0 || m.rows() != static_cast<Eigen::Index>(n) * k) {
    std::ostringstream os;
    os << "partial_trace: dimension " << m.rows() << " does not factor as " << n << "*" << k;
    throw DimensionError(os.str());
  }
  if (subsystem == 1) {
    Matrix out = Matrix::Zero(k, k);
    for (int i = 0; i < n; ++i) out += m.block(i * k, i * k, k, k);
    return out;
  }
  Matrix out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = m.block(i * k, j * k, k, k).trace();
  return out;
}

double inner(const Matrix& a, const Matrix& b) {
  return (a.conjugate().cwiseProduct(b)).sum().real();
}

bool is_positive_definite(const Matrix& x, double margin) {
  if (x.rows() != x.cols() || !x.allFinite()) return false;
  Eigen::LLT<Matrix> llt(x - margin * Matrix::Identity(x.rows(), x.cols()));
  return llt.info() == Eigen::Success;
}

int svec_size(int n, Field field) {
  return field == Field::Real ? n * (n + 1) / 2 : n * n;
}

void svec(const Matrix& x, Field field, double* out) {
  const int n = static_cast<int>(x.rows());
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      *out++ = M_SQRT2 * x(i, j).real();
      if (field == Field::Complex) *out++ = M_SQRT2 * x(i, j).imag();
    }
    *out++ = x(j, j).real();
  }
}

Eigen::VectorXd svec(const Matrix& x, Field field) {
  Eigen::VectorXd v(svec_size(static_cast<int>(x.rows()), field));
  svec(x, field, v.data());
  return v;
}

Matrix smat(const double* v, int n, Field field) {
  Matrix x(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      const double re = *v++ / M_SQRT2;
      const double im = field == Field::Complex ? *v++ / M_SQRT2 : 0.0;
      x(i, j) = Complex(re, im);
      x(j, i) = Complex(re, -im);
    }
    x(j, j) = *v++;
  }
  return x;
}

Matrix smat(const Eigen::VectorXd& v, int n, Field field) {
  if (v.size() != svec_size(n, field)) throw DimensionError("smat: vector length mismatch");
  return smat(v.data(), n, field);
}

}  // namespace renyi
