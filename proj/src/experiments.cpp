#include "renyi/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "renyi/errors.hpp"
#include "renyi/trace_fn.hpp"

namespace renyi {

namespace {

void check_alpha(double alpha) {
  if (!(alpha >= 0.5 && alpha <= 2.0) || alpha == 1.0) {
    std::ostringstream os;
    os << "alpha must lie in [1/2, 1) or (1, 2], got " << alpha;
    throw DomainError(os.str());
  }
}

ConeKind renyi_cone(int n, double alpha, Field field) {
  return alpha < 1.0 ? ConeKind::renyi_hypo(n, alpha, field)
                     : ConeKind::renyi_epi(n, alpha, field);
}

// -1 for α < 1 (maximize Ψ), +1 for α > 1 (minimize Ψ).
double objective_sign(double alpha) { return alpha < 1.0 ? -1.0 : 1.0; }

Matrix power_of(const Matrix& x, double p) {
  const EigenDecomposition e = eigh(x);
  RealVector v = e.eigenvalues;
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = std::pow(std::max(v[i], 0.0), p);
  return e.reconstruct(v);
}

}  // namespace

std::vector<Matrix> traceless_basis(int n, Field field) {
  std::vector<Matrix> basis;
  const double s = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i) {
      Matrix re = Matrix::Zero(n, n);
      re(i, j) = re(j, i) = s;
      basis.push_back(re);
      if (field == Field::Complex) {
        Matrix im = Matrix::Zero(n, n);
        im(i, j) = Complex(0, s);
        im(j, i) = Complex(0, -s);
        basis.push_back(im);
      }
    }
  for (int k = 1; k < n; ++k) {
    Matrix d = Matrix::Zero(n, n);
    const double norm = 1.0 / std::sqrt(double(k) * (k + 1));
    for (int l = 0; l < k; ++l) d(l, l) = norm;
    d(k, k) = -k * norm;
    basis.push_back(d);
  }
  return basis;
}

Matrix random_bipartite_state(Rng& rng, int n) {
  if (n < 1) throw DomainError("random_bipartite_state: n must be positive");
  const int d = n * n;
  Matrix b(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      const double re = rng.uniform();
      b(r, c) = Complex(re, rng.uniform());
    }
  Matrix a = b * b.adjoint();
  a /= a.trace().real();
  return hermitize(a);
}

AffineForm mutual_info_form(const Matrix& a_in, int n, double alpha, Vector& z0) {
  check_alpha(alpha);
  if (n < 1 || a_in.rows() != n * n || a_in.cols() != n * n)
    throw DimensionError("mutual_info: A must be n²×n²");
  const Matrix a = checked_hermitian(a_in);
  const int d = n * n;
  const Matrix tr2 = partial_trace(a, 2, n, n);
  const ConeKind cone = renyi_cone(d, alpha, Field::Complex);
  const int fm = svec_size(d, Field::Complex);
  const std::vector<Matrix> basis = traceless_basis(n, Field::Complex);

  AffineForm form;
  form.cones = {cone};
  form.x0 = Vector::Zero(cone.dim());
  form.x0.segment(1, fm) = svec(a, Field::Complex);
  const Matrix y0 = kron(tr2, identity(n) / double(n));
  form.x0.segment(1 + fm, fm) = svec(y0, Field::Complex);
  form.N = RealMatrix::Zero(cone.dim(), 1 + static_cast<int>(basis.size()));
  form.N(0, 0) = 1.0;
  for (std::size_t k = 0; k < basis.size(); ++k)
    form.N.col(1 + k).segment(1 + fm, fm) = svec(kron(tr2, basis[k]), Field::Complex);
  form.q = objective_sign(alpha) * Vector::Unit(form.N.cols(), 0);
  form.c0 = 0.0;

  const double psi0 = psi_value(TraceFnParams(alpha), a, y0);
  z0 = Vector::Zero(form.N.cols());
  z0[0] = alpha < 1.0 ? 0.5 * psi0 : 1.5 * psi0;
  return form;
}

MutualInfoResult solve_mutual_info(const Matrix& a, int n, double alpha,
                                   const SolverConfig& config) {
  Vector z0;
  const AffineForm form = mutual_info_form(a, n, alpha, z0);
  MutualInfoResult r;
  r.solve = solve(form, config, z0);
  const int d = n * n, fm = svec_size(d, Field::Complex);
  // Y = tr₂A ⊗ X, so tr₁Y = tr[A]·X.
  const Matrix y = smat(r.solve.x.data() + 1 + fm, d, Field::Complex);
  r.X = hermitize(partial_trace(y, 1, n, n) / a.trace().real());
  const Matrix tr2 = partial_trace(a, 2, n, n);
  r.psi = psi_value(TraceFnParams(alpha), hermitize(a), kron(tr2, r.X));
  r.divergence = std::log(r.psi) / (alpha - 1.0);
  r.residual = fixed_point_residual(a, alpha, r.X);
  return r;
}

double fixed_point_residual(const Matrix& a_in, double alpha, const Matrix& x_in) {
  const Matrix x = checked_hermitian(x_in);
  const int n = static_cast<int>(x.rows());
  if (a_in.rows() != n * n || a_in.cols() != n * n)
    throw DimensionError("fixed_point_residual: A must be n²×n² for n×n X");
  const Matrix a = checked_hermitian(a_in);
  const Matrix y = kron(partial_trace(a, 2, n, n), x);
  const RealVector ev = eigh(y).eigenvalues;
  if (!(ev[0] > kPositivityFloor * std::max(1.0, ev[ev.size() - 1])))
    throw DomainError("fixed_point_residual: tr₂(A) ⊗ X is singular");
  const Matrix p = power_of(y, (1.0 - alpha) / (2.0 * alpha));
  const Matrix z = power_of(hermitize(p * a * p), alpha);
  const Matrix next = partial_trace(z, 1, n, n) / z.trace().real();
  return (x - next).norm();
}

double rate_distortion_closed_form(int n, double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw DomainError("delta must lie in [0, 1]");
  const double d2 = double(n) * n;
  if (delta > 1.0 - 1.0 / d2) return 0.0;
  auto xlogy = [](double x, double y) { return x == 0.0 ? 0.0 : x * std::log(y); };
  return std::log(double(n)) + xlogy(1.0 - delta, 1.0 - delta) + xlogy(delta, delta / (d2 - 1.0));
}

Matrix distortion_observable(int n) {
  const int d = n * n;
  Matrix delta = identity(d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) delta(i * n + i, j * n + j) -= 1.0 / n;
  return delta;
}

double rate_distortion_gap_tolerance(double alpha) {
  return std::clamp(5e-7 * std::abs(alpha - 1.0), 1e-10, 1e-8);
}

ConicProblem rate_distortion_problem(int n, double delta, double alpha) {
  check_alpha(alpha);
  if (n < 2) throw DomainError("rate_distortion: n must be at least 2");
  if (!(delta >= 0.0 && delta <= 1.0)) throw DomainError("delta must lie in [0, 1]");
  if (delta == 0.0)
    throw DomainError("rate_distortion: delta = 0 admits no strictly feasible point");
  const Field f = Field::Real;
  const int d = n * n;
  const int m = svec_size(d, f), mt = svec_size(n, f);
  const ConeKind cone = renyi_cone(d, alpha, f);
  const int xo = 1, yo = 1 + m, wo = 1 + 2 * m;

  ConicProblem p;
  p.cones = {cone, ConeKind::nonneg(1)};
  p.c = Vector::Zero(p.dim());
  p.c[0] = objective_sign(alpha);
  p.rows = m + mt + 1;
  p.b = Vector::Zero(p.rows);
  const Matrix id = identity(n);
  const Vector sdelta = svec(distortion_observable(n), f);
  for (int j = 0; j < m; ++j) {
    const Matrix e = smat(Vector(Vector::Unit(m, j)), d, f);
    // Y = I ⊗ tr₁X, row i of the block: Y_i - (I ⊗ tr₁X)_i = 0.
    const Vector l = svec(kron(id, partial_trace(e, 1, n, n)), f);
    for (int i = 0; i < m; ++i)
      if (l[i] != 0.0) p.A.emplace_back(i, xo + j, -l[i]);
    // tr₂X = I/n.
    const Vector t = svec(partial_trace(e, 2, n, n), f);
    for (int i = 0; i < mt; ++i)
      if (t[i] != 0.0) p.A.emplace_back(m + i, xo + j, t[i]);
    // <X, Δ> + w = δ.
    if (sdelta[j] != 0.0) p.A.emplace_back(m + mt, xo + j, sdelta[j]);
  }
  for (int i = 0; i < m; ++i) p.A.emplace_back(i, yo + i, 1.0);
  p.A.emplace_back(m + mt, wo, 1.0);
  p.b.segment(m, mt) = svec(Matrix(id / double(n)), f);
  p.b[m + mt] = delta;

  // Mixture of I/n² and the maximally entangled state using half the
  // distortion budget.
  const double weight = 0.5 * std::min(delta / (1.0 - 1.0 / d), 1.0);
  const Matrix phi = identity(d) - distortion_observable(n);
  const Matrix x0 = weight * identity(d) / double(d) + (1.0 - weight) * phi;
  const Matrix y0 = kron(id, partial_trace(x0, 1, n, n));
  const double psi0 = psi_value(TraceFnParams(alpha), x0, y0);
  Vector start(p.dim());
  start[0] = alpha < 1.0 ? psi0 - 1.0 : psi0 + 1.0;
  start.segment(xo, m) = svec(x0, f);
  start.segment(yo, m) = svec(y0, f);
  start[wo] = delta - inner(x0, distortion_observable(n));
  p.start = start;
  return p;
}

RateDistortionResult rate_distortion_result(int n, double delta, double alpha,
                                            const SolveResult& solve) {
  const int d = n * n, m = svec_size(d, Field::Real);
  if (solve.x.size() != 2 + 2 * m) throw DimensionError("rate_distortion: wrong solution length");
  RateDistortionResult r;
  r.solve = solve;
  r.X = smat(solve.x.data() + 1, d, Field::Real);
  const Matrix y = kron(identity(n), partial_trace(r.X, 1, n, n));
  r.value = std::log(psi_value(TraceFnParams(alpha), r.X, y)) / (alpha - 1.0);
  r.closed_form = rate_distortion_closed_form(n, delta);
  return r;
}

RateDistortionResult solve_rate_distortion(int n, double delta, double alpha,
                                           const SolverConfig& config) {
  const ConicProblem p = rate_distortion_problem(n, delta, alpha);
  return rate_distortion_result(n, delta, alpha, solve(p, config));
}

ConicProblem fidelity_problem(const Matrix& x_in, const Matrix& y_in) {
  const Matrix x = checked_hermitian(x_in), y = checked_hermitian(y_in);
  const int n = static_cast<int>(x.rows());
  if (y.rows() != n) throw DimensionError("fidelity: X and Y must have equal size");
  if (!is_positive_definite(x) || !is_positive_definite(y))
    throw DomainError("fidelity: X and Y must be positive definite");
  const int big = 2 * n;
  ConicProblem p;
  p.cones = {ConeKind::psd(big)};
  const Vector w0 = svec(direct_sum(x, y), Field::Complex);
  p.c = Vector::Zero(p.dim());
  const double s = 1.0 / std::sqrt(2.0);
  int idx = 0, row = 0;
  auto pin = [&](int k) {
    p.A.emplace_back(row++, k, 1.0);
  };
  std::vector<double> rhs;
  for (int j = 0; j < big; ++j) {
    for (int i = 0; i < j; ++i) {
      const bool pinned = (i < n) == (j < n);
      if (pinned) {
        pin(idx);
        pin(idx + 1);
        rhs.push_back(w0[idx]);
        rhs.push_back(w0[idx + 1]);
      } else if (j == i + n) {
        p.c[idx] = -s;  // √2·Re Z_ii
      }
      idx += 2;
    }
    pin(idx);
    rhs.push_back(w0[idx]);
    ++idx;
  }
  p.rows = row;
  p.b = Eigen::Map<const Vector>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
  p.start = w0;
  return p;
}

FidelityResult fidelity_check(const Matrix& x, const Matrix& y, const SolverConfig& config) {
  FidelityResult r;
  r.solve = solve(fidelity_problem(x, y), config);
  r.sdp = -r.solve.objective_value;
  r.direct = psi_value(TraceFnParams(0.5), hermitize(x), hermitize(y));
  return r;
}

}  // namespace renyi
