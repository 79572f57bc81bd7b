#include "renyi/solver.hpp"

#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include "renyi/errors.hpp"

namespace renyi {

namespace {

constexpr double kCentered = 0.25;
constexpr int kMaxBacktracks = 60;
constexpr double kArmijo = 1e-4;
constexpr double kPolished = 1e-9;
constexpr int kMaxPolishSteps = 8;

// Cholesky of the reduced Hessian, falling back to LDLT plus one step of
// iterative refinement when the matrix is numerically semidefinite, and then
// to a small ridge. The ridge case arises when only the epigraph slack is
// active at the optimum: K then spans 1/μ² to O(1).
class SpdSolver {
 public:
  explicit SpdSolver(const RealMatrix& k) : k_(k), llt_(k) {
    if (llt_.info() == Eigen::Success) return;
    ldlt_.compute(k);
    if (ldlt_.info() == Eigen::Success && ldlt_.isPositive()) {
      mode_ = Mode::Ldlt;
      return;
    }
    const double scale = k.diagonal().cwiseAbs().maxCoeff();
    for (double ridge = 1e-14 * scale; ridge <= 1e-8 * scale; ridge *= 10.0) {
      llt_.compute(k + ridge * RealMatrix::Identity(k.rows(), k.cols()));
      if (llt_.info() == Eigen::Success) {
        mode_ = Mode::Ridge;
        return;
      }
    }
    throw NumericalError("reduced Hessian is not positive definite");
  }

  Vector solve(const Vector& rhs) const {
    if (mode_ != Mode::Ldlt) return llt_.solve(rhs);
    Vector x = ldlt_.solve(rhs);
    x += ldlt_.solve(Vector(rhs - k_ * x));
    return x;
  }

 private:
  enum class Mode { Llt, Ldlt, Ridge };
  const RealMatrix& k_;
  Eigen::LLT<RealMatrix> llt_;
  Eigen::LDLT<RealMatrix> ldlt_;
  Mode mode_ = Mode::Llt;
};

std::unique_ptr<ProductBarrier> try_barrier(const std::vector<ConeKind>& cones, const Vector& x) {
  try {
    return std::make_unique<ProductBarrier>(cones, x);
  } catch (const DomainError&) {
    return nullptr;
  } catch (const NumericalError&) {
    return nullptr;
  }
}

Vector concatenated_interior_point(const std::vector<ConeKind>& cones) {
  Vector e(total_dim(cones));
  int off = 0;
  for (const auto& c : cones) {
    e.segment(off, c.dim()) = c.interior_point();
    off += c.dim();
  }
  return e;
}

// Early exit hook, consulted after every accepted step and at every centered
// point. Returns a status to stop with.
using StopFn = std::function<std::optional<SolveStatus>(const Vector& z, double objective,
                                                        double mu, bool centered)>;

// x is advanced by increments N Δz rather than recomputed as x0 + N z, so
// coordinates approaching zero keep their relative accuracy.
struct Iterate {
  Vector z;
  Vector x;
  std::unique_ptr<ProductBarrier> barrier;
  Vector grad_f;  // Nᵀ ∇F
  RealMatrix k;   // Nᵀ ∇²F N
};

void refresh(Iterate& it, const AffineForm& form, bool parallel) {
  it.grad_f = form.N.transpose() * it.barrier->gradient();
  it.k = parallel ? reduced_hessian_parallel(*it.barrier, form.N)
                  : reduced_hessian_serial(*it.barrier, form.N);
}

SolveResult path_follow(const AffineForm& form, const SolverConfig& config, const Vector& z0,
                        const StopFn& stop) {
  config.validate();
  if (z0.size() != form.free_dim()) throw DimensionError("solve: start has wrong length");
  if (form.N.rows() != form.dim() || form.q.size() != form.free_dim() ||
      form.dim() != total_dim(form.cones))
    throw DimensionError("solve: inconsistent affine form");

  SolveResult result;
  const double nu = total_nu(form.cones);
  Iterate it;
  it.z = z0;
  it.x = form.point(z0);
  it.barrier = try_barrier(form.cones, it.x);
  if (!it.barrier) throw DomainError("solve: start point is not strictly feasible");
  auto objective = [&](const Vector& z) { return form.c0 + form.q.dot(z); };
  auto finish = [&](SolveStatus status, double mu, std::string message) {
    result.status = status;
    result.x = it.x;
    result.objective_value = objective(it.z);
    result.mu = mu;
    result.gap_bound = nu * mu;
    result.message = std::move(message);
    return result;
  };
  if (form.free_dim() == 0) return finish(SolveStatus::Optimal, 0.0, "feasible set is a point");

  double mu = 0.0;
  int polish_steps = 0;
  double last_lambda = 0.0;
  try {
    refresh(it, form, config.parallel);
    auto solver = std::make_unique<SpdSolver>(it.k);

    const Vector kq = solver->solve(form.q);
    const double qkq = form.q.dot(kq);
    if (!(qkq > 1e-300)) return finish(SolveStatus::Optimal, 0.0, "objective is constant");
    // μ minimizing the Newton decrement ||q/μ + Nᵀ∇F|| in the local norm.
    const double rho = -kq.dot(it.grad_f) / qkq;
    mu = rho > 0.0 ? 1.0 / rho : std::sqrt(qkq);

    while (true) {
      const Vector grad = form.q / mu + it.grad_f;
      const Vector delta = -solver->solve(grad);
      const double lambda = std::sqrt(std::max(0.0, -grad.dot(delta)));

      const bool final_mu = nu * mu <= config.gap_tolerance;
      // Stop polishing once quadratic convergence stalls at rounding level.
      const bool stalled = polish_steps > 0 && lambda > 0.5 * last_lambda;
      last_lambda = lambda;
      if (final_mu && (lambda <= kPolished || stalled || polish_steps >= kMaxPolishSteps))
        return finish(SolveStatus::Optimal, mu, "converged");
      if (lambda <= kCentered && !final_mu) {
        const double obj = objective(it.z);
        result.centered_objectives.push_back(obj);
        if (auto s = stop(it.z, obj, mu, true)) return finish(*s, mu, "stopped on centered point");
        const double mu_next = mu * config.mu_reduction;
        if (config.predictor) {
          // Tangent to the central path: dz/dμ = K⁻¹q / μ².
          const Vector dz = -((mu - mu_next) / (mu * mu)) * solver->solve(form.q);
          const Vector dx = form.N * dz;
          for (double frac = 1.0; frac > 1e-3; frac *= 0.5) {
            const Vector xp = it.x + frac * dx;
            if (auto bar = try_barrier(form.cones, xp)) {
              it.z += frac * dz;
              it.x = xp;
              it.barrier = std::move(bar);
              refresh(it, form, config.parallel);
              solver = std::make_unique<SpdSolver>(it.k);
              break;
            }
          }
        }
        mu = mu_next;
        continue;
      }

      if (lambda <= kCentered && final_mu) {
        // Quadratic-convergence region: polish the last center so the dual
        // estimate -μ∇F satisfies the KKT conditions tightly.
        if (polish_steps == 0) {
          result.centered_objectives.push_back(objective(it.z));
          if (auto s = stop(it.z, objective(it.z), mu, true))
            return finish(*s, mu, "stopped on centered point");
        }
        ++polish_steps;
      }
      if (result.iterations >= config.max_iterations)
        return finish(SolveStatus::IterationLimit, mu, "iteration limit reached");

      const double f0 = it.barrier->value();
      const double slope = grad.dot(delta);
      const double q_delta = form.q.dot(delta);
      const Vector dx = form.N * delta;
      double step = 1.0;
      std::unique_ptr<ProductBarrier> next;
      for (int k = 0; k < kMaxBacktracks; ++k, step *= config.line_search_backtrack) {
        auto bar = try_barrier(form.cones, Vector(it.x + step * dx));
        if (!bar) continue;
        // Inside the quadratic-convergence region the full step provably
        // decreases the barrier; the Armijo test there is dominated by rounding
        // in slacks that are small relative to the quantities they separate.
        if (lambda <= kCentered) {
          next = std::move(bar);
          break;
        }
        const double decrease = step * q_delta / mu + (bar->value() - f0);
        if (decrease <= kArmijo * step * slope) {
          next = std::move(bar);
          break;
        }
      }
      if (!next) return finish(SolveStatus::NumericalFailure, mu, "line search failed");

      it.z += step * delta;
      it.x += step * dx;
      it.barrier = std::move(next);
      ++result.iterations;
      result.trace.push_back({result.iterations, mu, lambda, step, objective(it.z)});
      if (auto s = stop(it.z, objective(it.z), mu, false)) return finish(*s, mu, "stopped");
      refresh(it, form, config.parallel);
      solver = std::make_unique<SpdSolver>(it.k);
    }
  } catch (const NumericalError& e) {
    return finish(SolveStatus::NumericalFailure, mu, e.what());
  }
}

}  // namespace

int ConicProblem::dim() const { return total_dim(cones); }

RealMatrix ConicProblem::dense_A() const {
  RealMatrix a = RealMatrix::Zero(rows, dim());
  for (const auto& t : A) a(t.row(), t.col()) += t.value();
  return a;
}

void ConicProblem::validate() const {
  if (cones.empty()) throw DimensionError("problem: no cones");
  for (const auto& c : cones) c.validate();
  const int n = dim();
  if (c.size() != n) throw DimensionError("problem: c has wrong length");
  if (rows < 0 || b.size() != rows) throw DimensionError("problem: b has wrong length");
  for (const auto& t : A)
    if (t.row() < 0 || t.row() >= rows || t.col() < 0 || t.col() >= n)
      throw DimensionError("problem: A entry out of range");
  if (start && start->size() != n) throw DimensionError("problem: start has wrong length");
  if (!c.allFinite() || !b.allFinite()) throw DomainError("problem: non-finite data");
}

void SolverConfig::validate() const {
  if (!(gap_tolerance > 0.0)) throw std::invalid_argument("gap_tolerance must be positive");
  if (max_iterations < 0) throw std::invalid_argument("max_iterations must be nonnegative");
  if (!(mu_reduction > 0.0 && mu_reduction < 1.0))
    throw std::invalid_argument("mu_reduction must lie in (0, 1)");
  if (!(line_search_backtrack > 0.0 && line_search_backtrack < 1.0))
    throw std::invalid_argument("line_search_backtrack must lie in (0, 1)");
  if (!(feasibility_tolerance > 0.0))
    throw std::invalid_argument("feasibility_tolerance must be positive");
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::IterationLimit: return "iteration_limit";
    case SolveStatus::NumericalFailure: return "numerical_failure";
    case SolveStatus::Infeasible: return "infeasible";
  }
  return "unknown";
}

double total_nu(const std::vector<ConeKind>& cones) {
  double nu = 0.0;
  for (const auto& c : cones) nu += c.nu();
  return nu;
}

int total_dim(const std::vector<ConeKind>& cones) {
  int d = 0;
  for (const auto& c : cones) d += c.dim();
  return d;
}

bool interior(const std::vector<ConeKind>& cones, const Vector& x, double margin) {
  if (x.size() != total_dim(cones)) throw DimensionError("interior: wrong length");
  int off = 0;
  for (const auto& c : cones) {
    if (!interior_membership(c, Vector(x.segment(off, c.dim())), margin)) return false;
    off += c.dim();
  }
  return true;
}

ProductBarrier::ProductBarrier(const std::vector<ConeKind>& cones, const Vector& x) {
  if (x.size() != total_dim(cones)) throw DimensionError("barrier: wrong length");
  gradient_.resize(x.size());
  int off = 0;
  blocks_.reserve(cones.size());
  for (const auto& c : cones) {
    blocks_.emplace_back(c, x.segment(off, c.dim()));
    offsets_.push_back(off);
    value_ += blocks_.back().value();
    gradient_.segment(off, c.dim()) = blocks_.back().gradient();
    nu_ += c.nu();
    off += c.dim();
  }
}

Vector ProductBarrier::hessian_apply(const Vector& d) const {
  Vector out = Vector::Zero(d.size());
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const int dim = blocks_[k].cone().dim();
    const auto seg = d.segment(offsets_[k], dim);
    if (seg.isZero(0.0)) continue;
    out.segment(offsets_[k], dim) = blocks_[k].hessian_apply(seg);
  }
  return out;
}

RealMatrix reduced_hessian_serial(const ProductBarrier& barrier, const RealMatrix& n) {
  const Eigen::Index m = n.cols();
  RealMatrix k(m, m);
  for (Eigen::Index j = 0; j < m; ++j) k.col(j) = n.transpose() * barrier.hessian_apply(n.col(j));
  return 0.5 * (k + k.transpose());
}

RealMatrix reduced_hessian_parallel(const ProductBarrier& barrier, const RealMatrix& n) {
  const Eigen::Index m = n.cols();
  RealMatrix k(m, m);
  std::exception_ptr error;
#if defined(RENYI_HAVE_OPENMP)
#pragma omp parallel for schedule(dynamic)
#endif
  for (Eigen::Index j = 0; j < m; ++j) {
    try {
      k.col(j) = n.transpose() * barrier.hessian_apply(n.col(j));
    } catch (...) {
#if defined(RENYI_HAVE_OPENMP)
#pragma omp critical
#endif
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return 0.5 * (k + k.transpose());
}

AffineForm presolve(const ConicProblem& problem) {
  problem.validate();
  const int n = problem.dim();
  const int rows = problem.rows;
  AffineForm form;
  form.cones = problem.cones;
  if (rows == 0) {
    form.x0 = Vector::Zero(n);
    form.N = RealMatrix::Identity(n, n);
  } else {
    if (rows > n) throw DimensionError("presolve: more constraints than variables");
    const RealMatrix at = problem.dense_A().transpose();
    Eigen::ColPivHouseholderQR<RealMatrix> qr(at);
    qr.setThreshold(1e-10);
    if (qr.rank() < rows) {
      std::ostringstream os;
      os << "presolve: constraint matrix has rank " << qr.rank() << " < " << rows << " rows";
      throw DimensionError(os.str());
    }
    const RealMatrix q = qr.householderQ();
    const RealMatrix r1 = qr.matrixR().topLeftCorner(rows, rows);
    const Vector pb = qr.colsPermutation().transpose() * problem.b;
    const Vector w = r1.triangularView<Eigen::Upper>().transpose().solve(pb);
    form.x0 = q.leftCols(rows) * w;
    form.N = q.rightCols(n - rows);
  }
  form.q = form.N.transpose() * problem.c;
  form.c0 = problem.c.dot(form.x0);
  return form;
}

SolveResult solve(const AffineForm& form, const SolverConfig& config, const Vector& z0) {
  return path_follow(form, config, z0,
                     [](const Vector&, double, double, bool) { return std::nullopt; });
}

SolveResult solve(const ConicProblem& problem, const SolverConfig& config, const Vector& start) {
  const AffineForm form = presolve(problem);
  const RealMatrix a = problem.dense_A();
  const double residual = problem.rows ? (a * start - problem.b).norm() : 0.0;
  if (start.size() != problem.dim()) throw DimensionError("solve: start has wrong length");
  if (residual > config.feasibility_tolerance * std::max(1.0, problem.b.norm())) {
    std::ostringstream os;
    os << "solve: start violates the equality constraints (residual " << residual << ")";
    throw DomainError(os.str());
  }
  const Vector z0 = form.N.transpose() * (start - form.x0);
  SolveResult r = solve(form, config, z0);
  const double final_residual = problem.rows ? (a * r.x - problem.b).norm() : 0.0;
  if (r.status == SolveStatus::Optimal &&
      final_residual > config.feasibility_tolerance * (1.0 + problem.b.norm())) {
    r.status = SolveStatus::NumericalFailure;
    r.message = "equality residual above feasibility tolerance";
  }
  return r;
}

SolveResult solve(const ConicProblem& problem, const SolverConfig& config) {
  if (problem.start) return solve(problem, config, *problem.start);
  const AffineForm form = presolve(problem);
  const auto z0 = phase1(form, config);
  if (!z0) {
    SolveResult r;
    r.status = SolveStatus::Infeasible;
    r.message = "no strictly feasible point found";
    return r;
  }
  return solve(problem, config, form.point(*z0));
}

std::optional<Vector> phase1(const AffineForm& form, const SolverConfig& config) {
  const int m = form.free_dim();
  if (try_barrier(form.cones, form.x0)) return Vector::Zero(m);

  const Vector e = concatenated_interior_point(form.cones);
  // Smallest power-of-two shift along e that reaches the interior.
  double tau = std::max(1.0, form.x0.lpNorm<Eigen::Infinity>());
  for (int k = 0; k < 80 && !try_barrier(form.cones, Vector(form.x0 + tau * e)); ++k) tau *= 2.0;

  // min τ s.t. x0 + N z + τ e ∈ K, τ ≥ -τ0 and |z_i| ≤ M. The bounds keep
  // the auxiliary problem bounded, so its central path exists even when the
  // feasible set has recession directions of zero cost.
  const int dim = form.dim();
  const double big_m = 1e6 * tau;
  AffineForm aux;
  aux.cones = form.cones;
  aux.cones.push_back(ConeKind::nonneg(2 * m + 1));
  aux.x0.resize(dim + 2 * m + 1);
  aux.x0 << form.x0, tau, Vector::Constant(2 * m, big_m);
  aux.N = RealMatrix::Zero(dim + 2 * m + 1, m + 1);
  aux.N.topLeftCorner(dim, m) = form.N;
  aux.N.col(m).head(dim) = e;
  aux.N(dim, m) = 1.0;
  aux.N.block(dim + 1, 0, m, m) = -RealMatrix::Identity(m, m);
  aux.N.block(dim + 1 + m, 0, m, m) = RealMatrix::Identity(m, m);
  aux.q = Vector::Unit(m + 1, m);
  Vector z0 = Vector::Zero(m + 1);
  z0[m] = tau;
  if (!try_barrier(aux.cones, aux.point(z0))) return std::nullopt;

  const double nu = total_nu(aux.cones);
  std::optional<Vector> found;
  const StopFn stop = [&](const Vector& z, double obj, double mu,
                          bool centered) -> std::optional<SolveStatus> {
    if (obj < 0.0 && try_barrier(form.cones, form.point(z.head(m)))) {
      found = z.head(m);
      return SolveStatus::Optimal;
    }
    // Lower bound on the optimal shift from the duality gap at a centered point.
    if (centered && obj - 2.0 * nu * mu > 0.0) return SolveStatus::Infeasible;
    return std::nullopt;
  };
  SolverConfig cfg = config;
  cfg.gap_tolerance = std::min(config.gap_tolerance, 1e-10);
  path_follow(aux, cfg, z0, stop);
  return found;
}

std::optional<Vector> phase1_start(const ConicProblem& problem, const SolverConfig& config) {
  const AffineForm form = presolve(problem);
  const auto z = phase1(form, config);
  if (!z) return std::nullopt;
  return form.point(*z);
}

KktResiduals kkt_residuals(const ConicProblem& problem, const Vector& x, double mu) {
  problem.validate();
  const ProductBarrier bar(problem.cones, x);
  const RealMatrix a = problem.dense_A();
  const Vector s = -mu * bar.gradient();
  const Vector r = problem.c - s;
  KktResiduals k;
  if (problem.rows == 0) {
    k.dual = r.norm();
    k.gap = problem.c.dot(x);
    return k;
  }
  const Vector y = a.transpose().colPivHouseholderQr().solve(r);
  k.primal = (a * x - problem.b).norm();
  k.dual = (r - a.transpose() * y).norm();
  k.gap = problem.c.dot(x) - problem.b.dot(y);
  return k;
}

}  // namespace renyi
