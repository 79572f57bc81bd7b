#include "renyi/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "renyi/errors.hpp"
#include "renyi/sampling.hpp"

namespace renyi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDegenerate = 1e-14;
constexpr int kMaxRedraws = 100;

constexpr double kSelfConcordanceTol = 1e-7;
constexpr double kBarrierParameterTol = 1e-9;
constexpr double kLogHomogeneityTol = 1e-10;
constexpr double kCompatibilityTol = 1e-9;
constexpr double kMidpointTol = 1e-7;
constexpr double kHansenTomiyamaTol = 1e-6;
constexpr double kKronTol = 1e-10;
constexpr double kSupremumTol = 1e-9;
constexpr double kFirstTol = 1e-6, kSecondTol = 1e-5, kThirdTol = 1e-4;
constexpr double kFdStep = 1e-3;

struct Outcome {
  bool counted = true;
  double violation = -kInf;
  double statistic = -kInf;
  std::vector<double> inputs;
  std::string label;
  int resampled = 0;
};

// One outcome per index, computed serially or with OpenMP. Exceptions are
// rethrown for the lowest failing index so both modes fail identically.
template <class Fn>
std::vector<Outcome> sweep(int count, bool parallel, Fn&& fn) {
  std::vector<Outcome> out(count);
  std::vector<std::exception_ptr> errors(count);
  if (parallel) {
#ifdef RENYI_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int k = 0; k < count; ++k) {
      try {
        out[k] = fn(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  } else {
    for (int k = 0; k < count; ++k) {
      try {
        out[k] = fn(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

// Serial reduction in index order: the first maximal violation wins.
class Accumulator {
 public:
  explicit Accumulator(bool sum_statistic = false) : sum_statistic_(sum_statistic) {}

  void add(const std::vector<Outcome>& outcomes) {
    for (const auto& o : outcomes) {
      resampled_ += o.resampled;
      if (!o.counted) continue;
      ++samples_;
      if (samples_ == 1 || o.violation > worst_) {
        worst_ = o.violation;
        worst_inputs_ = o.inputs;
        label_ = o.label;
      }
      if (sum_statistic_) {
        statistic_ = (statistic_ == -kInf ? 0.0 : statistic_) + o.statistic;
      } else {
        statistic_ = std::max(statistic_, o.statistic);
      }
    }
  }

  VerificationReport finish(std::string name, double tolerance, std::uint64_t seed) const {
    VerificationReport r;
    r.property_name = std::move(name);
    r.samples = samples_;
    r.resampled = resampled_;
    r.worst_violation = worst_;
    r.tolerance = tolerance;
    r.worst_case_inputs = worst_inputs_;
    r.worst_case_label = label_;
    r.statistic = statistic_ == -kInf ? std::numeric_limits<double>::quiet_NaN() : statistic_;
    r.seed = seed;
    r.passed = samples_ > 0 && worst_ <= tolerance;
    return r;
  }

 private:
  bool sum_statistic_;
  int samples_ = 0;
  int resampled_ = 0;
  double worst_ = -kInf;
  double statistic_ = -kInf;
  std::vector<double> worst_inputs_;
  std::string label_;
};

void append(std::vector<double>& out, const Vector& v) {
  out.insert(out.end(), v.data(), v.data() + v.size());
}

void append(std::vector<double>& out, const Matrix& m) {
  append(out, svec(m, Field::Complex));
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

// Sample index offsets keep the streams of different sub-sweeps disjoint.
std::uint64_t stream_index(std::size_t block, int k) {
  return (static_cast<std::uint64_t>(block) << 32) + static_cast<std::uint64_t>(k);
}

double op_norm(const Matrix& g) {
  const RealVector ev = eigh(g).eigenvalues;
  return std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
}

Matrix sqrt_pd(const Matrix& x) {
  const EigenDecomposition e = eigh(x);
  return e.reconstruct(e.eigenvalues.cwiseMax(0.0).cwiseSqrt());
}

double pick_scale(Rng& rng) {
  const auto i = static_cast<std::size_t>(rng.uniform() * kDirectionScales.size());
  return kDirectionScales[std::min(i, kDirectionScales.size() - 1)];
}

// θ·X^{1/2} G X^{1/2}/||G||: X ± H ⪰ 0 holds exactly at θ = 1.
Matrix admissible_direction(const Matrix& x, Rng& rng, double theta) {
  const int n = static_cast<int>(x.rows());
  Matrix g = random_hermitian(rng, n);
  const double norm = op_norm(g);
  if (norm == 0.0) return Matrix::Zero(n, n);
  const Matrix root = sqrt_pd(x);
  const Matrix h = root * g * root * (theta / norm);
  return 0.5 * (h + h.adjoint());
}

Matrix random_pd(Rng& rng, int n, double bias) {
  const double cond = std::pow(10.0, 1.0 + 3.0 * bias * rng.uniform());
  return random_positive_definite(rng, n, cond, std::exp(rng.uniform(-1.0, 1.0)));
}

double central(const std::function<double(double)>& phi, double h) {
  const double d1 = (phi(h) - phi(-h)) / (2.0 * h);
  const double d2 = (phi(0.5 * h) - phi(-0.5 * h)) / h;
  return (4.0 * d2 - d1) / 3.0;
}

double rel_error(double analytic, double reference, double floor) {
  return std::abs(analytic - reference) / std::max(std::abs(reference), floor);
}

void require_alpha_cone(const ConeKind& cone) { cone.validate(); }

}  // namespace

void SampleSpec::validate() const {
  if (count < 1) throw std::invalid_argument("SampleSpec: count must be at least 1");
  if (dims.empty()) throw std::invalid_argument("SampleSpec: dims must be nonempty");
  for (int n : dims)
    if (n < 1) throw std::invalid_argument("SampleSpec: dimensions must be positive");
  if (!(boundary_bias >= 0.0 && boundary_bias < 1.0))
    throw std::invalid_argument("SampleSpec: boundary_bias must lie in [0, 1)");
}

// ---------------------------------------------------------------------------
// Barrier properties

VerificationReport check_self_concordance(const ConeKind& cone, const SampleSpec& spec) {
  spec.validate();
  require_alpha_cone(cone);
  const auto outcomes = sweep(spec.count, spec.parallel, [&](int k) {
    Rng rng = Rng::stream(spec.seed, static_cast<std::uint64_t>(k));
    const Vector x = sample_interior_point(cone, rng, spec.boundary_bias);
    const BarrierEval bar(cone, x);
    Outcome o;
    for (int attempt = 0;; ++attempt) {
      if (attempt == kMaxRedraws) throw NumericalError("self-concordance: degenerate directions");
      const Vector d = sample_direction(cone, rng);
      const BarrierDirectional dd = bar.directional(d);
      if (!(dd.second >= kDegenerate)) {
        ++o.resampled;
        continue;
      }
      const double s = std::pow(dd.second, 1.5);
      o.violation = (std::abs(dd.third) - 2.0 * s) / s;
      o.statistic = std::abs(dd.third) / (2.0 * s);
      append(o.inputs, x);
      append(o.inputs, d);
      o.label = cone.name() + " sample " + std::to_string(k);
      return o;
    }
  });
  Accumulator acc;
  acc.add(outcomes);
  return acc.finish("self-concordance " + cone.name(), kSelfConcordanceTol, spec.seed);
}

VerificationReport check_barrier_parameter(const ConeKind& cone, const SampleSpec& spec) {
  spec.validate();
  require_alpha_cone(cone);
  const double nu = cone.nu();
  const auto outcomes = sweep(spec.count, spec.parallel, [&](int k) {
    Rng rng = Rng::stream(spec.seed, static_cast<std::uint64_t>(k));
    const Vector x = sample_interior_point(cone, rng, spec.boundary_bias);
    const BarrierEval bar(cone, x);
    const Vector g = sample_direction(cone, rng);
    const double w = k == 0 ? 1.0 : rng.uniform();
    const Vector d = -w * x / x.norm() + (1.0 - w) * g / g.norm();
    const BarrierDirectional dd = bar.directional(d);
    Outcome o;
    if (!(dd.second >= kDegenerate)) {
      o.counted = false;
      return o;
    }
    // 2s·DF[d] - s²·D²F[d,d] is maximized at s = DF[d]/D²F[d,d].
    const double value = dd.first * dd.first / dd.second;
    o.violation = value - nu;
    o.statistic = value;
    append(o.inputs, x);
    append(o.inputs, Vector((dd.first / dd.second) * d));
    o.label = cone.name() + " sample " + std::to_string(k);
    return o;
  });
  Accumulator acc;
  acc.add(outcomes);
  return acc.finish("barrier-parameter " + cone.name(), kBarrierParameterTol, spec.seed);
}

VerificationReport check_log_homogeneity(const ConeKind& cone, const SampleSpec& spec,
                                         const std::vector<double>& lambdas) {
  spec.validate();
  require_alpha_cone(cone);
  for (double l : lambdas)
    if (!(l > 0.0)) throw DomainError("log-homogeneity: λ must be positive");
  const double nu = cone.nu();
  const auto outcomes = sweep(spec.count, spec.parallel, [&](int k) {
    Rng rng = Rng::stream(spec.seed, static_cast<std::uint64_t>(k));
    const Vector x = sample_interior_point(cone, rng, spec.boundary_bias);
    const double f = BarrierEval(cone, x).value();
    Outcome o;
    o.violation = 0.0;
    append(o.inputs, x);
    for (double l : lambdas) {
      const double fl = BarrierEval(cone, l * x).value();
      const double v = std::abs(fl - f + nu * std::log(l));
      if (v > o.violation) o.label = cone.name() + " sample " + std::to_string(k) + " λ=" + fmt(l);
      o.violation = std::max(o.violation, v);
    }
    if (o.label.empty()) o.label = cone.name() + " sample " + std::to_string(k);
    o.statistic = o.violation;
    return o;
  });
  Accumulator acc;
  acc.add(outcomes);
  return acc.finish("log-homogeneity " + cone.name(), kLogHomogeneityTol, spec.seed);
}

// ---------------------------------------------------------------------------
// Compatibility

std::string to_string(CompatFamily family) {
  switch (family) {
    case CompatFamily::PsiConcave: return "psi";
    case CompatFamily::NegPsi: return "neg-psi";
    case CompatFamily::NegPerspective: return "neg-perspective";
    case CompatFamily::NegPsiExplore: return "neg-psi-explore";
  }
  return "unknown";
}

namespace {

TraceFnParams compat_params(CompatFamily family, double alpha) {
  switch (family) {
    case CompatFamily::PsiConcave:
      if (!(alpha >= 0.5 && alpha <= 1.0)) throw DomainError("psi compatibility needs α ∈ [1/2, 1]");
      return TraceFnParams(alpha);
    case CompatFamily::NegPsi:
      if (!(alpha >= 1.0 && alpha <= 2.0)) throw DomainError("-psi compatibility needs α ∈ [1, 2]");
      return TraceFnParams(alpha);
    case CompatFamily::NegPerspective:
      if (!(alpha >= 0.5 && alpha < 1.0))
        throw DomainError("perspective compatibility needs α ∈ [1/2, 1)");
      return TraceFnParams(alpha);
    case CompatFamily::NegPsiExplore:
      return TraceFnParams::unrestricted(alpha);
  }
  throw DomainError("unknown compatibility family");
}

struct CompatSample {
  double d2 = 0.0, d3 = 0.0;
  std::vector<double> inputs;
};

CompatSample compat_sample(CompatFamily family, const TraceFnParams& params, int n, double bias,
                           Rng& rng) {
  const Matrix x = random_pd(rng, n, bias);
  const Matrix y = random_pd(rng, n, bias);
  const DirectionPair d{admissible_direction(x, rng, pick_scale(rng)),
                        admissible_direction(y, rng, pick_scale(rng))};
  const PsiEvaluator ev(params, x, y);
  const DirectionalDerivatives psi = ev.directional(d);
  CompatSample s;
  if (family == CompatFamily::NegPerspective) {
    const double u = std::exp(rng.uniform(-1.0, 1.0));
    const double du = (rng.uniform() < 0.5 ? -1.0 : 1.0) * pick_scale(rng) * u;
    const double p = ev.value();
    // ℓ = log Ψ, L = ℓ - log w, φ = w·L along w = u + t·du.
    const double l1 = psi.first / p;
    const double l2 = psi.second / p - l1 * l1;
    const double l3 = psi.third / p - 3.0 * psi.first * psi.second / (p * p) + 2.0 * l1 * l1 * l1;
    const double r = du / u;
    const double L1 = l1 - r, L2 = l2 + r * r, L3 = l3 - 2.0 * r * r * r;
    const double phi2 = 2.0 * du * L1 + u * L2;
    const double phi3 = 3.0 * du * L2 + u * L3;
    const double c = 1.0 / (params.alpha - 1.0);
    s.d2 = -c * phi2;
    s.d3 = -c * phi3;
    s.inputs.push_back(u);
    s.inputs.push_back(du);
  } else {
    const double sign = family == CompatFamily::PsiConcave ? 1.0 : -1.0;
    s.d2 = sign * psi.second;
    s.d3 = sign * psi.third;
  }
  append(s.inputs, x);
  append(s.inputs, y);
  append(s.inputs, d.H);
  append(s.inputs, d.V);
  return s;
}

double compat_violation(double d2, double d3, double beta) {
  return (d3 + 3.0 * beta * d2) / std::max(1.0, 3.0 * beta * std::abs(d2));
}

std::vector<Outcome> compat_outcomes(CompatFamily family, double alpha, double beta,
                                     const SampleSpec& spec) {
  const TraceFnParams params = compat_params(family, alpha);
  std::vector<Outcome> all;
  for (std::size_t b = 0; b < spec.dims.size(); ++b) {
    const int n = spec.dims[b];
    auto outcomes = sweep(spec.count, spec.parallel, [&](int k) {
      Rng rng = Rng::stream(spec.seed, stream_index(b, k));
      CompatSample s = compat_sample(family, params, n, spec.boundary_bias, rng);
      Outcome o;
      o.violation = compat_violation(s.d2, s.d3, beta);
      if (std::abs(s.d2) > kDegenerate) o.statistic = -s.d3 / s.d2;
      o.inputs = std::move(s.inputs);
      o.label = to_string(family) + " n=" + std::to_string(n) + " sample " + std::to_string(k);
      return o;
    });
    all.insert(all.end(), outcomes.begin(), outcomes.end());
  }
  return all;
}

std::string compat_name(CompatFamily family, double alpha, double beta) {
  return "compatibility " + to_string(family) + " alpha=" + fmt(alpha) + " beta=" + fmt(beta);
}

}  // namespace

VerificationReport check_compatibility(CompatFamily family, double alpha, double beta,
                                       const SampleSpec& spec) {
  spec.validate();
  Accumulator acc;
  acc.add(compat_outcomes(family, alpha, beta, spec));
  VerificationReport r = acc.finish(compat_name(family, alpha, beta), kCompatibilityTol, spec.seed);
  r.informational = family == CompatFamily::NegPsiExplore;
  return r;
}

VerificationReport check_compatibility_fails(CompatFamily family, double alpha, double beta,
                                             const SampleSpec& spec) {
  spec.validate();
  auto outcomes = compat_outcomes(family, alpha, beta, spec);
  // The sample with the largest violation is the witness; flip the sign so
  // that "passed" means a violation beyond tolerance was found.
  Accumulator acc;
  acc.add(outcomes);
  VerificationReport r = acc.finish("", 0.0, spec.seed);
  r.property_name = "compatibility-fails " + to_string(family) + " alpha=" + fmt(alpha) +
                    " beta=" + fmt(beta);
  r.worst_violation = kCompatibilityTol - r.worst_violation;
  r.tolerance = 0.0;
  r.passed = r.samples > 0 && r.worst_violation <= r.tolerance;
  r.informational = family == CompatFamily::NegPsiExplore;
  return r;
}

ScalarCompatibility scalar_compatibility(double alpha, double beta, const SampleSpec& spec) {
  spec.validate();
  if (!(alpha > 1.0)) throw DomainError("scalar compatibility needs α > 1");
  const auto outcomes = sweep(spec.count + 4, spec.parallel, [&](int k) {
    Rng rng = Rng::stream(spec.seed, static_cast<std::uint64_t>(k));
    double xh, yh;
    if (k < 4) {
      xh = (k & 1) ? -1.0 : 1.0;
      yh = (k & 2) ? -1.0 : 1.0;
    } else {
      xh = rng.uniform(-1.0, 1.0);
      yh = rng.uniform(-1.0, 1.0);
    }
    const double x = std::exp(rng.uniform(-2.0, 2.0)), y = std::exp(rng.uniform(-2.0, 2.0));
    const double f0 = std::pow(x, alpha) * std::pow(y, 1.0 - alpha);
    // g(t) = (1 + t x̂)^α (1 + t ŷ)^{1-α}; f = -f0·g along (x̂x, ŷy).
    const double a = alpha * xh + (1.0 - alpha) * yh;
    const double b = -(alpha * xh * xh + (1.0 - alpha) * yh * yh);
    const double c = 2.0 * (alpha * xh * xh * xh + (1.0 - alpha) * yh * yh * yh);
    const double g2 = alpha * (alpha - 1.0) * (xh - yh) * (xh - yh);
    const double g3 = a * a * a + 3.0 * a * b + c;
    Outcome o;
    if (!(g2 > kDegenerate)) {
      o.counted = false;
      return o;
    }
    const double d2 = -f0 * g2, d3 = -f0 * g3;
    o.violation = compat_violation(d2, d3, beta);
    o.statistic = d3 / d2;
    o.inputs = {xh, yh, x, y};
    return o;
  });
  ScalarCompatibility out;
  out.sup_ratio = -kInf;
  out.worst_violation = -kInf;
  for (const auto& o : outcomes) {
    if (!o.counted) continue;
    ++out.samples;
    out.worst_violation = std::max(out.worst_violation, o.violation);
    if (o.statistic > out.sup_ratio) {
      out.sup_ratio = o.statistic;
      out.argmax_xhat = o.inputs[0];
      out.argmax_yhat = o.inputs[1];
    }
  }
  return out;
}

std::vector<VerificationReport> check_scalar_compatibility(double alpha, const SampleSpec& spec) {
  const double beta = (2.0 * alpha - 1.0) / 3.0;
  const ScalarCompatibility at = scalar_compatibility(alpha, beta, spec);
  const ScalarCompatibility deflated = scalar_compatibility(alpha, 0.99 * beta, spec);
  std::vector<VerificationReport> out(3);
  const std::string tag = " alpha=" + fmt(alpha);
  for (auto& r : out) {
    r.samples = at.samples;
    r.seed = spec.seed;
    r.statistic = at.sup_ratio;
    r.worst_case_inputs = {at.argmax_xhat, at.argmax_yhat};
    r.worst_case_label = "argmax (" + fmt(at.argmax_xhat) + ", " + fmt(at.argmax_yhat) + ")";
  }
  out[0].property_name = "scalar-compatibility" + tag + " beta=" + fmt(beta);
  out[0].worst_violation = at.worst_violation;
  out[0].tolerance = kCompatibilityTol;
  out[0].passed = at.worst_violation <= kCompatibilityTol;

  const bool at_corner = at.argmax_xhat == 1.0 && at.argmax_yhat == -1.0;
  out[1].property_name = "scalar-supremum" + tag;
  out[1].worst_violation = at_corner ? std::abs(at.sup_ratio - (2.0 * alpha - 1.0)) : kInf;
  out[1].tolerance = kSupremumTol;
  out[1].passed = out[1].worst_violation <= kSupremumTol;

  out[2].property_name = "scalar-tightness" + tag + " beta=" + fmt(0.99 * beta);
  out[2].worst_violation = kCompatibilityTol - deflated.worst_violation;
  out[2].tolerance = 0.0;
  out[2].passed = out[2].worst_violation <= 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// Operator concavity along lines

std::vector<double> taylor_coefficients(const std::function<double(double)>& f, double t,
                                        double radius, int order, int nodes) {
  if (order < 0 || nodes < order + 1 || !(radius > 0.0))
    throw std::invalid_argument("taylor_coefficients: need radius > 0 and nodes > order");
  const double pi = std::numbers::pi;
  std::vector<double> values(nodes);
  for (int j = 0; j < nodes; ++j)
    values[j] = f(t + radius * std::cos(pi * (j + 0.5) / nodes));
  // Chebyshev coefficients of the interpolant.
  std::vector<double> cheb(nodes, 0.0);
  for (int k = 0; k < nodes; ++k) {
    double s = 0.0;
    for (int j = 0; j < nodes; ++j) s += values[j] * std::cos(pi * k * (j + 0.5) / nodes);
    cheb[k] = (k == 0 ? 1.0 : 2.0) * s / nodes;
  }
  // Monomial coefficients via T_{k+1} = 2x T_k - T_{k-1}.
  std::vector<double> mono(nodes, 0.0), prev(nodes, 0.0), cur(nodes, 0.0), next(nodes, 0.0);
  prev[0] = 1.0;
  mono[0] += cheb[0];
  if (nodes > 1) {
    cur[1] = 1.0;
    mono[1] += cheb[1];
  }
  for (int k = 1; k + 1 < nodes; ++k) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int i = 0; i + 1 < nodes; ++i) next[i + 1] += 2.0 * cur[i];
    for (int i = 0; i < nodes; ++i) next[i] -= prev[i];
    for (int i = 0; i < nodes; ++i) mono[i] += cheb[k + 1] * next[i];
    std::swap(prev, cur);
    std::swap(cur, next);
  }
  std::vector<double> out(order + 1);
  double scale = 1.0;
  for (int i = 0; i <= order; ++i) {
    out[i] = mono[i] / scale;
    scale *= radius;
  }
  return out;
}

RealMatrix hansen_tomiyama(const std::vector<double>& taylor, int m) {
  if (m < 1 || static_cast<int>(taylor.size()) < 2 * m + 1)
    throw std::invalid_argument("hansen_tomiyama: need Taylor coefficients up to order 2m");
  RealMatrix h(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) h(i, j) = taylor[i + j + 2];
  return h;
}

namespace {

constexpr double kLineRange = 0.3;   // sampled t for the Hansen-Tomiyama test
constexpr double kChebRadius = 0.3;

struct LineResult {
  double midpoint = -kInf;  // normalized by kMidpointTol
  double ht = -kInf;        // normalized by kHansenTomiyamaTol
  bool disagree = false;
};

Matrix spectral_lift(const std::function<double(double)>& f, const Matrix& t) {
  const EigenDecomposition e = eigh(t);
  RealVector v(e.dim());
  for (int i = 0; i < e.dim(); ++i) v[i] = f(e.eigenvalues[i]);
  return e.reconstruct(v);
}

Matrix spectrum_in(Rng& rng, int m, double bound) {
  const Matrix u = random_unitary(rng, m);
  RealVector l(m);
  for (int i = 0; i < m; ++i) l[i] = rng.uniform(-bound, bound);
  const Matrix t = u * l.cast<Complex>().asDiagonal() * u.adjoint();
  return 0.5 * (t + t.adjoint());
}

LineResult line_check(const TraceFnParams& params, const Matrix& x, const Matrix& y,
                      const DirectionPair& d, const std::vector<int>& lift_dims, int trials,
                      Rng& rng) {
  const double sign = params.alpha <= 1.0 ? 1.0 : -1.0;  // concave: +F, convex: -F
  const std::function<double(double)> f = [&](double s) {
    const Matrix xs = x + s * d.H, ys = y + s * d.V;
    return psi_value(params, 0.5 * (xs + xs.adjoint()), 0.5 * (ys + ys.adjoint()));
  };
  LineResult r;
  for (int trial = 0; trial < trials; ++trial) {
    for (int m : lift_dims) {
      const Matrix t1 = spectrum_in(rng, m, 0.9), t2 = spectrum_in(rng, m, 0.9);
      const Matrix f1 = spectral_lift(f, t1), f2 = spectral_lift(f, t2);
      const Matrix fm = spectral_lift(f, 0.5 * (t1 + t2));
      double scale = 1.0;
      for (const Matrix* a : {&f1, &f2, &fm}) scale = std::max(scale, op_norm(*a));
      const Matrix gap = sign * (fm - 0.5 * (f1 + f2));
      const double viol = -eigh(0.5 * (gap + gap.adjoint())).eigenvalues[0] / scale;
      const double mid = viol / kMidpointTol;

      const double t = rng.uniform(-kLineRange, kLineRange);
      std::vector<double> a = taylor_coefficients(f, t, kChebRadius, 2 * m);
      for (double& v : a) v *= -sign;  // H_m(t; -F) for concave, H_m(t; F) for convex
      const RealMatrix h = hansen_tomiyama(a, m);
      Eigen::SelfAdjointEigenSolver<RealMatrix> es(h);
      const double hscale = std::max({1.0, std::abs(a[0]), es.eigenvalues().cwiseAbs().maxCoeff()});
      const double ht = -es.eigenvalues()[0] / hscale / kHansenTomiyamaTol;

      r.midpoint = std::max(r.midpoint, mid);
      r.ht = std::max(r.ht, ht);
      if ((mid <= 1.0) != (ht <= 1.0)) r.disagree = true;
    }
  }
  return r;
}

void check_lift_dims(const std::vector<int>& lift_dims) {
  if (lift_dims.empty()) throw std::invalid_argument("operator-lines: no lift dimensions");
  for (int m : lift_dims) {
    if (m < 1) throw std::invalid_argument("operator-lines: lift dimensions must be positive");
    if (m > 3) throw DomainError("operator-lines: lift dimension above 3 needs derivatives of order > 6");
  }
}

void check_line_domain(const Matrix& x, const Matrix& y, const DirectionPair& d) {
  const auto psd = [](const Matrix& m) {
    return eigh(0.5 * (m + m.adjoint())).eigenvalues[0] >= -1e-12 * std::max(1.0, op_norm(m));
  };
  if (!psd(x + d.H) || !psd(x - d.H) || !psd(y + d.V) || !psd(y - d.V))
    throw DomainError("operator-lines: need X ± H ⪰ 0 and Y ± V ⪰ 0");
}

}  // namespace

VerificationReport check_operator_concavity_line(const TraceFnParams& params, const Matrix& x,
                                                 const Matrix& y, const DirectionPair& d,
                                                 const std::vector<int>& lift_dims,
                                                 const SampleSpec& spec) {
  spec.validate();
  check_lift_dims(lift_dims);
  check_line_domain(x, y, d);
  Rng rng = Rng::stream(spec.seed, 0);
  const LineResult lr = line_check(params, x, y, d, lift_dims, spec.count, rng);
  Outcome o;
  o.violation = std::max(lr.midpoint, lr.ht);
  o.statistic = lr.disagree ? 1.0 : 0.0;
  append(o.inputs, x);
  append(o.inputs, y);
  append(o.inputs, d.H);
  append(o.inputs, d.V);
  o.label = "midpoint " + fmt(lr.midpoint) + ", hansen-tomiyama " + fmt(lr.ht);
  Accumulator acc(true);
  acc.add({o});
  VerificationReport r = acc.finish("operator-line alpha=" + fmt(params.alpha), 1.0, spec.seed);
  r.samples = spec.count;
  return r;
}

VerificationReport check_operator_lines(double alpha, const std::vector<int>& lift_dims,
                                        const SampleSpec& spec) {
  spec.validate();
  check_lift_dims(lift_dims);
  const TraceFnParams params(alpha);
  Accumulator acc(true);
  for (std::size_t b = 0; b < spec.dims.size(); ++b) {
    const int n = spec.dims[b];
    acc.add(sweep(spec.count, spec.parallel, [&](int k) {
      Rng rng = Rng::stream(spec.seed, stream_index(b, k));
      const Matrix x = random_pd(rng, n, spec.boundary_bias);
      const Matrix y = random_pd(rng, n, spec.boundary_bias);
      const DirectionPair d{admissible_direction(x, rng, pick_scale(rng)),
                            admissible_direction(y, rng, pick_scale(rng))};
      const LineResult lr = line_check(params, x, y, d, lift_dims, 2, rng);
      Outcome o;
      o.violation = std::max(lr.midpoint, lr.ht);
      o.statistic = lr.disagree ? 1.0 : 0.0;
      append(o.inputs, x);
      append(o.inputs, y);
      append(o.inputs, d.H);
      append(o.inputs, d.V);
      o.label = "n=" + std::to_string(n) + " instance " + std::to_string(k) + ": midpoint " +
                fmt(lr.midpoint) + ", hansen-tomiyama " + fmt(lr.ht);
      return o;
    }));
  }
  return acc.finish("operator-lines alpha=" + fmt(alpha), 1.0, spec.seed);
}

// ---------------------------------------------------------------------------
// Kronecker identity

Complex kron_contraction(const Matrix& m, int n) {
  if (m.rows() != n * n || m.cols() != n * n)
    throw DimensionError("kron_contraction: expected an n²×n² matrix");
  Complex s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += m(i * n + i, j * n + j);
  return s;
}

double kron_identity_violation(double alpha, const Matrix& x, const Matrix& y) {
  if (!(alpha >= 1.0 && alpha <= 2.0)) throw DomainError("kron identity needs α ∈ [1, 2]");
  if (x.rows() != y.rows() || x.rows() != x.cols() || y.rows() != y.cols())
    throw DimensionError("kron identity: X and Y must be square of equal size");
  const int n = static_cast<int>(x.rows());
  if (n > 3) throw DimensionError("kron identity: n ≤ 3");
  const Matrix i = identity(n);
  const ScalarFunction g = ScalarFunction::power(1.0 - alpha, -1.0);
  const ScalarFunction h = ScalarFunction::power(1.0 / alpha);
  const Matrix p = composed_perspective(g, h, kron(x, i), kron(y, i), kron(i, y.conjugate()));
  return std::abs(kron_contraction(p, n) + psi_value(TraceFnParams(alpha), x, y));
}

VerificationReport check_kron_identity(double alpha, const Matrix& x, const Matrix& y) {
  Outcome o;
  o.violation = kron_identity_violation(alpha, x, y);
  append(o.inputs, x);
  append(o.inputs, y);
  Accumulator acc;
  acc.add({o});
  return acc.finish("kron-identity alpha=" + fmt(alpha), kKronTol, 0);
}

VerificationReport check_kron_identity(const SampleSpec& spec) {
  spec.validate();
  Accumulator acc;
  std::size_t block = 0;
  for (double alpha : spec.alpha_grid)
    for (int n : spec.dims) {
      const std::size_t b = block++;
      acc.add(sweep(spec.count, spec.parallel, [&](int k) {
        Rng rng = Rng::stream(spec.seed, stream_index(b, k));
        const Matrix x = random_pd(rng, n, spec.boundary_bias);
        const Matrix y = random_pd(rng, n, spec.boundary_bias);
        Outcome o;
        o.violation = kron_identity_violation(alpha, x, y);
        append(o.inputs, x);
        append(o.inputs, y);
        o.label = "alpha=" + fmt(alpha) + " n=" + std::to_string(n) + " sample " +
                  std::to_string(k);
        return o;
      }));
    }
  return acc.finish("kron-identity", kKronTol, spec.seed);
}

// ---------------------------------------------------------------------------
// Derivative consistency

namespace {

struct DerivErrors {
  double first = 0.0, second = 0.0, third = 0.0;
  double normalized() const {
    return std::max({first / kFirstTol, second / kSecondTol, third / kThirdTol});
  }
};

std::string deriv_label(const DerivErrors& e) {
  return "errors " + fmt(e.first) + " / " + fmt(e.second) + " / " + fmt(e.third);
}

}  // namespace

VerificationReport check_derivative_consistency(const SampleSpec& spec) {
  spec.validate();
  Accumulator acc;
  std::size_t block = 0;
  for (double alpha : spec.alpha_grid) {
    const TraceFnParams params(alpha);
    for (int n : spec.dims) {
      const std::size_t b = block++;
      acc.add(sweep(spec.count, spec.parallel, [&](int k) {
        Rng rng = Rng::stream(spec.seed, stream_index(b, k));
        const Matrix x = random_pd(rng, n, spec.boundary_bias);
        const Matrix y = random_pd(rng, n, spec.boundary_bias);
        const DirectionPair d1{admissible_direction(x, rng, 0.5), admissible_direction(y, rng, 0.5)};
        const DirectionPair d2{admissible_direction(x, rng, 0.5), admissible_direction(y, rng, 0.5)};
        const auto shifted = [&](double s) {
          const Matrix xs = x + s * d1.H, ys = y + s * d1.V;
          return std::pair<Matrix, Matrix>(0.5 * (xs + xs.adjoint()), 0.5 * (ys + ys.adjoint()));
        };
        const PsiEvaluator ev(params, x, y);
        const DirectionalDerivatives dd = ev.directional(d1);
        const double first = inner(ev.gradient().X, d1.H) + inner(ev.gradient().Y, d1.V);
        const double second = ev.hessian_bilinear(d1, d2);
        const double fd1 = central([&](double s) {
          const auto [xs, ys] = shifted(s);
          return psi_value(params, xs, ys);
        }, kFdStep);
        const double fd2 = central([&](double s) {
          const auto [xs, ys] = shifted(s);
          const MatrixPair g = psi_gradient(params, xs, ys);
          return inner(g.X, d2.H) + inner(g.Y, d2.V);
        }, kFdStep);
        const double fd3 = central([&](double s) {
          const auto [xs, ys] = shifted(s);
          return psi_hessian_bilinear(params, xs, ys, d1, d1);
        }, kFdStep);
        const double floor = 1e-3 * (1.0 + std::abs(ev.value()));
        DerivErrors e{rel_error(first, fd1, floor), rel_error(second, fd2, floor),
                      rel_error(dd.third, fd3, floor)};
        Outcome o;
        o.violation = e.normalized();
        o.statistic = std::max({e.first, e.second, e.third});
        append(o.inputs, x);
        append(o.inputs, y);
        append(o.inputs, d1.H);
        append(o.inputs, d1.V);
        o.label = "trace-fn alpha=" + fmt(alpha) + " n=" + std::to_string(n) + " sample " +
                  std::to_string(k) + " " + deriv_label(e);
        return o;
      }));
    }
  }
  return acc.finish("derivatives trace-fn", 1.0, spec.seed);
}

VerificationReport check_derivative_consistency(const ConeKind& cone, const SampleSpec& spec) {
  spec.validate();
  require_alpha_cone(cone);
  const auto outcomes = sweep(spec.count, spec.parallel, [&](int k) {
    Rng rng = Rng::stream(spec.seed, static_cast<std::uint64_t>(k));
    const Vector x = sample_interior_point(cone, rng, spec.boundary_bias);
    const BarrierEval bar(cone, x);
    // Unit local norm keeps p ± h·d well inside the Dikin ellipsoid.
    const auto local_unit = [&](Vector d) {
      const double q = d.dot(bar.hessian_apply(d));
      return Vector(d / std::sqrt(q));
    };
    const Vector d1 = local_unit(sample_direction(cone, rng));
    const Vector d2 = local_unit(sample_direction(cone, rng));
    const BarrierDirectional dd = bar.directional(d1);
    const double first = bar.gradient().dot(d1);
    const double second = d2.dot(bar.hessian_apply(d1));
    const double fd1 = central([&](double s) { return BarrierEval(cone, x + s * d1).value(); },
                               kFdStep);
    const double fd2 = central(
        [&](double s) { return BarrierEval(cone, x + s * d1).gradient().dot(d2); }, kFdStep);
    const double fd3 = central(
        [&](double s) { return BarrierEval(cone, x + s * d1).directional(d1).second; }, kFdStep);
    const double floor = 1e-3 * (1.0 + std::abs(bar.value()));
    DerivErrors e{rel_error(first, fd1, floor), rel_error(second, fd2, floor),
                  rel_error(dd.third, fd3, floor)};
    Outcome o;
    o.violation = e.normalized();
    o.statistic = std::max({e.first, e.second, e.third});
    append(o.inputs, x);
    append(o.inputs, d1);
    o.label = cone.name() + " sample " + std::to_string(k) + " " + deriv_label(e);
    return o;
  });
  Accumulator acc;
  acc.add(outcomes);
  return acc.finish("derivatives " + cone.name(), 1.0, spec.seed);
}

// ---------------------------------------------------------------------------
// Suites

std::vector<std::string> suite_names() {
  return {"self-concordance", "barrier-parameter", "log-homogeneity", "compatibility",
          "operator-lines",   "kron-identity",     "scalar-alpha-gt2", "derivatives",
          "conjecture",       "all"};
}

std::vector<ConeKind> barrier_suite_cones() {
  std::vector<ConeKind> cones = {ConeKind::nonneg(1), ConeKind::nonneg(3), ConeKind::psd(2),
                                 ConeKind::psd(3)};
  for (int n : {1, 2, 3}) {
    for (double a : {0.5, 0.6, 0.75, 0.9, 1.0}) cones.push_back(ConeKind::renyi_hypo(n, a));
    for (double a : {1.0, 1.25, 1.5, 1.75, 2.0}) cones.push_back(ConeKind::renyi_epi(n, a));
    for (double a : {0.5, 0.6, 0.75, 0.9}) cones.push_back(ConeKind::renyi_persp_epi(n, a));
  }
  return cones;
}

namespace {

SampleSpec make_spec(std::uint64_t seed, int count, std::vector<int> dims,
                     std::vector<double> alphas, double bias, bool parallel) {
  SampleSpec s;
  s.seed = seed;
  s.count = count;
  s.dims = std::move(dims);
  s.alpha_grid = std::move(alphas);
  s.boundary_bias = bias;
  s.parallel = parallel;
  return s;
}

void run_one(const std::string& suite, std::uint64_t seed, bool parallel,
             std::vector<VerificationReport>& out) {
  if (suite == "self-concordance" || suite == "barrier-parameter") {
    const SampleSpec spec = make_spec(seed, 1000, {1}, {}, 0.5, parallel);
    for (const auto& c : barrier_suite_cones())
      out.push_back(suite == "self-concordance" ? check_self_concordance(c, spec)
                                                : check_barrier_parameter(c, spec));
  } else if (suite == "log-homogeneity") {
    const SampleSpec spec = make_spec(seed, 200, {1}, {}, 0.2, parallel);
    for (const auto& c : barrier_suite_cones()) out.push_back(check_log_homogeneity(c, spec));
  } else if (suite == "compatibility") {
    const SampleSpec spec = make_spec(seed, 500, {1, 2, 3}, {}, 0.3, parallel);
    const struct {
      CompatFamily family;
      std::vector<double> alphas;
    } families[] = {{CompatFamily::PsiConcave, {0.5, 0.6, 0.75, 0.9, 1.0}},
                    {CompatFamily::NegPsi, {1.0, 1.25, 1.5, 1.75, 2.0}},
                    {CompatFamily::NegPerspective, {0.5, 0.6, 0.75, 0.9}}};
    for (const auto& f : families)
      for (double a : f.alphas) {
        out.push_back(check_compatibility(f.family, a, 1.0, spec));
        out.push_back(check_compatibility(f.family, a, 1.1, spec));
      }
    const SampleSpec scalar = make_spec(seed, 500, {1}, {}, 0.3, parallel);
    out.push_back(check_compatibility_fails(CompatFamily::NegPsi, 2.0, 0.9, scalar));
  } else if (suite == "operator-lines") {
    const SampleSpec spec = make_spec(seed, 100, {2}, {}, 0.0, parallel);
    for (double a : {0.6, 0.75, 0.9, 1.25, 1.5, 1.9})
      out.push_back(check_operator_lines(a, {2, 3}, spec));
  } else if (suite == "kron-identity") {
    out.push_back(check_kron_identity(make_spec(seed, 20, {1, 2, 3}, {1.25, 1.5, 2.0}, 0.0,
                                                parallel)));
  } else if (suite == "scalar-alpha-gt2") {
    const SampleSpec spec = make_spec(seed, 2000, {1}, {}, 0.0, parallel);
    for (double a : {2.0, 2.5, 3.0, 5.0})
      for (auto& r : check_scalar_compatibility(a, spec)) out.push_back(std::move(r));
  } else if (suite == "derivatives") {
    out.push_back(check_derivative_consistency(
        make_spec(seed, 50, {1, 2, 3}, {0.5, 0.75, 1.0, 1.5, 2.0}, 0.2, parallel)));
    const SampleSpec spec = make_spec(seed, 50, {1}, {}, 0.2, parallel);
    for (const auto& c : barrier_suite_cones())
      out.push_back(check_derivative_consistency(c, spec));
  } else if (suite == "conjecture") {
    const SampleSpec spec = make_spec(seed, 500, {2, 3}, {}, 0.3, parallel);
    for (double a : {2.5, 3.0, 5.0})
      out.push_back(check_compatibility(CompatFamily::NegPsiExplore, a, (2.0 * a - 1.0) / 3.0,
                                        spec));
  } else {
    throw std::invalid_argument("unknown verification suite: " + suite);
  }
}

}  // namespace

std::vector<VerificationReport> run_suite(const std::string& suite, std::uint64_t seed,
                                          bool parallel) {
  std::vector<VerificationReport> out;
  if (suite == "all") {
    for (const auto& s : suite_names())
      if (s != "all") run_one(s, seed, parallel, out);
  } else {
    run_one(suite, seed, parallel, out);
  }
  return out;
}

bool all_passed(const std::vector<VerificationReport>& reports) {
  return std::all_of(reports.begin(), reports.end(),
                     [](const VerificationReport& r) { return r.informational || r.passed; });
}

}  // namespace renyi
