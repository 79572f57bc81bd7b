#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>

namespace renyi {

/// A univariate function on an interval of the real line, together with its
/// first three derivatives. Spectral functions, Fréchet derivatives and
/// divided differences are all driven by this descriptor.
///
/// The closed families (power, log, affine) know their own derivatives and
/// use cancellation-free first divided differences; `custom` wraps arbitrary
/// callables.
class ScalarFunction {
 public:
  enum class Kind { Power, Log, Affine, Custom };

  using Evaluator = std::function<double(double)>;

  /// coef * x^p. Integer p >= 0 is defined on all of R, otherwise on (0, inf).
  static ScalarFunction power(double p, double coef = 1.0);
  /// -x^p.
  static ScalarFunction neg_power(double p) { return power(p, -1.0); }
  /// coef * log(x) on (0, inf).
  static ScalarFunction log(double coef = 1.0);
  /// a * x + b on R.
  static ScalarFunction affine(double a, double b);
  /// Arbitrary function given by value and derivative evaluators (orders 0..3).
  /// The domain is (lower, inf), or R when lower is -inf.
  static ScalarFunction custom(std::array<Evaluator, 4> derivatives, double lower,
                               std::string name);

  Kind kind() const { return kind_; }
  double exponent() const { return p_; }
  double coefficient() const { return coef_; }
  const std::string& name() const { return name_; }

  double operator()(double x) const { return derivative(0, x); }
  /// k-th derivative, 0 <= k <= 3.
  double derivative(int order, double x) const;

  bool in_domain(double x) const;
  /// Infimum of the domain (-inf for functions on R).
  double domain_lower() const;

  /// g' as a descriptor.
  ScalarFunction derivative_function() const;
  /// x -> x g'(x).
  ScalarFunction x_times_derivative() const;
  /// x -> x g(1/x), defined on (0, inf).
  ScalarFunction transpose() const;

  /// g[a, b] = (g(a) - g(b)) / (a - b), and g'(a) when a == b.
  double first_divided_difference(double a, double b) const;

 private:
  ScalarFunction() = default;

  Kind kind_ = Kind::Affine;
  double p_ = 0.0;     // exponent for Power
  double coef_ = 1.0;  // multiplier for Power/Log, slope for Affine
  double b_ = 0.0;     // intercept for Affine
  double lower_ = 0.0;
  std::shared_ptr<const std::array<Evaluator, 4>> custom_;
  std::string name_;
};

}  // namespace renyi
