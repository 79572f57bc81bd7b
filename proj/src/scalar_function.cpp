#include "renyi/scalar_function.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "renyi/errors.hpp"

namespace renyi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_nonnegative_integer(double p) { return p >= 0.0 && std::floor(p) == p; }

// Generic quotient with a midpoint-derivative fallback near coalescence.
constexpr double kFirstOrderCoalesce = 1e-8;

}  // namespace

ScalarFunction ScalarFunction::power(double p, double coef) {
  ScalarFunction f;
  f.kind_ = Kind::Power;
  f.p_ = p;
  f.coef_ = coef;
  f.lower_ = is_nonnegative_integer(p) ? -kInf : 0.0;
  std::ostringstream os;
  os << coef << "*x^" << p;
  f.name_ = os.str();
  return f;
}

ScalarFunction ScalarFunction::log(double coef) {
  ScalarFunction f;
  f.kind_ = Kind::Log;
  f.coef_ = coef;
  f.lower_ = 0.0;
  std::ostringstream os;
  os << coef << "*log(x)";
  f.name_ = os.str();
  return f;
}

ScalarFunction ScalarFunction::affine(double a, double b) {
  ScalarFunction f;
  f.kind_ = Kind::Affine;
  f.coef_ = a;
  f.b_ = b;
  f.lower_ = -kInf;
  std::ostringstream os;
  os << a << "*x+" << b;
  f.name_ = os.str();
  return f;
}

ScalarFunction ScalarFunction::custom(std::array<Evaluator, 4> derivatives, double lower,
                                      std::string name) {
  ScalarFunction f;
  f.kind_ = Kind::Custom;
  f.lower_ = lower;
  f.custom_ = std::make_shared<const std::array<Evaluator, 4>>(std::move(derivatives));
  f.name_ = std::move(name);
  return f;
}

bool ScalarFunction::in_domain(double x) const {
  if (!std::isfinite(x)) return false;
  return lower_ == -kInf ? true : x > lower_;
}

double ScalarFunction::domain_lower() const { return lower_; }

double ScalarFunction::derivative(int order, double x) const {
  if (order < 0 || order > 3) throw std::invalid_argument("derivative order must be in [0, 3]");
  switch (kind_) {
    case Kind::Power: {
      double c = coef_;
      for (int k = 0; k < order; ++k) c *= (p_ - k);
      if (c == 0.0) return 0.0;
      return c * std::pow(x, p_ - order);
    }
    case Kind::Log:
      switch (order) {
        case 0: return coef_ * std::log(x);
        case 1: return coef_ / x;
        case 2: return -coef_ / (x * x);
        default: return 2.0 * coef_ / (x * x * x);
      }
    case Kind::Affine:
      if (order == 0) return coef_ * x + b_;
      return order == 1 ? coef_ : 0.0;
    case Kind::Custom:
      return (*custom_)[order](x);
  }
  return 0.0;
}

ScalarFunction ScalarFunction::derivative_function() const {
  switch (kind_) {
    case Kind::Power:
      if (p_ == 0.0) return affine(0.0, 0.0);
      return power(p_ - 1.0, coef_ * p_);
    case Kind::Log:
      return power(-1.0, coef_);
    case Kind::Affine:
      return affine(0.0, coef_);
    case Kind::Custom:
      break;
  }
  auto d = custom_;
  auto missing = [](double) -> double {
    throw std::logic_error("fourth derivative of a custom ScalarFunction is not available");
  };
  return custom({(*d)[1], (*d)[2], (*d)[3], missing}, lower_, "d/dx " + name_);
}

ScalarFunction ScalarFunction::x_times_derivative() const {
  switch (kind_) {
    case Kind::Power:
      return power(p_, coef_ * p_);
    case Kind::Log:
      return affine(0.0, coef_);
    case Kind::Affine:
      return power(1.0, coef_);
    case Kind::Custom:
      break;
  }
  auto d = custom_;
  // (x g')' = g' + x g'', (x g')'' = 2 g'' + x g''', third needs g'''' and is omitted.
  return custom({[d](double x) { return x * (*d)[1](x); },
                 [d](double x) { return (*d)[1](x) + x * (*d)[2](x); },
                 [d](double x) { return 2.0 * (*d)[2](x) + x * (*d)[3](x); },
                 [](double) -> double {
                   throw std::logic_error("third derivative of x*g'(x) needs g''''");
                 }},
                lower_, "x*d/dx " + name_);
}

ScalarFunction ScalarFunction::transpose() const {
  switch (kind_) {
    case Kind::Power:
      return power(1.0 - p_, coef_);
    case Kind::Affine:
      // x (a/x + b) = a + b x
      return affine(b_, coef_);
    case Kind::Log: {
      // x log(1/x) = -x log x
      const double c = coef_;
      return custom({[c](double x) { return -c * x * std::log(x); },
                     [c](double x) { return -c * (std::log(x) + 1.0); },
                     [c](double x) { return -c / x; },
                     [c](double x) { return c / (x * x); }},
                    0.0, "transpose " + name_);
    }
    case Kind::Custom:
      break;
  }
  // f(x) = x g(1/x): f' = g(1/x) - g'(1/x)/x, f'' = g''(1/x)/x^3,
  // f''' = -3 g''(1/x)/x^4 - g'''(1/x)/x^5.
  auto d = custom_;
  return custom({[d](double x) { return x * (*d)[0](1.0 / x); },
                 [d](double x) { return (*d)[0](1.0 / x) - (*d)[1](1.0 / x) / x; },
                 [d](double x) { return (*d)[2](1.0 / x) / (x * x * x); },
                 [d](double x) {
                   const double x4 = x * x * x * x;
                   return -3.0 * (*d)[2](1.0 / x) / x4 - (*d)[3](1.0 / x) / (x4 * x);
                 }},
                0.0, "transpose " + name_);
}

double ScalarFunction::first_divided_difference(double a, double b) const {
  if (a == b) return derivative(1, a);
  switch (kind_) {
    case Kind::Affine:
      return coef_;
    case Kind::Power:
      if (p_ == 0.0) return 0.0;
      if (a > 0.0 && b > 0.0) {
        // a^(p-1) (r^p - 1)/(r - 1), r = b/a, evaluated through expm1 so that
        // nearby arguments keep full relative accuracy.
        const double ell = std::log1p((b - a) / a);
        const double den = std::expm1(ell);
        if (den != 0.0) return coef_ * std::pow(a, p_ - 1.0) * std::expm1(p_ * ell) / den;
        return derivative(1, 0.5 * (a + b));
      }
      break;
    case Kind::Log:
      return coef_ * std::log1p((b - a) / a) / (b - a);
    case Kind::Custom:
      break;
  }
  const double scale = std::max(std::abs(a), std::abs(b));
  if (std::abs(a - b) <= kFirstOrderCoalesce * scale) return derivative(1, 0.5 * (a + b));
  return (derivative(0, a) - derivative(0, b)) / (a - b);
}

}  // namespace renyi
