#pragma once

#include <cmath>
#include <functional>

#include "renyi/hermitian.hpp"

namespace renyi::testing {

// Central-difference derivatives of a scalar function of t at 0, each with one
// level of Richardson extrapolation (the leading error term is O(step^2)).
inline double fd1(const std::function<double(double)>& f, double step) {
  auto d = [&](double s) { return (f(s) - f(-s)) / (2.0 * s); };
  return (4.0 * d(step / 2) - d(step)) / 3.0;
}

inline double fd2(const std::function<double(double)>& f, double step) {
  const double f0 = f(0.0);
  auto d = [&](double s) { return (f(s) - 2.0 * f0 + f(-s)) / (s * s); };
  return (4.0 * d(step / 2) - d(step)) / 3.0;
}

// Two Richardson levels: the cubic stencil has too little accuracy otherwise.
inline double fd3(const std::function<double(double)>& f, double step) {
  auto d = [&](double s) {
    return (f(2 * s) - 2.0 * f(s) + 2.0 * f(-s) - f(-2 * s)) / (2.0 * s * s * s);
  };
  const double r1 = (4.0 * d(step / 2) - d(step)) / 3.0;
  const double r2 = (4.0 * d(step / 4) - d(step / 2)) / 3.0;
  return (16.0 * r2 - r1) / 15.0;
}

inline Matrix fd1_matrix(const std::function<Matrix(double)>& f, double step) {
  auto d = [&](double s) -> Matrix { return (f(s) - f(-s)) / (2.0 * s); };
  return (4.0 * d(step / 2) - d(step)) / 3.0;
}

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

inline double rel_err(const Matrix& a, const Matrix& b) {
  return (a - b).norm() / std::max(1.0, std::max(a.norm(), b.norm()));
}

}  // namespace renyi::testing
