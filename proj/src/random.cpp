#include "renyi/random.hpp"

#include <cmath>

namespace renyi {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rng Rng::stream(std::uint64_t seed, std::uint64_t index) {
  return Rng(mix64(seed ^ mix64(index + 0xD1B54A32D192ED03ULL)));
}

std::uint64_t Rng::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // 1 - u keeps the logarithm finite.
  const double r = std::sqrt(-2.0 * std::log(1.0 - uniform()));
  const double theta = 2.0 * M_PI * uniform();
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

Matrix random_hermitian(Rng& rng, int n, Field field) {
  Matrix g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double re = rng.normal();
      const double im = field == Field::Complex ? rng.normal() : 0.0;
      g(i, j) = Complex(re, im);
    }
  return 0.5 * (g + g.adjoint());
}

Matrix random_unitary(Rng& rng, int n, Field field) {
  Matrix g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      g(i, j) = Complex(rng.normal(), field == Field::Complex ? rng.normal() : 0.0);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  // Fix the phases so the distribution does not depend on the QR convention.
  for (int j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

Matrix random_positive_definite(Rng& rng, int n, double cond, double scale, Field field) {
  const Matrix u = random_unitary(rng, n, field);
  RealVector lambda(n);
  for (int i = 0; i < n; ++i) lambda[i] = scale * std::exp(-std::log(cond) * rng.uniform());
  const Matrix x = u * lambda.cast<Complex>().asDiagonal() * u.adjoint();
  return 0.5 * (x + x.adjoint());
}

}  // namespace renyi
