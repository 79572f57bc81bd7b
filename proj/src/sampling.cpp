#include "renyi/sampling.hpp"

#include <cmath>

namespace renyi {

namespace {

double slack_fraction(Rng& rng, double bias) {
  return rng.uniform(0.05, 1.0) * std::pow(10.0, -6.0 * bias * rng.uniform());
}

}  // namespace

Vector sample_interior_point(const ConeKind& cone, Rng& rng, double boundary_bias) {
  const double cond = std::pow(10.0, 1.0 + 4.0 * boundary_bias * rng.uniform());
  if (cone.type == ConeType::NonNeg) {
    Vector v(cone.n);
    for (int i = 0; i < cone.n; ++i) v[i] = std::exp(rng.uniform(-2.0, 2.0));
    return v;
  }
  const Matrix x = random_positive_definite(rng, cone.n, cond, std::exp(rng.uniform(-1, 1)),
                                            cone.field);
  if (cone.type == ConeType::PSD) return pack(cone, ConePoint::psd(x));
  const Matrix y = random_positive_definite(rng, cone.n, cond, std::exp(rng.uniform(-1, 1)),
                                            cone.field);
  const double psi = psi_value(TraceFnParams(cone.alpha), x, y);
  const double frac = slack_fraction(rng, boundary_bias);
  switch (cone.type) {
    case ConeType::RenyiHypo:
      return pack(cone, ConePoint::renyi(psi - 2.0 * frac * psi, x, y));
    case ConeType::RenyiEpi:
      return pack(cone, ConePoint::renyi(psi + frac * psi, x, y));
    default: {
      const double u = std::exp(rng.uniform(-1.0, 1.0));
      const double d = u * std::log(psi / u) / (cone.alpha - 1.0);
      return pack(cone, ConePoint::perspective(d + frac * std::max(1.0, std::abs(d)), u, x, y));
    }
  }
}

Vector sample_direction(const ConeKind& cone, Rng& rng) {
  Vector d(cone.dim());
  for (int i = 0; i < d.size(); ++i) d[i] = rng.normal();
  return d;
}

}  // namespace renyi
