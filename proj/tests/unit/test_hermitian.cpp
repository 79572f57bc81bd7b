#include <gtest/gtest.h>

#include "renyi/errors.hpp"
#include "renyi/hermitian.hpp"
#include "renyi/random.hpp"
#include "test_support.hpp"

using namespace renyi;
using renyi::testing::fd1_matrix;
using renyi::testing::rel_err;

namespace {

Matrix diag(std::initializer_list<double> v) {
  RealVector d(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double x : v) d[i++] = x;
  return d.cast<Complex>().asDiagonal();
}

const Complex I(0.0, 1.0);

}  // namespace

TEST(ScalarFunction, DerivativesMatchFiniteDifferences) {
  std::vector<ScalarFunction> fs = {ScalarFunction::power(0.5), ScalarFunction::power(1.7, -2.0),
                                    ScalarFunction::power(-0.3), ScalarFunction::log(),
                                    ScalarFunction::log().transpose(),
                                    ScalarFunction::power(0.25).transpose()};
  for (const auto& f : fs) {
    for (double x : {0.1, 0.7, 2.0, 10.0}) {
      for (int k = 1; k <= 3; ++k) {
        const double h = 1e-4 * x;
        auto fk = [&](double t) { return f.derivative(k - 1, x + t); };
        const double fd = renyi::testing::fd1(fk, h);
        EXPECT_LE(std::abs(fd - f.derivative(k, x)), 1e-6 * std::max(1.0, std::abs(fd)))
            << f.name() << " order " << k << " at " << x;
      }
    }
  }
}

TEST(ScalarFunction, GtildeIsXTimesGprime) {
  const auto g = ScalarFunction::power(0.75);
  const auto gt = g.x_times_derivative();
  const auto gp = g.derivative_function();
  for (double x : {0.2, 1.0, 3.3}) EXPECT_NEAR(gt(x), x * gp(x), 1e-12);
}

TEST(ScalarFunction, DividedDifferenceNearCoalescence) {
  const auto f = ScalarFunction::power(0.5);
  const double a = 2.0, b = 2.0 + 1e-13;
  EXPECT_NEAR(f.first_divided_difference(a, b), 0.5 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(f.first_divided_difference(1.0, 4.0), 1.0 / 3.0, 1e-15);
  // Second and third order against closed forms for x^3: f[a,b,c] = a+b+c.
  const auto c = ScalarFunction::power(3.0);
  EXPECT_NEAR(divided_difference(c, 1.0, 2.0, 4.0), 7.0, 1e-12);
  EXPECT_NEAR(divided_difference(c, 1.0, 1.0 + 1e-9, 4.0), 6.0, 1e-6);
  EXPECT_NEAR(divided_difference(c, 1.0, 2.0, 3.0, 5.0), 1.0, 1e-12);
  EXPECT_NEAR(divided_difference(c, 2.0, 2.0, 2.0, 2.0), 1.0, 1e-12);
}

TEST(Hermitize, Examples) {
  EXPECT_EQ(hermitize(identity(2)), identity(2));
  Matrix m(2, 2);
  m << 0.0, I, 0.0, 0.0;
  Matrix expected(2, 2);
  expected << 0.0, 0.5 * I, -0.5 * I, 0.0;
  EXPECT_LE((hermitize(m) - expected).norm(), 1e-15);
  EXPECT_THROW(checked_hermitian(m), DomainError);
  Rng rng(7);
  const Matrix x = random_hermitian(rng, 4);
  EXPECT_EQ(hermitize(x), x);
  EXPECT_THROW(hermitize(Matrix::Zero(2, 3)), DimensionError);
}

TEST(Eigh, Examples) {
  auto e = eigh(diag({3, 1}));
  EXPECT_DOUBLE_EQ(e.eigenvalues[0], 1.0);
  EXPECT_DOUBLE_EQ(e.eigenvalues[1], 3.0);
  Matrix px(2, 2);
  px << 0, 1, 1, 0;
  e = eigh(px);
  EXPECT_NEAR(e.eigenvalues[0], -1.0, 1e-15);
  EXPECT_NEAR(e.eigenvalues[1], 1.0, 1e-15);
  Rng rng(11);
  const Matrix x = random_hermitian(rng, 8);
  e = eigh(x);
  EXPECT_LE((e.reconstruct() - x).norm() / x.norm(), 1e-10);
  EXPECT_LE((e.unitary.adjoint() * e.unitary - identity(8)).norm(), 1e-10);
  for (int i = 1; i < 8; ++i) EXPECT_LE(e.eigenvalues[i - 1], e.eigenvalues[i]);
}

TEST(SpectralApply, Examples) {
  Matrix px(2, 2);
  px << 0, 1, 1, 0;
  EXPECT_LE((spectral_apply(ScalarFunction::power(2.0), px) - identity(2)).norm(), 1e-14);
  EXPECT_LE(spectral_apply(ScalarFunction::log(), identity(3)).norm(), 1e-15);
  EXPECT_LE((spectral_apply(ScalarFunction::power(0.5), diag({4, 9})) - diag({2, 3})).norm(),
            1e-14);
  EXPECT_THROW(spectral_apply(ScalarFunction::log(), diag({1, -1})), DomainError);
}

TEST(SpectralApply, UnitaryCovariance) {
  Rng rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix x = random_positive_definite(rng, 5, 20.0);
    const Matrix u = random_unitary(rng, 5);
    for (const auto& g : {ScalarFunction::power(0.3), ScalarFunction::log()}) {
      const Matrix lhs = spectral_apply(g, Matrix(u * x * u.adjoint()));
      const Matrix rhs = u * spectral_apply(g, x) * u.adjoint();
      EXPECT_LE((lhs - rhs).norm(), 1e-10);
    }
  }
}

TEST(Frechet, Examples) {
  Rng rng(5);
  const Matrix x = random_hermitian(rng, 4);
  const Matrix h = random_hermitian(rng, 4);
  const Matrix d = frechet_derivative(ScalarFunction::power(2.0), x, {h}, 1);
  EXPECT_LE((d - (x * h + h * x)).norm(), 1e-12);
  EXPECT_LE((frechet_derivative(ScalarFunction::log(), identity(4), {h}, 1) - h).norm(), 1e-14);
  Matrix px(2, 2);
  px << 0, 1, 1, 0;
  const Matrix s = frechet_derivative(ScalarFunction::power(0.5), diag({1, 4}), {px}, 1);
  EXPECT_NEAR(s(0, 1).real(), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(s(1, 0).real(), 1.0 / 3.0, 1e-15);
  EXPECT_THROW(frechet_derivative(ScalarFunction::log(), x, {h}, 3), std::invalid_argument);
}

TEST(Frechet, AgreesWithFiniteDifferences) {
  Rng rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix x = random_positive_definite(rng, 4, 10.0);
    const Matrix h = random_hermitian(rng, 4);
    const Matrix k = random_hermitian(rng, 4);
    for (const auto& g : {ScalarFunction::power(0.5), ScalarFunction::log(),
                          ScalarFunction::power(1.5)}) {
      auto gx = [&](double t) { return spectral_apply(g, Matrix(x + t * h)); };
      EXPECT_LE(rel_err(frechet_derivative(g, x, {h}, 1), fd1_matrix(gx, 1e-3)), 1e-7);
      auto dgx = [&](double t) { return frechet_derivative(g, Matrix(x + t * k), {h}, 1); };
      const Matrix d2 = frechet_derivative(g, x, {h, k}, 2);
      EXPECT_LE(rel_err(d2, fd1_matrix(dgx, 1e-3)), 1e-7);
      EXPECT_LE((d2 - frechet_derivative(g, x, {k, h}, 2)).norm(), 1e-12);
    }
  }
}

TEST(Frechet, ThirdOrderTensor) {
  Rng rng(10);
  const Matrix x = random_positive_definite(rng, 3, 5.0);
  const Matrix h = random_hermitian(rng, 3);
  const auto g = ScalarFunction::power(0.3);
  const EigenDecomposition e = eigh(x);
  const DividedDifferences dd(g, e.eigenvalues, 2);
  const Matrix d3 = e.from_eigenbasis(dd.third_order(e.to_eigenbasis(h)));
  auto d2 = [&](double t) { return frechet_derivative(g, Matrix(x + t * h), {h, h}, 2); };
  EXPECT_LE(rel_err(d3, fd1_matrix(d2, 1e-3)), 1e-7);
}

TEST(Kron, Examples) {
  EXPECT_EQ(kron(identity(2), identity(2)), identity(4));
  EXPECT_EQ(kron(diag({1, 2}), diag({3, 4})), diag({3, 4, 6, 8}));
  Rng rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix x = random_positive_definite(rng, 2);
    const Matrix y = random_positive_definite(rng, 2);
    const auto p = ScalarFunction::power(0.5);
    EXPECT_LE((spectral_apply(p, kron(x, y)) - kron(spectral_apply(p, x), spectral_apply(p, y)))
                  .norm(),
              1e-12);
    EXPECT_GE(eigh(kron(x, y)).eigenvalues[0], -1e-12);
  }
}

TEST(DirectSum, Examples) {
  EXPECT_EQ(direct_sum(diag({1}), diag({2})), diag({1, 2}));
  Rng rng(17);
  const Matrix x = random_positive_definite(rng, 2);
  const Matrix y = random_positive_definite(rng, 3);
  const auto g = ScalarFunction::log();
  EXPECT_LE((spectral_apply(g, direct_sum(x, y)) -
             direct_sum(spectral_apply(g, x), spectral_apply(g, y)))
                .norm(),
            1e-12);
  RealVector both(5);
  both << eigh(x).eigenvalues, eigh(y).eigenvalues;
  std::sort(both.data(), both.data() + 5);
  EXPECT_LE((eigh(direct_sum(x, y)).eigenvalues - both).norm(), 1e-12);
}

TEST(PartialTrace, Examples) {
  EXPECT_EQ(partial_trace(kron(diag({1, 2}), identity(2)), 2, 2, 2), diag({2, 4}));
  EXPECT_EQ(partial_trace(identity(4), 1, 2, 2), 2.0 * identity(2));
  Rng rng(19);
  const Matrix x = random_hermitian(rng, 2);
  const Matrix y = random_hermitian(rng, 3);
  EXPECT_LE((partial_trace(kron(x, y), 1, 2, 3) - x.trace() * y).norm(), 1e-12);
  EXPECT_LE((partial_trace(kron(x, y), 2, 2, 3) - y.trace() * x).norm(), 1e-12);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix m = random_hermitian(rng, 6);
    const Matrix a = random_hermitian(rng, 2);
    const Matrix b = random_hermitian(rng, 3);
    EXPECT_NEAR(inner(partial_trace(m, 2, 2, 3), a), inner(m, kron(a, identity(3))), 1e-12);
    EXPECT_NEAR(inner(partial_trace(m, 1, 2, 3), b), inner(m, kron(identity(2), b)), 1e-12);
  }
  EXPECT_THROW(partial_trace(identity(5), 1, 2, 2), DimensionError);
}

TEST(Svec, RoundTripAndInnerProduct) {
  Rng rng(23);
  for (Field field : {Field::Real, Field::Complex}) {
    const Matrix a = random_hermitian(rng, 4, field);
    const Matrix b = random_hermitian(rng, 4, field);
    const auto va = svec(a, field), vb = svec(b, field);
    EXPECT_EQ(va.size(), svec_size(4, field));
    EXPECT_NEAR(va.dot(vb), inner(a, b), 1e-12);
    EXPECT_LE((smat(va, 4, field) - a).norm(), 1e-14);
  }
  Matrix m(2, 2);
  m << 1.0, Complex(2.0, 3.0), Complex(2.0, -3.0), 4.0;
  const auto v = svec(m, Field::Complex);
  ASSERT_EQ(v.size(), 4);
  EXPECT_DOUBLE_EQ(v[0], 1.0);
  EXPECT_DOUBLE_EQ(v[1], 2.0 * M_SQRT2);
  EXPECT_DOUBLE_EQ(v[2], 3.0 * M_SQRT2);
  EXPECT_DOUBLE_EQ(v[3], 4.0);
}

TEST(Rng, DeterministicStreams) {
  Rng a = Rng::stream(42, 3), b = Rng::stream(42, 3), c = Rng::stream(42, 4);
  for (int i = 0; i < 10; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    EXPECT_NE(x, c.next_u64());
  }
  Rng r(1);
  double sum = 0.0, sq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.03);
  EXPECT_NEAR(sq / n, 1.0, 0.05);
}
