#include <gtest/gtest.h>

#include "renyi/barrier.hpp"
#include "renyi/errors.hpp"
#include "renyi/sampling.hpp"
#include "test_support.hpp"

using namespace renyi;
using renyi::testing::fd1;
using renyi::testing::fd2;
using renyi::testing::fd3;
using renyi::testing::rel_err;

namespace {

std::vector<ConeKind> catalogue() {
  return {ConeKind::nonneg(3),
          ConeKind::psd(3),
          ConeKind::psd(2, Field::Real),
          ConeKind::renyi_hypo(1, 0.5),
          ConeKind::renyi_hypo(3, 0.6),
          ConeKind::renyi_hypo(2, 1.0),
          ConeKind::renyi_hypo(3, 0.75, Field::Real),
          ConeKind::renyi_epi(2, 1.0),
          ConeKind::renyi_epi(3, 1.5),
          ConeKind::renyi_epi(2, 2.0, Field::Real),
          ConeKind::renyi_persp_epi(2, 0.5),
          ConeKind::renyi_persp_epi(2, 0.75),
          ConeKind::renyi_persp_epi(3, 0.9, Field::Real)};
}

double value_along(const ConeKind& c, const Vector& x, const Vector& d, double t) {
  return BarrierEval(c, Vector(x + t * d)).value();
}

}  // namespace

TEST(ConeKind, ParametersAndValidation) {
  EXPECT_EQ(barrier_parameter(ConeKind::renyi_hypo(4, 0.75)), 9.0);
  EXPECT_EQ(barrier_parameter(ConeKind::renyi_persp_epi(3, 0.5)), 8.0);
  EXPECT_EQ(barrier_parameter(ConeKind::nonneg(5)), 5.0);
  EXPECT_EQ(barrier_parameter(ConeKind::psd(4)), 4.0);
  EXPECT_EQ(barrier_parameter(ConeKind::renyi_epi(2, 1.5)), 5.0);
  EXPECT_THROW(ConeKind::renyi_hypo(2, 1.5), DomainError);
  EXPECT_THROW(ConeKind::renyi_epi(2, 0.75), DomainError);
  EXPECT_THROW(ConeKind::renyi_persp_epi(2, 1.0), DomainError);
  EXPECT_EQ(ConeKind::renyi_hypo(3, 0.5).dim(), 19);
  EXPECT_EQ(ConeKind::renyi_persp_epi(3, 0.5, Field::Real).dim(), 14);
  for (const auto& c : catalogue()) EXPECT_TRUE(interior_membership(c, c.interior_point()));
}

TEST(InteriorMembership, Examples) {
  const Matrix i2 = identity(2);
  EXPECT_TRUE(interior_membership(ConeKind::renyi_hypo(2, 0.5), ConePoint::renyi(0, i2, i2)));
  EXPECT_FALSE(interior_membership(ConeKind::renyi_hypo(2, 0.5), ConePoint::renyi(2, i2, i2)));
  EXPECT_TRUE(interior_membership(ConeKind::renyi_epi(2, 1.5), ConePoint::renyi(3, i2, i2)));
  EXPECT_FALSE(interior_membership(ConeKind::renyi_epi(2, 1.5), ConePoint::renyi(1.9, i2, i2)));
  EXPECT_FALSE(interior_membership(ConeKind::renyi_persp_epi(2, 0.5),
                                   ConePoint::perspective(1, 0, i2, i2)));
  EXPECT_FALSE(interior_membership(ConeKind::nonneg(2), Vector(Vector::Constant(2, -1.0))));
  EXPECT_THROW(interior_membership(ConeKind::nonneg(2), Vector(Vector::Ones(3))), DimensionError);
}

TEST(BarrierValue, Examples) {
  const Matrix one = identity(1), i2 = identity(2);
  EXPECT_NEAR(barrier_value(ConeKind::renyi_hypo(1, 0.5), ConePoint::renyi(0, one, one)), 0.0,
              1e-15);
  EXPECT_NEAR(barrier_value(ConeKind::renyi_hypo(2, 0.5), ConePoint::renyi(1, 2 * i2, 2 * i2)),
              -std::log(3.0) - 4.0 * std::log(2.0), 1e-13);
  EXPECT_NEAR(barrier_value(ConeKind::renyi_persp_epi(1, 0.5),
                            ConePoint::perspective(1, 1, one, one)),
              0.0, 1e-15);
  EXPECT_THROW(barrier_value(ConeKind::renyi_hypo(2, 0.5), ConePoint::renyi(2, i2, i2)),
               DomainError);
}

TEST(BarrierGradient, Examples) {
  const auto g = barrier_gradient(ConeKind::nonneg(1), ConePoint::nonneg(Vector::Constant(1, 2)));
  EXPECT_DOUBLE_EQ(g.entries[0], -0.5);
  const auto h = barrier_hessian_apply(ConeKind::nonneg(1), ConePoint::nonneg(Vector::Constant(1, 2)),
                                       ConePoint::nonneg(Vector::Constant(1, 1)));
  EXPECT_DOUBLE_EQ(h.entries[0], 0.25);
  const auto s = barrier_hessian_solve(ConeKind::nonneg(1), ConePoint::nonneg(Vector::Constant(1, 2)),
                                       ConePoint::nonneg(Vector::Constant(1, 0.25)));
  EXPECT_DOUBLE_EQ(s.entries[0], 1.0);
  EXPECT_DOUBLE_EQ(barrier_third_directional(ConeKind::nonneg(1),
                                             ConePoint::nonneg(Vector::Constant(1, 1)),
                                             ConePoint::nonneg(Vector::Constant(1, 1))),
                   -2.0);
  Rng rng(201);
  const Matrix hh = random_hermitian(rng, 3);
  EXPECT_NEAR(barrier_third_directional(ConeKind::psd(3), ConePoint::psd(identity(3)),
                                        ConePoint::psd(hh)),
              -2.0 * (hh * hh * hh).trace().real(), 1e-12);
}

TEST(Barrier, FiniteDifferenceConsistency) {
  Rng rng(202);
  for (const auto& cone : catalogue()) {
    for (int trial = 0; trial < 5; ++trial) {
      const Vector x = sample_interior_point(cone, rng, 0.2);
      const BarrierEval ev(cone, x);
      // Unit local norm, so a fixed step stays well inside the Dikin ellipsoid.
      Vector d = sample_direction(cone, rng);
      d /= std::sqrt(d.dot(ev.hessian_apply(d)));
      const double step = 1e-3;
      auto f = [&](double t) { return value_along(cone, x, d, t); };
      const auto dir = ev.directional(d);
      EXPECT_LE(rel_err(ev.gradient().dot(d), fd1(f, step)), 1e-6) << cone.name();
      EXPECT_NEAR(dir.first, ev.gradient().dot(d), 1e-9 * std::max(1.0, std::abs(dir.first)));
      const double q = d.dot(ev.hessian_apply(d));
      EXPECT_LE(rel_err(q, fd2(f, step)), 1e-5) << cone.name();
      EXPECT_NEAR(dir.second, q, 1e-9 * std::max(1.0, q)) << cone.name();
      EXPECT_GT(q, 0.0);
      auto hess_line = [&](double t) {
        const BarrierEval e(cone, Vector(x + t * d));
        return d.dot(e.hessian_apply(d));
      };
      EXPECT_LE(rel_err(dir.third, fd1(hess_line, step)), 1e-6) << cone.name();
      EXPECT_LE(rel_err(dir.third, fd3(f, 4 * step)), 1e-4) << cone.name();

      const Vector d2 = sample_direction(cone, rng);
      const double a = d2.dot(ev.hessian_apply(d)), b = d.dot(ev.hessian_apply(d2));
      EXPECT_LE(std::abs(a - b), 1e-10 * std::max(1.0, std::abs(a))) << cone.name();
    }
  }
}

TEST(Barrier, LogHomogeneityIdentities) {
  Rng rng(203);
  for (const auto& cone : catalogue()) {
    for (int trial = 0; trial < 3; ++trial) {
      const Vector x = sample_interior_point(cone, rng, 0.1);
      const BarrierEval ev(cone, x);
      const double nu = cone.nu();
      EXPECT_NEAR(ev.gradient().dot(x), -nu, 1e-9 * nu) << cone.name();
      const Vector d = sample_direction(cone, rng);
      EXPECT_NEAR(ev.hessian_apply(x).dot(d), -ev.gradient().dot(d),
                  1e-9 * std::max(1.0, std::abs(ev.gradient().dot(d))))
          << cone.name();
      const Vector s = ev.hessian_solve(-ev.gradient());
      EXPECT_LE((s - x).norm(), 1e-8 * std::max(1.0, x.norm())) << cone.name();
      const Vector rhs = sample_direction(cone, rng);
      const Vector sol = ev.hessian_solve(rhs);
      EXPECT_LE((ev.hessian_apply(sol) - rhs).norm(), 1e-8 * rhs.norm()) << cone.name();
      for (double lambda : {0.5, 3.0}) {
        const double lhs = BarrierEval(cone, Vector(lambda * x)).value() - ev.value();
        EXPECT_NEAR(lhs, -nu * std::log(lambda), 1e-10 * std::max(1.0, std::abs(ev.value())))
            << cone.name();
      }
    }
  }
}

TEST(Barrier, SelfConcordanceSmallSample) {
  Rng rng(204);
  for (const auto& cone : catalogue()) {
    for (int trial = 0; trial < 30; ++trial) {
      const Vector x = sample_interior_point(cone, rng, 0.5);
      const Vector d = sample_direction(cone, rng);
      const auto dir = BarrierEval(cone, x).directional(d);
      EXPECT_LE(std::abs(dir.third), 2.0 * std::pow(dir.second, 1.5) * (1 + 1e-7)) << cone.name();
      EXPECT_LE(2 * dir.first - dir.second, cone.nu() * (1 + 1e-9)) << cone.name();
    }
  }
}
