#include <gtest/gtest.h>

#include "test_util.h"
#include "walkproj/errors.h"
#include "walkproj/gait.h"
#include "walkproj/models.h"

namespace walkproj {
namespace {

using testing::Human;

class GaitGrid : public ::testing::TestWithParam<std::tuple<ModelKind, double, double>> {};

TEST_P(GaitGrid, ResidualAndFootVelocities) {
  const auto [kind, f, v] = GetParam();
  const PhaseLti m = BuildModel(kind, Human());
  const PeriodicGait g = SolvePeriodicGait(m, f, v);
  EXPECT_LE(GaitResidual(m, g), 1e-9);
  EXPECT_NEAR(g.period, 1.0 / f, 1e-15);
  EXPECT_LT(g.qbar.segment(10, 2).norm(), 1e-12);  // stance foot at rest
  EXPECT_LT(g.qbar.segment(6, 2).norm(), 1e-12);   // swing foot at rest
  EXPECT_NEAR(g.footstep.x() * f, v, 1e-9);
}

INSTANTIATE_TEST_SUITE_P(
    Grid, GaitGrid,
    ::testing::Combine(::testing::Values(ModelKind::k3lp, ModelKind::kLip),
                       ::testing::Values(0.8, 1.4, 2.0, 2.6, 3.0),
                       ::testing::Values(0.0, 0.5, 1.0)));

TEST(Gait, InPlaceHasNoSagittalStride) {
  const PhaseLti m = Build3lp(Human());
  const PeriodicGait g = SolvePeriodicGait(m, 2.0, 0.0);
  for (int i = 0; i < 12; i += 2) EXPECT_NEAR(g.qbar[i], 0.0, 1e-12);
  EXPECT_NEAR(g.footstep.x(), 0.0, 1e-12);
}

TEST(Gait, MirrorUnderSpeedReversal) {
  const PhaseLti m = Build3lp(Human());
  const PeriodicGait fwd = SolvePeriodicGait(m, 2.0, 0.8);
  const PeriodicGait bwd = SolvePeriodicGait(m, 2.0, -0.8);
  for (int i = 0; i < 12; ++i) {
    const double sign = i % 2 == 0 ? -1.0 : 1.0;
    EXPECT_NEAR(bwd.qbar[i], sign * fwd.qbar[i], 1e-9);
  }
  EXPECT_NEAR(bwd.ubar[0], -fwd.ubar[0], 1e-9);
  EXPECT_NEAR(bwd.ubar[2], -fwd.ubar[2], 1e-9);
}

TEST(Gait, ScalingIsLinear) {
  const PhaseLti m = Build3lp(Human());
  const PeriodicGait g = SolvePeriodicGait(m, 2.0, 1.0);
  const PeriodicGait same = ScaleGait(g, 1.0);
  EXPECT_EQ(same.qbar, g.qbar);
  const PeriodicGait half = ScaleGait(g, 0.5);
  EXPECT_LE(GaitResidual(m, half), 1e-9);
  const PeriodicGait back = ScaleGait(half, 1.0);
  EXPECT_LT((back.qbar - g.qbar).norm(), 1e-12);
  EXPECT_LT((back.ubar - g.ubar).norm(), 1e-12);
  const PeriodicGait direct = SolvePeriodicGait(m, 2.0, 0.5);
  EXPECT_LT((direct.qbar - half.qbar).norm(), 1e-9);
}

TEST(Gait, Errors) {
  const PhaseLti m = Build3lp(Human());
  EXPECT_THROW(SolvePeriodicGait(m, 0.0, 1.0), ArgumentError);
  EXPECT_THROW(SolvePeriodicGait(m, 2.0, 10.0), DomainError);
  const PeriodicGait g = SolvePeriodicGait(m, 2.0, 1.0);
  EXPECT_THROW(ScaleGait(g, 10.0), DomainError);
}

TEST(Gait, NominalStateEndsAtMirroredStart) {
  const PhaseLti m = Build3lp(Human());
  const SymmetryOps& ops = GetSymmetryOps();
  const PeriodicGait g = SolvePeriodicGait(m, 2.0, 1.0);
  const Eigen::VectorXd end = NominalState(m, g, g.period);
  EXPECT_LT((ops.o * ops.m * ops.s * end - ops.m * g.qbar).norm(), 1e-9);
  EXPECT_LT((NominalState(m, g, 0.0) - g.qbar).norm(), 1e-14);
}

}  // namespace
}  // namespace walkproj
