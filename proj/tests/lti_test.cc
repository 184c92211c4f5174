#include <random>

#include <gtest/gtest.h>

#include "test_util.h"
#include "walkproj/errors.h"
#include "walkproj/lti.h"
#include "walkproj/models.h"

namespace walkproj {
namespace {

using testing::Human;
using testing::RelErr;
using testing::Rk4;

TEST(Expm, Rotation) {
  Eigen::Matrix2d g;
  g << 0, -1, 1, 0;
  for (double t : {0.0, 0.3, 2.0, 25.0}) {
    Eigen::Matrix2d r;
    r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    EXPECT_LT((Expm(g, t) - r).norm(), 1e-12 * std::max(1.0, t));
  }
}

TEST(Expm, Nilpotent) {
  Eigen::Matrix3d n = Eigen::Matrix3d::Zero();
  n(0, 1) = 1.0;
  n(1, 2) = 1.0;
  Eigen::Matrix3d ref = Eigen::Matrix3d::Identity() + 2.0 * n + 2.0 * n * n;
  EXPECT_LT((Expm(n, 2.0) - ref).norm(), 1e-14);
}

TEST(Expm, MatchesEigendecomposition) {
  std::mt19937 rng(3);
  std::normal_distribution<double> g;
  Eigen::MatrixXd v(5, 5);
  for (int i = 0; i < 25; ++i) v(i / 5, i % 5) = g(rng);
  const Eigen::VectorXd d = (Eigen::VectorXd(5) << -3.0, -0.5, 0.1, 1.2, 4.0).finished();
  const Eigen::MatrixXd a = v * d.asDiagonal() * v.inverse();
  const Eigen::MatrixXd ref = v * d.array().exp().matrix().asDiagonal() * v.inverse();
  EXPECT_LT(RelErr(Expm(a), ref), 1e-11);
}

TEST(Expm, RejectsNonSquare) {
  EXPECT_THROW(Expm(Eigen::MatrixXd::Ones(2, 3)), ArgumentError);
}

class TransitionOracle : public ::testing::TestWithParam<ModelKind> {};

TEST_P(TransitionOracle, MatchesRk4) {
  const PhaseLti m = BuildModel(GetParam(), Human());
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (double horizon : {0.1, 0.33, 0.5}) {
    const TransitionSet ts = Transition(m, horizon);
    for (int trial = 0; trial < 4; ++trial) {
      Eigen::VectorXd q0(m.state_dim()), u(m.input_dim()), w(m.push_dim());
      for (auto& x : q0) x = 0.4 * uni(rng);
      for (auto& x : u) x = 60.0 * uni(rng);
      for (auto& x : w) x = 100.0 * uni(rng);
      const double d = trial % 2 ? -1.0 : 1.0;
      const Eigen::VectorXd q = ts.a * q0 + ts.b * u + ts.c * d + ts.w * w;
      EXPECT_LT(RelErr(q, Rk4(m, q0, u, d, w, 0.0, horizon)), 1e-8);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Models, TransitionOracle,
                         ::testing::Values(ModelKind::k3lp, ModelKind::kLip));

TEST(Transition, ZeroHorizonIsIdentity) {
  const PhaseLti m = Build3lp(Human());
  const TransitionSet ts = Transition(m, 0.0);
  EXPECT_TRUE(ts.a.isIdentity(1e-15));
  EXPECT_LT(ts.b.norm(), 1e-15);
  EXPECT_LT(ts.c.norm(), 1e-15);
  EXPECT_THROW(Transition(m, -0.1), ArgumentError);
}

TEST(RampShift, SplitPropagationComposes) {
  const PhaseLti m = Build3lp(Human());
  Eigen::VectorXd q0 = Eigen::VectorXd::LinSpaced(12, -0.3, 0.4);
  Eigen::VectorXd u(4);
  u << 40.0, -10.0, -150.0, 25.0;
  const double t1 = 0.17, t = 0.45;
  const Eigen::VectorXd whole = Propagate(m, q0, u, 1.0, std::nullopt, t);
  const Eigen::VectorXd first = Propagate(m, q0, u, 1.0, std::nullopt, t1);
  const TransitionSet rest = Transition(m, t - t1);
  const Eigen::VectorXd split = rest.a * first + rest.b * (RampShift(2, t1) * u) + rest.c;
  EXPECT_LT(RelErr(split, whole), 1e-12);
}

TEST(Propagate, PushWindowMatchesPiecewiseRk4) {
  const PhaseLti m = Build3lp(Human());
  const Eigen::VectorXd q0 = Eigen::VectorXd::LinSpaced(12, 0.2, -0.1);
  Eigen::VectorXd u(4);
  u << 55.0, 0.0, -220.0, 0.0;
  const Eigen::Vector2d f(120.0, -40.0);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
  const Eigen::VectorXd q = Propagate(m, q0, u, -1.0, PushWindow{f, 0.1, 0.25}, 0.5);
  Eigen::VectorXd r = Rk4(m, q0, u, -1.0, zero, 0.0, 0.1);
  r = Rk4(m, r, u, -1.0, f, 0.1, 0.25);
  r = Rk4(m, r, u, -1.0, zero, 0.25, 0.5);
  EXPECT_LT(RelErr(q, r), 1e-8);
}

TEST(Propagate, RejectsBadArguments) {
  const PhaseLti m = Build3lp(Human());
  const Eigen::VectorXd q0 = Eigen::VectorXd::Zero(12);
  const Eigen::VectorXd u = Eigen::VectorXd::Zero(4);
  EXPECT_THROW(Propagate(m, Eigen::VectorXd::Zero(5), u, 1.0, std::nullopt, 0.1), ArgumentError);
  EXPECT_THROW(Propagate(m, q0, Eigen::VectorXd::Zero(3), 1.0, std::nullopt, 0.1), ArgumentError);
  EXPECT_THROW(Propagate(m, q0, u, 1.0, PushWindow{Eigen::Vector2d(1, 0), 0.0, 0.3}, 0.2),
               ArgumentError);
}

TEST(PhaseLti, ValidateCatchesShapes) {
  PhaseLti m = Build3lp(Human());
  EXPECT_NO_THROW(m.Validate());
  m.cd = Eigen::VectorXd::Zero(4);
  EXPECT_THROW(m.Validate(), ArgumentError);
}

}  // namespace
}  // namespace walkproj
