#include "walkproj/gait.h"

#include <cmath>
#include <string>

#include "walkproj/errors.h"
#include "walkproj/models.h"

namespace walkproj {

namespace {

Eigen::Vector2d FootstepAt(const TransitionSet& ts, const Eigen::VectorXd& q,
                           const Eigen::VectorXd& u, double d) {
  const Eigen::VectorXd qt = ts.a * q + ts.b * u + ts.c * d;
  return {qt(0) - q(4), qt(1) - q(5)};
}

void SetSpeed(PeriodicGait& g, double speed) {
  g.speed = speed;
  g.qbar = g.q_base + speed * g.q_slope;
  g.ubar = g.u_base + speed * g.u_slope;
  g.footstep = g.footstep_base + speed * g.footstep_slope;
}

void CheckReach(const PeriodicGait& g) {
  if (g.footstep.lpNorm<1>() > g.reach_l1) {
    throw DomainError("speed " + std::to_string(g.speed) +
                      " m/s needs a step beyond the reachable region (" +
                      std::to_string(g.footstep(0)) + ", " + std::to_string(g.footstep(1)) + ")");
  }
}

}  // namespace

PeriodicGait SolvePeriodicGait(const PhaseLti& model, double frequency,
                               double speed, double reach_l1) {
  if (!(frequency > 0.0) || !std::isfinite(frequency)) {
    throw ArgumentError("step frequency must be positive");
  }
  if (!std::isfinite(speed)) throw ArgumentError("speed must be finite");
  const SymmetryOps& ops = GetSymmetryOps();
  const double period = 1.0 / frequency;
  const TransitionSet ts = Transition(model, period);
  const Eigen::MatrixXd oms = ops.o * ops.m * ops.s;
  const int nq = model.state_dim();
  const int nu = model.input_dim();
  const int nz = nq + nu;

  Eigen::MatrixXd lhs = Eigen::MatrixXd::Zero(12, nz);
  lhs.block(0, 0, 8, nq) = ops.m - oms * ts.a;
  lhs.block(0, nq, 8, nu) = -oms * ts.b;
  lhs.block(8, 0, 4, nq) = ops.n;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(12);
  rhs.head(8) = oms * ts.c;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(lhs, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > kGaitRankTol * sv(0)) ++rank;
  }
  const int nullity = nz - rank;
  if (nullity != kGaitNullity) {
    throw DesignError("periodic gait system has null space of dimension " +
                      std::to_string(nullity));
  }
  const Eigen::MatrixXd basis = svd.matrixV().rightCols(nullity);
  const Eigen::VectorXd zp = svd.solve(rhs);

  // Linear side conditions on the null-space coordinates a:
  //   stance foot at the origin, sagittal stride = v T.
  auto stride_row = [&](const Eigen::MatrixXd& z) -> Eigen::MatrixXd {
    return (ts.a * z.topRows(nq) + ts.b * z.bottomRows(nu)).row(0) - z.row(4);
  };
  Eigen::MatrixXd cons(3, nullity);
  cons.row(0) = basis.row(4);
  cons.row(1) = basis.row(5);
  cons.row(2) = stride_row(basis);
  const double stride_p =
      (ts.a * zp.head(nq) + ts.b * zp.tail(nu) + ts.c)(0) - zp(4);
  // Right-hand side is affine in speed: d0 + v d1.
  const Eigen::Vector3d d0(-zp(4), -zp(5), -stride_p);
  const Eigen::Vector3d d1(0.0, 0.0, period);

  // Minimum input norm subject to the side conditions.
  const Eigen::MatrixXd zu = basis.bottomRows(nu);
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(nullity + 3, nullity + 3);
  kkt.topLeftCorner(nullity, nullity) = zu.transpose() * zu;
  kkt.topRightCorner(nullity, 3) = cons.transpose();
  kkt.bottomLeftCorner(3, nullity) = cons;
  Eigen::MatrixXd kr = Eigen::MatrixXd::Zero(nullity + 3, 2);
  kr.col(0).head(nullity) = -zu.transpose() * zp.tail(nu);
  kr.col(0).tail(3) = d0;
  kr.col(1).tail(3) = d1;
  const Eigen::MatrixXd ksol = kkt.completeOrthogonalDecomposition().solve(kr);

  Eigen::VectorXd z0 = zp + basis * ksol.col(0).head(nullity);
  Eigen::VectorXd z1 = basis * ksol.col(1).head(nullity);

  // Directions that change neither the side conditions nor the inputs
  // (zero-torque gait families) are fixed by the smallest event state.
  Eigen::MatrixXd flat_sys(3 + nu, nullity);
  flat_sys << cons, zu;
  Eigen::JacobiSVD<Eigen::MatrixXd> flat_svd(flat_sys, Eigen::ComputeFullV);
  flat_svd.setThreshold(kGaitRankTol);
  const int n_flat = nullity - static_cast<int>(flat_svd.rank());
  if (n_flat > 0) {
    const Eigen::MatrixXd zf = (basis * flat_svd.matrixV().rightCols(n_flat)).topRows(nq);
    const auto qr = zf.colPivHouseholderQr();
    const Eigen::MatrixXd full = basis * flat_svd.matrixV().rightCols(n_flat);
    z0 -= full * qr.solve(z0.head(nq));
    z1 -= full * qr.solve(z1.head(nq));
  }

  PeriodicGait g;
  g.period = period;
  g.dbar = 1.0;
  g.q_base = z0.head(nq);
  g.u_base = z0.tail(nu);
  g.q_slope = z1.head(nq);
  g.u_slope = z1.tail(nu);
  // Default: the 1.7 m diamond of a 0.9 m leg, scaled with the leg.
  g.reach_l1 = reach_l1 > 0.0 ? reach_l1 : model.leg_length * 1.7 / 0.9;
  g.footstep_base = FootstepAt(ts, g.q_base, g.u_base, g.dbar);
  g.footstep_slope = FootstepAt(ts, g.q_slope, g.u_slope, 0.0);
  SetSpeed(g, speed);
  CheckReach(g);
  return g;
}

PeriodicGait ScaleGait(const PeriodicGait& gait, double speed) {
  if (!std::isfinite(speed)) throw ArgumentError("speed must be finite");
  PeriodicGait g = gait;
  SetSpeed(g, speed);
  CheckReach(g);
  return g;
}

double GaitResidual(const PhaseLti& model, const PeriodicGait& gait) {
  const SymmetryOps& ops = GetSymmetryOps();
  const TransitionSet ts = Transition(model, gait.period);
  const Eigen::VectorXd end = ts.a * gait.qbar + ts.b * gait.ubar + ts.c * gait.dbar;
  Eigen::VectorXd r(12);
  r.head(8) = ops.m * gait.qbar - ops.o * ops.m * ops.s * end;
  r.tail(4) = ops.n * gait.qbar;
  return r.norm();
}

Eigen::VectorXd NominalState(const PhaseLti& model, const PeriodicGait& gait,
                             double t) {
  const TransitionSet ts = Transition(model, t);
  return ts.a * gait.qbar + ts.b * gait.ubar + ts.c * gait.dbar;
}

}  // namespace walkproj
