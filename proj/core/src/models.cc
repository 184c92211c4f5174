#include "walkproj/models.h"

#include <cmath>

#include "walkproj/errors.h"

namespace walkproj {

namespace {

// Accelerations of the pelvis and of the swing foot for one horizontal axis,
// as rows over (pelvis, swing, stance, d, swing torque, push).
struct AxisRows {
  Eigen::Matrix<double, 1, 6> pelvis;
  Eigen::Matrix<double, 1, 6> swing;
};

AxisRows SolveAxis(const BodyParams& p, bool lateral) {
  const double g = p.gravity;
  const double len = p.leg_length;
  const double m2 = p.leg_mass_fraction * p.mass;
  const double m1 = p.mass - 2.0 * m2;
  const double inertia = m2 * len * len / 12.0;
  const double lt = p.torso_com_fraction * (p.height - p.leg_length);
  const double sig_s = lateral ? -0.5 * p.pelvis_width : 0.0;
  const double sig_w = lateral ? 0.5 * p.pelvis_width : 0.0;
  const double c = -(2.0 * m1 + 3.0 * m2) * g / 2.0;

  // Unknowns: pelvis acc, swing foot acc, swing hip force, stance ground
  // force, stance hip force, stance hip torque (all horizontal).
  Eigen::Matrix<double, 6, 6> lhs = Eigen::Matrix<double, 6, 6>::Zero();
  Eigen::Matrix<double, 6, 6> rhs = Eigen::Matrix<double, 6, 6>::Zero();
  // Swing leg translation.
  lhs.row(0) << m2 / 2, m2 / 2, -1, 0, 0, 0;
  // Swing leg rotation about its midpoint.
  lhs.row(1) << -inertia / len, inertia / len, len / 2, 0, 0, 0;
  rhs.row(1) << m2 * g / 2, -m2 * g / 2, 0, m2 * g / 2 * sig_w, 1, 0;
  // Stance leg translation.
  lhs.row(2) << m2 / 2, 0, 0, -1, -1, 0;
  // Stance leg rotation.
  lhs.row(3) << -inertia / len, 0, 0, -len / 2, len / 2, -1;
  rhs.row(3) << c, 0, -c, c * sig_s, 0, 0;
  // Torso translation, push applied here.
  lhs.row(4) << m1, 0, 1, 0, 1, 0;
  rhs.row(4) << 0, 0, 0, 0, 0, 1;
  // Torso held upright.
  lhs.row(5) << 0, 0, lt, 0, lt, 1;
  rhs.row(5) << 0, 0, 0, (m1 + m2) * g * sig_s - m2 * g * sig_w, -1, 0;

  const Eigen::Matrix<double, 6, 6> sol = lhs.fullPivLu().solve(rhs);
  return {sol.row(0), sol.row(1)};
}

Eigen::MatrixXd Sx() {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(6, 6);
  s.block(0, 4, 2, 2).setIdentity();
  s.block(2, 2, 2, 2).setIdentity();
  s.block(4, 0, 2, 2).setIdentity();
  return s;
}

Eigen::MatrixXd BlockDiag2(const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(2 * b.rows(), 2 * b.cols());
  out.topLeftCorner(b.rows(), b.cols()) = b;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

SymmetryOps BuildOps() {
  const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
  SymmetryOps ops;
  ops.s = BlockDiag2(Sx());

  Eigen::MatrixXd mx = Eigen::MatrixXd::Zero(4, 6);
  mx.block(0, 0, 2, 2) = -id;
  mx.block(0, 2, 2, 2) = id;
  mx.block(2, 2, 2, 2) = id;
  mx.block(2, 4, 2, 2) = -id;
  ops.m = BlockDiag2(mx);

  ops.n = Eigen::MatrixXd::Zero(4, 12);
  ops.n.block(0, 6, 2, 2) = id;
  ops.n.block(2, 10, 2, 2) = id;

  ops.o = Eigen::VectorXd::LinSpaced(8, 0, 7)
              .unaryExpr([](double i) { return std::fmod(i, 2.0) == 0 ? 1.0 : -1.0; })
              .asDiagonal();

  Eigen::MatrixXd mhx = Eigen::MatrixXd::Zero(6, 4);
  mhx.block(0, 0, 2, 2) = -id;
  mhx.block(0, 2, 2, 2) = id;
  mhx.block(2, 2, 2, 2) = id;
  ops.mhat = BlockDiag2(mhx);

  ops.chat = Eigen::MatrixXd::Zero(2, 8);
  ops.chat.block(0, 4, 2, 2) = -id;
  ops.chat.block(0, 6, 2, 2) = id;

  ops.o_input = Eigen::Vector4d(1, -1, 1, -1).asDiagonal();

  ops.reset = Eigen::MatrixXd::Identity(8, 8);
  ops.reset.block(6, 6, 2, 2).setZero();
  ops.reset.block(6, 4, 2, 2) = id;
  return ops;
}

}  // namespace

BodyParams BodyParams::Human(double mass, double height) {
  BodyParams p;
  p.mass = mass;
  p.height = height;
  p.leg_length = height * 0.9 / 1.7;
  p.pelvis_width = 0.2 * p.leg_length;
  return p;
}

void BodyParams::Validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw ArgumentError("mass must be positive");
  if (!(height > 0.0) || !std::isfinite(height)) throw ArgumentError("height must be positive");
  if (!(gravity > 0.0) || !std::isfinite(gravity)) throw ArgumentError("gravity must be positive");
  if (!(leg_length > 0.0) || !std::isfinite(leg_length)) {
    throw ArgumentError("leg length must be positive");
  }
  if (!(pelvis_width >= 0.0) || !std::isfinite(pelvis_width)) {
    throw ArgumentError("pelvis width must be non-negative");
  }
  if (!(leg_mass_fraction > 0.0 && leg_mass_fraction < 0.5)) {
    throw ArgumentError("leg mass fraction must lie in (0, 0.5)");
  }
  if (torso_com_fraction < 0.0) throw ArgumentError("torso CoM fraction must be non-negative");
}

PhaseLti BuildLip(const BodyParams& params) {
  params.Validate();
  // Pendulum height: the pelvis plane of the 3LP model.
  const double h = params.leg_length;
  const double w0 = params.gravity / h;
  PhaseLti model;
  model.cx = Eigen::MatrixXd::Zero(6, 6);
  model.cu = Eigen::MatrixXd::Zero(6, 2);
  model.cd = Eigen::VectorXd::Zero(6);
  model.cw = Eigen::MatrixXd::Zero(6, 2);
  for (int ax = 0; ax < 2; ++ax) {
    model.cx(2 + ax, 2 + ax) = w0;
    model.cx(2 + ax, 4 + ax) = -w0;
    model.cu(ax, ax) = 1.0 / (params.mass * h);
    model.cw(2 + ax, ax) = 1.0 / params.mass;
  }
  model.mass = params.mass;
  model.gravity = params.gravity;
  model.leg_length = params.leg_length;
  return model;
}

PhaseLti Build3lp(const BodyParams& params) {
  params.Validate();
  if (params.height <= params.leg_length) {
    throw ArgumentError("height must exceed leg length");
  }
  PhaseLti model;
  model.cx = Eigen::MatrixXd::Zero(6, 6);
  model.cu = Eigen::MatrixXd::Zero(6, 2);
  model.cd = Eigen::VectorXd::Zero(6);
  model.cw = Eigen::MatrixXd::Zero(6, 2);
  for (int ax = 0; ax < 2; ++ax) {
    const AxisRows rows = SolveAxis(params, ax == 1);
    const int swing = ax;
    const int pelvis = 2 + ax;
    const int stance = 4 + ax;
    for (const auto& [row, r] : {std::pair{pelvis, rows.pelvis}, std::pair{swing, rows.swing}}) {
      model.cx(row, pelvis) = r(0);
      model.cx(row, swing) = r(1);
      model.cx(row, stance) = r(2);
      model.cd(row) = r(3);
      model.cu(row, ax) = r(4);
      model.cw(row, ax) = r(5);
    }
  }
  model.mass = params.mass;
  model.gravity = params.gravity;
  model.leg_length = params.leg_length;
  return model;
}

PhaseLti BuildModel(ModelKind kind, const BodyParams& params) {
  return kind == ModelKind::kLip ? BuildLip(params) : Build3lp(params);
}

const SymmetryOps& GetSymmetryOps() {
  static const SymmetryOps ops = BuildOps();
  return ops;
}

ErrorSystem MakeErrorSystem(const PhaseLti& model, double period) {
  if (!(period > 0.0)) throw ArgumentError("period must be positive");
  const SymmetryOps& ops = GetSymmetryOps();
  const TransitionSet ts = Transition(model, period);
  const Eigen::MatrixXd oms = ops.o * ops.m * ops.s;
  ErrorSystem err;
  err.ahat = oms * ts.a * ops.mhat;
  err.bhat = oms * ts.b;
  err.chat = ops.chat;
  err.period = period;
  return err;
}

RemainingMaps MakeRemainingMaps(const PhaseLti& model, double period,
                                double elapsed) {
  if (!(elapsed >= 0.0 && elapsed <= period)) {
    throw ArgumentError("elapsed time outside the phase");
  }
  const SymmetryOps& ops = GetSymmetryOps();
  const TransitionSet ts = Transition(model, period - elapsed);
  const Eigen::MatrixXd oms = ops.o * ops.m * ops.s;
  return {oms * ts.a * ops.mhat,
          oms * ts.b * RampShift(model.torque_dim(), elapsed)};
}

SubphaseMaps MakeSubphaseMaps(const PhaseLti& model, double t0, double dt) {
  const SymmetryOps& ops = GetSymmetryOps();
  const TransitionSet ts = Transition(model, dt);
  return {ops.m * ts.a * ops.mhat,
          ops.m * ts.b * RampShift(model.torque_dim(), t0), ops.m * ts.w};
}

}  // namespace walkproj
