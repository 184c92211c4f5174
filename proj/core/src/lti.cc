#include "walkproj/lti.h"

#include <cmath>
#include <string>

#include "walkproj/errors.h"

namespace walkproj {

namespace {

void RequireFinite(const Eigen::MatrixXd& m, const char* name) {
  if (!m.allFinite()) {
    throw ArgumentError(std::string(name) + " has non-finite entries");
  }
}

}  // namespace

void PhaseLti::Validate() const {
  const int n = n_pos();
  if (n == 0 || cx.cols() != n) throw ArgumentError("cx must be square and non-empty");
  if (cu.rows() != n) throw ArgumentError("cu row count differs from cx");
  if (cd.size() != n) throw ArgumentError("cd size differs from cx");
  if (cw.rows() != n) throw ArgumentError("cw row count differs from cx");
  RequireFinite(cx, "cx");
  RequireFinite(cu, "cu");
  RequireFinite(cd, "cd");
  RequireFinite(cw, "cw");
}

Eigen::MatrixXd Expm(const Eigen::MatrixXd& m, double t) {
  if (m.rows() != m.cols()) throw ArgumentError("Expm: matrix is not square");
  if (!m.allFinite() || !std::isfinite(t)) {
    throw ArgumentError("Expm: non-finite input");
  }
  const Eigen::Index n = m.rows();
  const Eigen::MatrixXd ident = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd a = m * t;
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  if (norm1 == 0.0) return ident;

  // Degree-13 Pade approximant.
  constexpr double kTheta13 = 5.371920351148152;
  constexpr double b[] = {64764752532480000.0, 32382376266240000.0,
                          7771770303897600.0,  1187353796428800.0,
                          129060195264000.0,   10559470521600.0,
                          670442572800.0,      33522128640.0,
                          1323241920.0,        40840800.0,
                          960960.0,            16380.0,
                          182.0,               1.0};
  int squarings = 0;
  if (norm1 > kTheta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / kTheta13)));
    a /= std::ldexp(1.0, squarings);
  }
  const Eigen::MatrixXd a2 = a * a;
  const Eigen::MatrixXd a4 = a2 * a2;
  const Eigen::MatrixXd a6 = a4 * a2;
  const Eigen::MatrixXd u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) +
                                  b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident;
  const Eigen::MatrixXd u = a * u_inner;
  const Eigen::MatrixXd v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) +
                            b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
  Eigen::MatrixXd r = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

TransitionSet Transition(const PhaseLti& model, double t) {
  model.Validate();
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw ArgumentError("Transition: horizon must be finite and non-negative");
  }
  const int np = model.n_pos();
  const int n = model.state_dim();
  const int k = model.torque_dim();
  const int p = model.push_dim();

  // Augmented generator over (q, tau, u_r, d, w): tau' = u_r, the rest constant.
  const int col_tau = n;
  const int col_ramp = n + k;
  const int col_d = n + 2 * k;
  const int col_w = col_d + 1;
  const int dim = col_w + p;
  Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(dim, dim);
  gen.block(0, np, np, np).setIdentity();
  gen.block(np, 0, np, np) = model.cx;
  gen.block(np, col_tau, np, k) = model.cu;
  gen.block(col_tau, col_ramp, k, k).setIdentity();
  gen.block(np, col_d, np, 1) = model.cd;
  gen.block(np, col_w, np, p) = model.cw;

  const Eigen::MatrixXd e = Expm(gen, t);
  TransitionSet out;
  out.horizon = t;
  out.a = e.block(0, 0, n, n);
  out.b = e.block(0, col_tau, n, 2 * k);
  out.c = e.block(0, col_d, n, 1);
  out.w = e.block(0, col_w, n, p);
  return out;
}

Eigen::MatrixXd RampShift(int torque_dim, double t0) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * torque_dim, 2 * torque_dim);
  s.block(0, torque_dim, torque_dim, torque_dim).diagonal().setConstant(t0);
  return s;
}

Eigen::VectorXd Propagate(const PhaseLti& model, const Eigen::VectorXd& q0,
                          const Eigen::VectorXd& u, double d,
                          const std::optional<PushWindow>& push, double t) {
  model.Validate();
  if (q0.size() != model.state_dim()) throw ArgumentError("Propagate: state size mismatch");
  if (u.size() != model.input_dim()) throw ArgumentError("Propagate: input size mismatch");
  if (!(t >= 0.0)) throw ArgumentError("Propagate: negative horizon");

  const Eigen::VectorXd no_push = Eigen::VectorXd::Zero(model.push_dim());
  auto segment = [&](const Eigen::VectorXd& q, double from, double to,
                     const Eigen::VectorXd& force) -> Eigen::VectorXd {
    if (to <= from) return q;
    const TransitionSet ts = Transition(model, to - from);
    return ts.a * q + ts.b * (RampShift(model.torque_dim(), from) * u) +
           ts.c * d + ts.w * force;
  };

  if (!push || push->end <= push->start) return segment(q0, 0.0, t, no_push);
  if (push->force.size() != model.push_dim()) {
    throw ArgumentError("Propagate: push force size mismatch");
  }
  if (push->start < 0.0 || push->end > t) {
    throw ArgumentError("Propagate: push window outside the horizon");
  }
  Eigen::VectorXd q = segment(q0, 0.0, push->start, no_push);
  q = segment(q, push->start, push->end, push->force);
  return segment(q, push->end, t, no_push);
}

}  // namespace walkproj
