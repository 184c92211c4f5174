#include "walkproj/projection.h"

#include "walkproj/errors.h"
#include "walkproj/models.h"

namespace walkproj {

namespace {

constexpr double kSingularRcond = 1e-13;

Eigen::MatrixXd SolveOrThrow(const Eigen::MatrixXd& lhs, const Eigen::MatrixXd& rhs) {
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(lhs);
  if (!(lu.rcond() > kSingularRcond)) {
    throw ProjectionSingularity("projection system is singular");
  }
  return lu.solve(rhs);
}

Eigen::MatrixXd ForwardGain(const PhaseLti& model, const DlqrDesign& d,
                            double period, double elapsed) {
  const RemainingMaps rem = MakeRemainingMaps(model, period, elapsed);
  const int nx = static_cast<int>(d.basis.rows());
  const int nu = static_cast<int>(rem.b.cols());
  const int p = d.constraint_dim();
  const int nv = nx - p;
  const int mv = nu - p;

  const Eigen::MatrixXd at = d.basis * rem.a * d.basis_inv;
  Eigen::MatrixXd bt(nx, nu);
  const Eigen::MatrixXd bt_raw = d.basis * rem.b;
  for (int j = 0; j < nu; ++j) bt.col(j) = bt_raw.col(d.input_order[j]);

  const Eigen::MatrixXd bvv = bt.topLeftCorner(nv, mv);
  const Eigen::MatrixXd bvw = bt.topRightCorner(nv, p);
  const Eigen::MatrixXd bwv = bt.bottomLeftCorner(p, mv);
  const Eigen::MatrixXd bww = bt.bottomRightCorner(p, p);
  const Eigen::PartialPivLU<Eigen::MatrixXd> bww_lu(bww);
  if (!(bww_lu.rcond() > kSingularRcond)) {
    throw ProjectionSingularity("constraint input block is singular at this time");
  }
  const Eigen::MatrixXd gt = -bww_lu.solve(at.bottomRows(p));
  const Eigen::MatrixXd ht = -bww_lu.solve(bwv);
  const Eigen::MatrixXd abar_t = at.topRows(nv) + bvw * gt;
  const Eigen::MatrixXd bbar_t = bvv + bvw * ht;

  const int dim = nv + nu;
  Eigen::MatrixXd lhs = Eigen::MatrixXd::Zero(dim, dim);
  lhs.topLeftCorner(nv, nv) = d.abar;
  lhs.block(0, nv, nv, mv) = d.bbar - bbar_t;
  lhs.block(nv, 0, mv, nv) = d.kbar;
  lhs.block(nv, nv, mv, mv).setIdentity();
  lhs.block(nv + mv, nv, p, mv) = -ht;
  lhs.bottomRightCorner(p, p).setIdentity();
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(dim, nx);
  rhs.topRows(nv) = abar_t * d.basis;
  rhs.bottomRows(p) = gt * d.basis;

  const Eigen::MatrixXd sol = SolveOrThrow(lhs, rhs);
  Eigen::MatrixXd gain(nu, nx);
  for (int j = 0; j < nu; ++j) gain.row(d.input_order[j]) = sol.row(nv + j);
  return gain;
}

}  // namespace

Eigen::MatrixXd ProjectionGainBackward(const Eigen::MatrixXd& a_tau,
                                       const Eigen::MatrixXd& b_tau,
                                       const Eigen::MatrixXd& k) {
  const Eigen::Index nx = a_tau.rows();
  const Eigen::Index nu = b_tau.cols();
  if (a_tau.cols() != nx || b_tau.rows() != nx || k.rows() != nu || k.cols() != nx) {
    throw ArgumentError("ProjectionGainBackward: inconsistent dimensions");
  }
  Eigen::MatrixXd lhs(nx + nu, nx + nu);
  lhs << a_tau, b_tau, k, Eigen::MatrixXd::Identity(nu, nu);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(nx + nu, nx);
  rhs.topRows(nx).setIdentity();
  return SolveOrThrow(lhs, rhs).bottomRows(nu);
}

Eigen::MatrixXd ProjectionGain(const PhaseLti& model, const DlqrDesign& design,
                               double period, double elapsed) {
  if (!(elapsed >= 0.0 && elapsed < period)) {
    throw ArgumentError("ProjectionGain: elapsed time must lie in [0, T)");
  }
  if (design.constrained) return ForwardGain(model, design, period, elapsed);
  const SubphaseMaps maps = MakeSubphaseMaps(model, 0.0, elapsed);
  return ProjectionGainBackward(maps.a, maps.b, design.k_full);
}

Eigen::VectorXd ProjectInput(const PhaseLti& model, const DlqrDesign& design,
                             double period, double elapsed,
                             const Eigen::VectorXd& e) {
  if (e.size() != design.k_full.cols()) throw ArgumentError("ProjectInput: error size mismatch");
  return ProjectionGain(model, design, period, elapsed) * e;
}

}  // namespace walkproj
