#include "walkproj/dlqr.h"

#include <algorithm>
#include <numeric>

#include "walkproj/errors.h"
#include "walkproj/riccati.h"

namespace walkproj {

namespace {

// Rows of the orthonormal complement of the row space of c.
Eigen::MatrixXd Complement(const Eigen::MatrixXd& c) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(c, Eigen::ComputeFullV);
  const Eigen::Index rank = svd.rank();
  if (rank != c.rows()) throw DesignError("constraint matrix is rank deficient");
  return svd.matrixV().rightCols(c.cols() - rank).transpose();
}

Eigen::MatrixXd PermuteCols(const Eigen::MatrixXd& m, const std::vector<int>& order) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (size_t j = 0; j < order.size(); ++j) out.col(j) = m.col(order[j]);
  return out;
}

Eigen::MatrixXd PermuteSym(const Eigen::MatrixXd& m, const std::vector<int>& order) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (size_t i = 0; i < order.size(); ++i) {
    for (size_t j = 0; j < order.size(); ++j) out(i, j) = m(order[i], order[j]);
  }
  return out;
}

double SmallestSingular(const Eigen::MatrixXd& m) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues().minCoeff();
}

// Picks which inputs resolve the constraint. Keeps the trailing block when
// it is well conditioned, otherwise the subset with the best-conditioned
// constraint block.
std::vector<int> ChooseOrder(const Eigen::MatrixXd& bt, int p) {
  const int nu = static_cast<int>(bt.cols());
  std::vector<int> order(nu);
  std::iota(order.begin(), order.end(), 0);
  const double scale = std::max(bt.norm(), 1e-300);
  auto quality = [&](const std::vector<int>& ord) {
    return SmallestSingular(PermuteCols(bt, ord).bottomRightCorner(p, p)) / scale;
  };
  if (quality(order) > 1e-9) return order;

  std::vector<int> best;
  double best_q = 0.0;
  std::vector<bool> pick(nu, false);
  std::fill(pick.end() - p, pick.end(), true);
  do {
    std::vector<int> ord;
    for (int i = 0; i < nu; ++i) if (!pick[i]) ord.push_back(i);
    for (int i = 0; i < nu; ++i) if (pick[i]) ord.push_back(i);
    const double qv = quality(ord);
    if (qv > best_q) {
      best_q = qv;
      best = ord;
    }
  } while (std::next_permutation(pick.begin(), pick.end()));
  if (best_q <= 1e-9) {
    throw DesignError("no input subset can enforce the terminal constraint");
  }
  return best;
}

}  // namespace

Eigen::MatrixXd DefaultStateCost(double q_scale) {
  return q_scale * Eigen::MatrixXd::Identity(8, 8);
}

Eigen::MatrixXd DefaultInputCost(const PhaseLti& model, double r_scale) {
  const double mg = model.mass * model.gravity;
  return r_scale / (mg * mg) * Eigen::MatrixXd::Identity(model.input_dim(), model.input_dim());
}

DlqrDesign DesignDlqr(const ErrorSystem& err, const Eigen::MatrixXd& q,
                      const Eigen::MatrixXd& r, bool constrained) {
  const int nx = static_cast<int>(err.ahat.rows());
  const int nu = static_cast<int>(err.bhat.cols());
  if (q.rows() != nx || q.cols() != nx || r.rows() != nu || r.cols() != nu) {
    throw ArgumentError("DesignDlqr: cost matrices have wrong dimensions");
  }
  DlqrDesign d;
  d.q = q;
  d.r = r;
  d.constrained = constrained && err.chat.rows() > 0;
  d.input_order.resize(nu);
  std::iota(d.input_order.begin(), d.input_order.end(), 0);

  if (!d.constrained) {
    const DareSolution sol = SolveDare(err.ahat, err.bhat, q, r);
    d.ctilde = Eigen::MatrixXd::Identity(nx, nx);
    d.basis = d.ctilde;
    d.basis_inv = d.ctilde;
    d.abar = err.ahat;
    d.bbar = err.bhat;
    d.qbar = q;
    d.rbar = r;
    d.nbar = Eigen::MatrixXd::Zero(nx, nu);
    d.kbar = sol.k;
    d.k_full = sol.k;
    d.gtilde = Eigen::MatrixXd::Zero(0, nx);
    d.htilde = Eigen::MatrixXd::Zero(0, nu);
    d.dare_residual = sol.residual;
    return d;
  }

  const int p = static_cast<int>(err.chat.rows());
  if (p > nu) throw DesignError("more constraints than inputs");
  const int nv = nx - p;
  const int mv = nu - p;

  d.ctilde = Complement(err.chat);
  d.basis.resize(nx, nx);
  d.basis << d.ctilde, err.chat;
  d.basis_inv = d.basis.inverse();

  const Eigen::MatrixXd at = d.basis * err.ahat * d.basis_inv;
  const Eigen::MatrixXd bt_raw = d.basis * err.bhat;
  d.input_order = ChooseOrder(bt_raw, p);
  const Eigen::MatrixXd bt = PermuteCols(bt_raw, d.input_order);
  const Eigen::MatrixXd qt = d.basis_inv.transpose() * q * d.basis_inv;
  const Eigen::MatrixXd rt = PermuteSym(r, d.input_order);

  const Eigen::MatrixXd avv = at.topLeftCorner(nv, nv);
  const Eigen::MatrixXd awv = at.bottomLeftCorner(p, nv);
  const Eigen::MatrixXd bvv = bt.topLeftCorner(nv, mv);
  const Eigen::MatrixXd bvw = bt.topRightCorner(nv, p);
  const Eigen::MatrixXd bwv = bt.bottomLeftCorner(p, mv);
  const Eigen::MatrixXd bww = bt.bottomRightCorner(p, p);
  const Eigen::FullPivLU<Eigen::MatrixXd> bww_lu(bww);
  if (!bww_lu.isInvertible()) throw DesignError("constraint input block is singular");

  d.gtilde = -bww_lu.solve(awv);
  d.htilde = -bww_lu.solve(bwv);
  d.abar = avv + bvw * d.gtilde;
  d.bbar = bvv + bvw * d.htilde;

  const Eigen::MatrixXd rvv = rt.topLeftCorner(mv, mv);
  const Eigen::MatrixXd rvw = rt.topRightCorner(mv, p);
  const Eigen::MatrixXd rwv = rt.bottomLeftCorner(p, mv);
  const Eigen::MatrixXd rww = rt.bottomRightCorner(p, p);
  d.qbar = qt.topLeftCorner(nv, nv) + d.gtilde.transpose() * rww * d.gtilde;
  d.rbar = rvv + d.htilde.transpose() * rww * d.htilde + rvw * d.htilde +
           d.htilde.transpose() * rwv;
  d.nbar = d.gtilde.transpose() * (rww * d.htilde + rwv);
  d.qbar = 0.5 * (d.qbar + d.qbar.transpose());
  d.rbar = 0.5 * (d.rbar + d.rbar.transpose());

  const DareSolution sol = SolveDare(d.abar, d.bbar, d.qbar, d.rbar, d.nbar);
  d.kbar = sol.k;
  d.dare_residual = sol.residual;

  // dV = -kbar Y, dW = G Y + H dV, Y = ctilde E.
  Eigen::MatrixXd stacked(nu, nv);
  stacked << -d.kbar, d.gtilde - d.htilde * d.kbar;
  const Eigen::MatrixXd k_perm = -stacked * d.ctilde;
  d.k_full.resize(nu, nx);
  for (int j = 0; j < nu; ++j) d.k_full.row(d.input_order[j]) = k_perm.row(j);
  return d;
}

}  // namespace walkproj
