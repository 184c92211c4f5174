#include "walkproj/lp.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "walkproj/errors.h"

namespace walkproj {

namespace {

class Tableau {
 public:
  Tableau(Eigen::MatrixXd t, std::vector<int> basis, const LpOptions& opt)
      : t_(std::move(t)), basis_(std::move(basis)), opt_(opt) {}

  // Runs simplex iterations on the objective held in the last row, entering
  // only columns with allowed[j]. Returns kOptimal, kUnbounded or
  // kIterationLimit.
  LpStatus Run(const std::vector<bool>& allowed, int& iterations) {
    const Eigen::Index m = t_.rows() - 1;
    const Eigen::Index n = t_.cols() - 1;
    bool bland = false;
    int stall = 0;
    double last_obj = t_(m, n);
    while (iterations < opt_.max_iterations) {
      Eigen::Index enter = -1;
      double best = -opt_.tolerance;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (!allowed[j]) continue;
        const double rc = t_(m, j);
        if (rc < best) {
          enter = j;
          if (bland) break;
          best = rc;
        }
      }
      if (enter < 0) return LpStatus::kOptimal;

      Eigen::Index leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m; ++i) {
        const double a = t_(i, enter);
        if (a > opt_.tolerance) {
          const double r = t_(i, n) / a;
          if (r < ratio - 1e-12 ||
              (r <= ratio + 1e-12 && leave >= 0 && basis_[i] < basis_[leave])) {
            ratio = r;
            leave = i;
          }
        }
      }
      if (leave < 0) return LpStatus::kUnbounded;
      Pivot(leave, enter);
      ++iterations;

      const double obj = t_(m, n);
      if (std::abs(obj - last_obj) <= 1e-12 * std::max(1.0, std::abs(obj))) {
        if (++stall >= opt_.degenerate_switch) bland = true;
      } else {
        stall = 0;
        bland = false;
      }
      last_obj = obj;
    }
    return LpStatus::kIterationLimit;
  }

  void Pivot(Eigen::Index row, Eigen::Index col) {
    t_.row(row) /= t_(row, col);
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(row);
    }
    basis_[row] = static_cast<int>(col);
  }

  void DropRow(Eigen::Index row) {
    const Eigen::Index rows = t_.rows();
    t_.block(row, 0, rows - row - 1, t_.cols()) = t_.bottomRows(rows - row - 1).eval();
    t_.conservativeResize(rows - 1, Eigen::NoChange);
    basis_.erase(basis_.begin() + row);
  }

  Eigen::MatrixXd& t() { return t_; }
  std::vector<int>& basis() { return basis_; }

 private:
  Eigen::MatrixXd t_;
  std::vector<int> basis_;
  LpOptions opt_;
};

}  // namespace

const char* LpStatusName(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterationLimit: return "iteration_limit";
  }
  return "unknown";
}

LpResult SolveLp(const LinearProgram& lp, const LpOptions& options) {
  const Eigen::Index nx = lp.c.size();
  const Eigen::Index mu = lp.a_ub.rows();
  const Eigen::Index me = lp.a_eq.rows();
  if ((mu > 0 && (lp.a_ub.cols() != nx || lp.b_ub.size() != mu)) ||
      (me > 0 && (lp.a_eq.cols() != nx || lp.b_eq.size() != me)) ||
      (!lp.free.empty() && static_cast<Eigen::Index>(lp.free.size()) != nx)) {
    throw ArgumentError("SolveLp: inconsistent dimensions");
  }

  // Split free variables: x = x+ - x-.
  std::vector<Eigen::Index> pos(nx), neg(nx, -1);
  Eigen::Index ns = 0;
  for (Eigen::Index j = 0; j < nx; ++j) {
    pos[j] = ns++;
    if (!lp.free.empty() && lp.free[j]) neg[j] = ns++;
  }
  const Eigen::Index m = mu + me;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, ns);
  Eigen::VectorXd b(m);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(ns);
  for (Eigen::Index j = 0; j < nx; ++j) {
    for (Eigen::Index i = 0; i < mu; ++i) a(i, pos[j]) = lp.a_ub(i, j);
    for (Eigen::Index i = 0; i < me; ++i) a(mu + i, pos[j]) = lp.a_eq(i, j);
    c(pos[j]) = lp.c(j);
    if (neg[j] >= 0) {
      a.col(neg[j]) = -a.col(pos[j]);
      c(neg[j]) = -lp.c(j);
    }
  }
  if (mu > 0) b.head(mu) = lp.b_ub;
  if (me > 0) b.tail(me) = lp.b_eq;

  // Equilibrate columns, then rows.
  Eigen::VectorXd col_scale = Eigen::VectorXd::Ones(ns);
  for (Eigen::Index j = 0; j < ns; ++j) {
    const double mx = a.col(j).cwiseAbs().maxCoeff();
    if (mx > 0.0) col_scale(j) = 1.0 / mx;
  }
  a = a * col_scale.asDiagonal();
  c = c.cwiseProduct(col_scale);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double mx = a.row(i).cwiseAbs().maxCoeff();
    if (mx > 0.0) {
      a.row(i) /= mx;
      b(i) /= mx;
    }
  }

  // Columns: structural, slacks (one per inequality), artificials.
  std::vector<int> basis(m, -1);
  std::vector<Eigen::Index> art_rows;
  for (Eigen::Index i = 0; i < m; ++i) {
    const bool ineq = i < mu;
    const bool flip = b(i) < 0.0;
    if (!(ineq && !flip)) art_rows.push_back(i);
  }
  const Eigen::Index n_slack = mu;
  const Eigen::Index n_art = static_cast<Eigen::Index>(art_rows.size());
  const Eigen::Index ncol = ns + n_slack + n_art;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, ncol + 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double sgn = b(i) < 0.0 ? -1.0 : 1.0;
    t.block(i, 0, 1, ns) = sgn * a.row(i);
    if (i < mu) t(i, ns + i) = sgn;
    t(i, ncol) = sgn * b(i);
    if (i < mu && sgn > 0.0) basis[i] = static_cast<int>(ns + i);
  }
  for (Eigen::Index r = 0; r < n_art; ++r) {
    const Eigen::Index i = art_rows[r];
    t(i, ns + n_slack + r) = 1.0;
    basis[i] = static_cast<int>(ns + n_slack + r);
    t(m, ns + n_slack + r) = 1.0;
    t.row(m) -= t.row(i);
  }

  LpResult res;
  Tableau tab(std::move(t), std::move(basis), options);
  std::vector<bool> allowed(ncol, true);
  LpStatus st = tab.Run(allowed, res.iterations);
  if (st == LpStatus::kIterationLimit) {
    res.status = st;
    return res;
  }
  if (-tab.t()(tab.t().rows() - 1, ncol) > options.tolerance) {
    res.status = LpStatus::kInfeasible;
    return res;
  }

  // Drive artificials out of the basis; drop redundant rows.
  auto is_art = [&](int col) { return col >= ns + n_slack && col < ncol; };
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(tab.basis().size());) {
    if (!is_art(tab.basis()[i])) {
      ++i;
      continue;
    }
    Eigen::Index col = -1;
    double best = options.tolerance;
    for (Eigen::Index j = 0; j < ns + n_slack; ++j) {
      if (std::abs(tab.t()(i, j)) > best) {
        best = std::abs(tab.t()(i, j));
        col = j;
      }
    }
    if (col >= 0) {
      tab.Pivot(i, col);
      ++i;
    } else {
      tab.DropRow(i);
    }
  }
  for (Eigen::Index j = ns + n_slack; j < ncol; ++j) allowed[j] = false;

  // Phase 2 objective row.
  Eigen::MatrixXd& tt = tab.t();
  const Eigen::Index obj = tt.rows() - 1;
  tt.row(obj).setZero();
  tt.block(obj, 0, 1, ns) = c.transpose();
  for (Eigen::Index i = 0; i < obj; ++i) {
    const int bj = tab.basis()[i];
    const double cb = bj < ns ? c(bj) : 0.0;
    if (cb != 0.0) tt.row(obj) -= cb * tt.row(i);
  }
  st = tab.Run(allowed, res.iterations);
  res.status = st;
  if (st != LpStatus::kOptimal) return res;

  Eigen::VectorXd xs = Eigen::VectorXd::Zero(ns);
  for (Eigen::Index i = 0; i < obj; ++i) {
    const int bj = tab.basis()[i];
    if (bj < ns) xs(bj) = tt(i, ncol);
  }
  xs = xs.cwiseProduct(col_scale);
  res.x.resize(nx);
  for (Eigen::Index j = 0; j < nx; ++j) {
    res.x(j) = xs(pos[j]) - (neg[j] >= 0 ? xs(neg[j]) : 0.0);
  }
  res.objective = lp.c.dot(res.x);
  return res;
}

}  // namespace walkproj
