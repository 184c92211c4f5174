#include "walkproj/riccati.h"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

#include "walkproj/errors.h"

namespace walkproj {

namespace {

Eigen::MatrixXd CrossOrZero(const Eigen::MatrixXd& n, Eigen::Index rows,
                            Eigen::Index cols) {
  if (n.size() == 0) return Eigen::MatrixXd::Zero(rows, cols);
  if (n.rows() != rows || n.cols() != cols) {
    throw ArgumentError("SolveDare: cross term has wrong dimensions");
  }
  return n;
}

Eigen::MatrixXd Gain(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                     const Eigen::MatrixXd& r, const Eigen::MatrixXd& n,
                     const Eigen::MatrixXd& p) {
  const Eigen::MatrixXd bp = b.transpose() * p;
  return (r + bp * b).ldlt().solve(bp * a + n.transpose());
}

}  // namespace

// f(P) - P in extended precision. The two quadratic terms of f cancel to
// several digits when R is small against B'PB.
Eigen::MatrixXd ResidualMatrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                               const Eigen::MatrixXd& q, const Eigen::MatrixXd& r,
                               const Eigen::MatrixXd& n, const Eigen::MatrixXd& p) {
  using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const MatL al = a.cast<long double>();
  const MatL bl = b.cast<long double>();
  const MatL pl = p.cast<long double>();
  const MatL nl = n.cast<long double>();
  const MatL bp = bl.transpose() * pl;
  const MatL apb = al.transpose() * pl * bl + nl;
  const MatL k = (r.cast<long double>() + bp * bl).ldlt().solve(apb.transpose());
  const MatL f = al.transpose() * pl * al - apb * k + q.cast<long double>();
  return (f - pl).cast<double>();
}

double DareResidual(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                    const Eigen::MatrixXd& q, const Eigen::MatrixXd& r,
                    const Eigen::MatrixXd& n_in, const Eigen::MatrixXd& p) {
  const Eigen::MatrixXd n = CrossOrZero(n_in, a.rows(), b.cols());
  return ResidualMatrix(a, b, q, r, n, p).norm() / std::max(1.0, p.norm());
}

DareSolution SolveDare(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                       const Eigen::MatrixXd& q, const Eigen::MatrixXd& r,
                       const Eigen::MatrixXd& n_in, const DareOptions& options) {
  const Eigen::Index nx = a.rows();
  const Eigen::Index nu = b.cols();
  if (a.cols() != nx || b.rows() != nx || q.rows() != nx || q.cols() != nx ||
      r.rows() != nu || r.cols() != nu) {
    throw ArgumentError("SolveDare: inconsistent dimensions");
  }
  if (!a.allFinite() || !b.allFinite() || !q.allFinite() || !r.allFinite()) {
    throw ArgumentError("SolveDare: non-finite input");
  }
  const Eigen::MatrixXd n = CrossOrZero(n_in, nx, nu);
  const Eigen::LDLT<Eigen::MatrixXd> r_ldlt(r);
  if (r_ldlt.info() != Eigen::Success || !r_ldlt.isPositive() ||
      r_ldlt.vectorD().minCoeff() <= 0.0) {
    throw ArgumentError("SolveDare: R must be positive definite");
  }

  // Completion of squares removes the cross term.
  const Eigen::MatrixXd rinv_nt = r_ldlt.solve(n.transpose());
  Eigen::MatrixXd ak = a - b * rinv_nt;
  Eigen::MatrixXd hk = q - n * rinv_nt;
  hk = 0.5 * (hk + hk.transpose());
  Eigen::MatrixXd gk = b * r_ldlt.solve(b.transpose());
  gk = 0.5 * (gk + gk.transpose());

  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(nx, nx);
  DareSolution sol;
  for (int it = 1; it <= options.max_iterations; ++it) {
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(id + gk * hk);
    const Eigen::MatrixXd w_a = lu.solve(ak);
    const Eigen::MatrixXd w_g = lu.solve(gk);
    const Eigen::MatrixXd h_next = hk + ak.transpose() * hk * w_a;
    const Eigen::MatrixXd g_next = gk + ak * w_g * ak.transpose();
    const Eigen::MatrixXd a_next = ak * w_a;
    const double change = (h_next - hk).norm() / std::max(1.0, h_next.norm());
    hk = 0.5 * (h_next + h_next.transpose());
    gk = 0.5 * (g_next + g_next.transpose());
    ak = a_next;
    sol.iterations = it;
    if (!hk.allFinite()) break;
    if (change < 1e-15 || ak.norm() < 1e-300) break;
  }
  if (!hk.allFinite()) {
    throw NumericalError("SolveDare: doubling iteration diverged");
  }

  // Newton refinement: X - Ac' X Ac = f(P) - P with Ac the closed loop.
  Eigen::MatrixXd p = hk;
  double res = DareResidual(a, b, q, r, n, p);
  for (int i = 0; i < 4 && res > 1e-15; ++i) {
    const Eigen::MatrixXd k = Gain(a, b, r, n, p);
    const Eigen::MatrixXd ac = a - b * k;
    const Eigen::MatrixXd rhs = ResidualMatrix(a, b, q, r, n, p);
    Eigen::MatrixXd stein = Eigen::MatrixXd::Identity(nx * nx, nx * nx);
    stein -= Eigen::kroneckerProduct(ac.transpose(), ac.transpose()).eval();
    const Eigen::VectorXd x = stein.partialPivLu().solve(rhs.reshaped());
    Eigen::MatrixXd pn = p + x.reshaped(nx, nx);
    pn = 0.5 * (pn + pn.transpose());
    const double rn = DareResidual(a, b, q, r, n, pn);
    if (!(rn < res)) break;
    p = pn;
    res = rn;
  }
  sol.p = p;
  sol.k = Gain(a, b, r, n, p);
  sol.residual = res;
  if (!(res <= options.tolerance)) {
    throw NumericalError("SolveDare: residual above tolerance", res);
  }
  return sol;
}

}  // namespace walkproj
