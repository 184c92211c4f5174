#pragma once

#include <Eigen/Dense>

namespace walkproj {

struct DareSolution {
  Eigen::MatrixXd p;
  /// Optimal feedback, u = -k x.
  Eigen::MatrixXd k;
  /// ||P - f(P)|| / max(1, ||P||).
  double residual = 0.0;
  int iterations = 0;
};

struct DareOptions {
  int max_iterations = 200;
  double tolerance = 1e-10;
};

/// Solves P = A'PA - (A'PB + N)(R + B'PB)^{-1}(B'PA + N') + Q. An empty N
/// means no cross term. The cross term is absorbed into (A, Q) and the
/// resulting plain equation is solved by structure-preserving doubling.
DareSolution SolveDare(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                       const Eigen::MatrixXd& q, const Eigen::MatrixXd& r,
                       const Eigen::MatrixXd& n = Eigen::MatrixXd(),
                       const DareOptions& options = {});

/// ||P - f(P)|| / max(1, ||P||) for a candidate P.
double DareResidual(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                    const Eigen::MatrixXd& q, const Eigen::MatrixXd& r,
                    const Eigen::MatrixXd& n, const Eigen::MatrixXd& p);

}  // namespace walkproj
