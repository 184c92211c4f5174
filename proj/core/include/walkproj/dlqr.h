#pragma once

#include <vector>

#include <Eigen/Dense>

#include "walkproj/models.h"

namespace walkproj {

/// Discrete LQR for the one-step error system, with the terminal constraint
/// chat E[k+1] = 0 eliminated by spending P of the inputs on it.
///
/// Inputs are internally reordered by `input_order` so that the last P
/// entries resolve the constraint; every matrix below except `k_full` is in
/// that order.
struct DlqrDesign {
  Eigen::MatrixXd q;  // 8 x 8
  Eigen::MatrixXd r;  // 4 x 4
  bool constrained = true;
  std::vector<int> input_order;

  Eigen::MatrixXd ctilde;     // (8 - P) x 8, orthonormal complement of chat
  Eigen::MatrixXd basis;      // [ctilde; chat]
  Eigen::MatrixXd basis_inv;
  Eigen::MatrixXd gtilde;     // P x (8 - P)
  Eigen::MatrixXd htilde;     // P x (4 - P)
  Eigen::MatrixXd abar;       // reduced problem
  Eigen::MatrixXd bbar;
  Eigen::MatrixXd qbar;
  Eigen::MatrixXd rbar;
  Eigen::MatrixXd nbar;
  Eigen::MatrixXd kbar;       // (4 - P) x (8 - P)
  /// dU[k] = -k_full E[k], original input order.
  Eigen::MatrixXd k_full;     // 4 x 8
  double dare_residual = 0.0;

  int constraint_dim() const { return constrained ? static_cast<int>(basis.rows() - ctilde.rows()) : 0; }
};

/// Default dimensionless costs: Q = q_scale I, R = r_scale (m g)^-2 I.
Eigen::MatrixXd DefaultStateCost(double q_scale = 1.0);
Eigen::MatrixXd DefaultInputCost(const PhaseLti& model, double r_scale = 1.0);

DlqrDesign DesignDlqr(const ErrorSystem& err, const Eigen::MatrixXd& q,
                      const Eigen::MatrixXd& r, bool constrained = true);

}  // namespace walkproj
