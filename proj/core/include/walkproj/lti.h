#pragma once

#include <optional>

#include <Eigen/Dense>

namespace walkproj {

/// Second-order linear dynamics of one single-support phase,
///
///   x''(t) = cx x(t) + cu u(t) + cd d + cw w,
///
/// where x stacks horizontal positions, u(t) = u_c + t u_r is a
/// piecewise-linear torque profile, d = +-1 selects the support side and w is
/// an external push force. The first-order state is q = (x, x').
struct PhaseLti {
  Eigen::MatrixXd cx;  // n_pos x n_pos, 1/s^2
  Eigen::MatrixXd cu;  // n_pos x n_torque, m/s^2 per N m
  Eigen::VectorXd cd;  // n_pos, m/s^2
  Eigen::MatrixXd cw;  // n_pos x n_push, m/s^2 per N

  // Physical scale of the body the model was built from. Used for default
  // costs, reach limits and divergence thresholds, not by the dynamics.
  double mass = 1.0;        // kg
  double gravity = 9.81;    // m/s^2
  double leg_length = 1.0;  // m

  int n_pos() const { return static_cast<int>(cx.rows()); }
  int state_dim() const { return 2 * n_pos(); }
  int torque_dim() const { return static_cast<int>(cu.cols()); }
  /// Input parameters are (u_c, u_r).
  int input_dim() const { return 2 * torque_dim(); }
  int push_dim() const { return static_cast<int>(cw.cols()); }

  /// Throws ArgumentError on inconsistent dimensions or non-finite entries.
  void Validate() const;
};

/// Closed-form solution pieces over [0, horizon]:
///   q(t) = a q(0) + b (u_c, u_r) + c d + w F.
struct TransitionSet {
  double horizon = 0.0;
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
  Eigen::VectorXd c;
  Eigen::MatrixXd w;
};

/// A push force held constant over [start, end], times relative to the start
/// of the propagation.
struct PushWindow {
  Eigen::VectorXd force;
  double start = 0.0;
  double end = 0.0;
};

/// e^{m t} by scaling and squaring with a degree-13 Pade approximant.
Eigen::MatrixXd Expm(const Eigen::MatrixXd& m, double t = 1.0);

TransitionSet Transition(const PhaseLti& model, double t);

/// Re-parametrizes a ramp u(s) = u_c + s u_r so that time is counted from
/// t0: returns the matrix mapping (u_c, u_r) to (u_c + t0 u_r, u_r).
Eigen::MatrixXd RampShift(int torque_dim, double t0);

/// Propagates q0 over [0, t] with input parameters u, support direction d and
/// an optional push active on a sub-window of [0, t].
Eigen::VectorXd Propagate(const PhaseLti& model, const Eigen::VectorXd& q0,
                          const Eigen::VectorXd& u, double d,
                          const std::optional<PushWindow>& push, double t);

}  // namespace walkproj
