#pragma once

#include <Eigen/Dense>

#include "walkproj/lti.h"

namespace walkproj {

/// A symmetric periodic gait. The event state qbar starts with the stance
/// foot at the origin and both feet at rest. Stored as an affine function of
/// speed so that rescaling is exact.
struct PeriodicGait {
  Eigen::VectorXd qbar;  // 12
  Eigen::VectorXd ubar;  // 4: (u_c sag, u_c lat, u_r sag, u_r lat)
  double dbar = 1.0;
  double period = 0.0;  // s
  double speed = 0.0;   // m/s

  Eigen::VectorXd q_base;
  Eigen::VectorXd q_slope;
  Eigen::VectorXd u_base;
  Eigen::VectorXd u_slope;
  /// Maximum L1 distance between consecutive footsteps.
  double reach_l1 = 0.0;  // m
  /// Swing foot landing point relative to the stance foot, at `speed`.
  Eigen::Vector2d footstep = Eigen::Vector2d::Zero();
  Eigen::Vector2d footstep_base = Eigen::Vector2d::Zero();
  Eigen::Vector2d footstep_slope = Eigen::Vector2d::Zero();

  double frequency() const { return 1.0 / period; }
};

/// Nullity of the periodicity system and the tolerance used to find it.
inline constexpr int kGaitNullity = 4;
inline constexpr double kGaitRankTol = 1e-9;

/// reach_l1 <= 0 selects the default, 1.7/0.9 leg lengths.
PeriodicGait SolvePeriodicGait(const PhaseLti& model, double frequency,
                               double speed, double reach_l1 = 0.0);

PeriodicGait ScaleGait(const PeriodicGait& gait, double speed);

/// Norm of the stacked periodicity and foot-velocity residuals.
double GaitResidual(const PhaseLti& model, const PeriodicGait& gait);

/// Nominal full state at time t in [0, T] of a canonical (dbar = +1) step.
Eigen::VectorXd NominalState(const PhaseLti& model, const PeriodicGait& gait,
                             double t);

}  // namespace walkproj
