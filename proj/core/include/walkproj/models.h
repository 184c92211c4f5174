#pragma once

#include <Eigen/Dense>

#include "walkproj/lti.h"

namespace walkproj {

enum class ModelKind { kLip, k3lp };

/// Anthropometric description of a walker. Leg masses sit at mid-limb and
/// legs are thin rods.
struct BodyParams {
  double mass = 70.0;          // kg
  double height = 1.7;         // m
  double gravity = 9.81;       // m/s^2
  double leg_length = 0.9;     // m
  double pelvis_width = 0.18;  // m
  /// Mass of one leg as a fraction of the total.
  double leg_mass_fraction = 0.161;
  /// Torso CoM height above the pelvis as a fraction of (height - leg).
  double torso_com_fraction = 0.375;

  /// Human proportions: leg = 0.9/1.7 of height, pelvis width = 0.2 leg.
  static BodyParams Human(double mass, double height);

  void Validate() const;
};

/// Constant-height pendulum of height leg_length with a kinematically driven
/// swing foot. Same state layout as the 3LP model so the symmetry machinery
/// applies.
PhaseLti BuildLip(const BodyParams& params);

/// Three linear pendulums: torso plus two legs, constant-height planes,
/// stance hip torques holding the torso upright, swing hip torques as the
/// only inputs. A push acts on the torso mass.
PhaseLti Build3lp(const BodyParams& params);

PhaseLti BuildModel(ModelKind kind, const BodyParams& params);

/// Leg exchange and symmetry extraction. Positions are ordered
/// (x2 swing, x1 pelvis, x3 stance), each (sagittal, lateral); the full
/// state is (positions, velocities). Reduced coordinates are
/// (s1, s2, s1', s2') with s1 = x1 - x2 and s2 = x1 - x3.
struct SymmetryOps {
  Eigen::MatrixXd s;     // 12 x 12
  Eigen::MatrixXd m;     // 8 x 12
  Eigen::MatrixXd n;     // 4 x 12
  Eigen::MatrixXd o;     // 8 x 8
  Eigen::MatrixXd mhat;  // 12 x 8
  Eigen::MatrixXd chat;  // 2 x 8
  /// Sign flip of the input parameters (u_c, u_r) for a mirrored step.
  Eigen::MatrixXd o_input;  // 4 x 4
  /// Touch-down reset in reduced coordinates: s2' := s1' (stance foot at
  /// rest).
  Eigen::MatrixXd reset;  // 8 x 8
};

const SymmetryOps& GetSymmetryOps();

/// One-step deviation dynamics E[k+1] = ahat E[k] + bhat dU[k] subject to
/// chat E[k+1] = 0.
struct ErrorSystem {
  Eigen::MatrixXd ahat;  // 8 x 8
  Eigen::MatrixXd bhat;  // 8 x 4
  Eigen::MatrixXd chat;  // 2 x 8
  double period = 0.0;
};

ErrorSystem MakeErrorSystem(const PhaseLti& model, double period);

/// Maps from the reduced error at elapsed time `elapsed` inside a phase to
/// the reduced error at the next event (after the leg exchange). The input
/// map takes parameters referenced to the start of the phase.
struct RemainingMaps {
  Eigen::MatrixXd a;  // 8 x 8
  Eigen::MatrixXd b;  // 8 x 4
};

RemainingMaps MakeRemainingMaps(const PhaseLti& model, double period,
                                double elapsed);

/// Reduced-coordinate propagation over [t0, t0 + dt] inside a phase, no leg
/// exchange. The input map takes parameters referenced to the phase start.
struct SubphaseMaps {
  Eigen::MatrixXd a;  // 8 x 8
  Eigen::MatrixXd b;  // 8 x 4
  Eigen::MatrixXd w;  // 8 x n_push
};

SubphaseMaps MakeSubphaseMaps(const PhaseLti& model, double t0, double dt);

}  // namespace walkproj
