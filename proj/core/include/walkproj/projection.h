#pragma once

#include <Eigen/Dense>

#include "walkproj/dlqr.h"
#include "walkproj/lti.h"

namespace walkproj {

/// Gain of the projection controller at `elapsed` seconds into a phase:
/// dU = gain * e(t), e(t) the reduced error of the current phase. For a
/// constrained design the measured error is mapped forward to the next
/// event and matched against the closed loop of the reduced DLQR problem;
/// for an unconstrained design it is projected back to the phase start.
/// Throws ProjectionSingularity when the block system is singular.
Eigen::MatrixXd ProjectionGain(const PhaseLti& model, const DlqrDesign& design,
                               double period, double elapsed);

/// Back projection with explicit maps from the phase start to now:
///   [[a_tau, b_tau], [k, I]] [E0; dU] = [e; 0].
Eigen::MatrixXd ProjectionGainBackward(const Eigen::MatrixXd& a_tau,
                                       const Eigen::MatrixXd& b_tau,
                                       const Eigen::MatrixXd& k);

Eigen::VectorXd ProjectInput(const PhaseLti& model, const DlqrDesign& design,
                             double period, double elapsed,
                             const Eigen::VectorXd& e);

}  // namespace walkproj
