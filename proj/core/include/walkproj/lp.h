#pragma once

#include <vector>

#include <Eigen/Dense>

namespace walkproj {

/// minimize c'x  s.t.  a_ub x <= b_ub,  a_eq x = b_eq,
///                     x_j >= 0 unless free[j].
/// Empty constraint blocks are allowed; an empty `free` means all
/// variables are non-negative.
struct LinearProgram {
  Eigen::VectorXd c;
  Eigen::MatrixXd a_ub;
  Eigen::VectorXd b_ub;
  Eigen::MatrixXd a_eq;
  Eigen::VectorXd b_eq;
  std::vector<bool> free;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

const char* LpStatusName(LpStatus status);

struct LpOptions {
  double tolerance = 1e-8;
  int max_iterations = 50000;
  /// Consecutive non-improving pivots before switching to Bland's rule.
  int degenerate_switch = 50;
};

struct LpResult {
  LpStatus status = LpStatus::kIterationLimit;
  Eigen::VectorXd x;
  double objective = 0.0;
  int iterations = 0;
};

/// Two-phase dense tableau simplex on an equilibrated copy of the problem.
LpResult SolveLp(const LinearProgram& lp, const LpOptions& options = {});

}  // namespace walkproj
