#include "walkproj/scalar.h"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "walkproj/errors.h"
#include "walkproj/projection.h"
#include "walkproj/riccati.h"

namespace walkproj {

namespace {

void RequirePeriod(double period) {
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw ArgumentError("period must be positive and finite");
  }
}

}  // namespace

ScalarGainBounds ComputeScalarGainBounds(double period) {
  RequirePeriod(period);
  const double em1 = std::expm1(period);
  const double e = em1 + 1.0;
  return {1.0, (e + 1.0) / em1, e / em1};
}

double ScalarDlqrGain(double period, double q, double r) {
  RequirePeriod(period);
  const Eigen::MatrixXd a = Eigen::MatrixXd::Constant(1, 1, std::exp(period));
  const Eigen::MatrixXd b = Eigen::MatrixXd::Constant(1, 1, std::expm1(period));
  return SolveDare(a, b, Eigen::MatrixXd::Constant(1, 1, q),
                   Eigen::MatrixXd::Constant(1, 1, r))
      .k(0, 0);
}

double GainToContinuous(double gain, double period) {
  RequirePeriod(period);
  const double arg = std::exp(period) - gain * std::expm1(period);
  if (!(arg > 0.0)) throw DomainError("closed-loop multiplier is not positive");
  return -std::log(arg) / period + 1.0;
}

double ContinuousToGain(double rate, double period) {
  RequirePeriod(period);
  return (std::exp(period) - std::exp((1.0 - rate) * period)) / std::expm1(period);
}

double ScalarSingularityTime(double gain) {
  if (gain <= 1.0) return std::numeric_limits<double>::infinity();
  return std::log(1.0 / (1.0 - 1.0 / gain));
}

double ScalarProjectionFeedback(double gain, double t) {
  if (std::abs(t - ScalarSingularityTime(gain)) < 1e-9) {
    throw ProjectionSingularity("projection feedback is singular at this time");
  }
  const double et = std::exp(t);
  return 1.0 + 1.0 / (-et / gain + et - 1.0);
}

double ScalarProjectionInput(double gain, double t, double x) {
  const Eigen::MatrixXd a = Eigen::MatrixXd::Constant(1, 1, std::exp(t));
  const Eigen::MatrixXd b = Eigen::MatrixXd::Constant(1, 1, std::expm1(t));
  const Eigen::MatrixXd k = Eigen::MatrixXd::Constant(1, 1, gain);
  return ProjectionGainBackward(a, b, k)(0, 0) * x;
}

}  // namespace walkproj
