#pragma once

namespace walkproj {

// The unstable scalar system x' = x + u with u held constant over each
// step of length T. One step reads x[k+1] = e^T x[k] + (e^T - 1) u[k].

struct ScalarGainBounds {
  double lo = 1.0;
  /// Stability of the discrete loop.
  double hi_dlqr = 0.0;
  /// Projection loop free of in-phase singularities.
  double hi_proj = 0.0;
};

ScalarGainBounds ComputeScalarGainBounds(double period);

/// Discrete LQR gain Gamma for cost weights (q, r).
double ScalarDlqrGain(double period, double q = 1.0, double r = 1.0);

/// Continuous feedback rate gamma, u = -gamma x, whose closed loop matches
/// the discrete loop with gain Gamma over one step.
double GainToContinuous(double gain, double period);
double ContinuousToGain(double rate, double period);

/// Time of the in-phase singularity of the projection loop, or +inf when
/// Gamma <= 1.
double ScalarSingularityTime(double gain);

/// Closed-loop rate eps(t) of x' = eps(t) x under projection feedback.
/// Throws ProjectionSingularity within 1e-9 of the singular time.
double ScalarProjectionFeedback(double gain, double t);

/// Projected input u(t) for a measured state x(t).
double ScalarProjectionInput(double gain, double t, double x);

}  // namespace walkproj
