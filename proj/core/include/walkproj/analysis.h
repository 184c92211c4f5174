#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "walkproj/dlqr.h"
#include "walkproj/models.h"
#include "walkproj/sim.h"

namespace walkproj {

// Step-to-step maps ------------------------------------------------------

/// One-step map of the reduced error (8 x 8) under a controller, including
/// the touch-down reset. The projection map is composed from `substeps`
/// held inputs.
Eigen::MatrixXd StepMap(const PhaseLti& model, const DlqrDesign& design,
                        ControllerKind kind, double period, int substeps = 50);

/// Sagittal map over (s1, s2, shared foot-relative velocity), 3 x 3.
Eigen::Matrix3d SagittalPoincareMap(const Eigen::MatrixXd& step_map);

struct PoincareOptions {
  double q_scale = 1.0;
  double r_scale = 1.0;
  int substeps = 50;
};

/// Eigenvalue magnitudes of the sagittal step map, sorted descending.
std::vector<double> PoincareEigenvalues(const PhaseLti& model, ControllerKind kind,
                                        double frequency,
                                        const PoincareOptions& options = {});

// Push sweeps ------------------------------------------------------------

struct PushSweepCell {
  double start_pct = 0.0;
  double end_pct = 0.0;
  ControllerKind controller = ControllerKind::kOpenLoop;
  /// Reduced error norm at the first three touch-downs after the push.
  std::array<double, 3> norms{};
  bool fell = false;
};

/// Pushes `force` during phase 0 over every (start, end) with start <= end.
std::vector<PushSweepCell> PushSweep(const Scenario& base,
                                     const std::vector<double>& starts,
                                     const std::vector<double>& ends,
                                     const Eigen::Vector2d& force,
                                     const std::vector<ControllerKind>& controllers);

// Viable regions ---------------------------------------------------------

enum class ViableController { kDlqr, kProjection, kMaximal };

const char* ViableControllerName(ViableController kind);

struct ViableQuery {
  ModelKind model_kind = ModelKind::k3lp;
  BodyParams body;
  double frequency = 3.0;
  double speed = 0.5;
  int n_steps = 6;
  int subphases = 5;
  double torque_limit = 80.0;  // N m
  double diamond = 1.7;        // m, diameter
  int rays = 100;
  double q_scale = 1.0;
  double r_scale = 1.0;

  void Validate() const;
};

struct RegionSample {
  int plane = 0;
  double angle = 0.0;
  Eigen::VectorXd direction;  // 8, reduced error
  double alpha = 0.0;
  std::string binding;
  bool unbounded = false;
};

/// Coordinate planes of the sagittal error: e1 = s1, e2 = s2, e3 = common
/// velocity error. Plane 0: (e1, e2), 1: (e1, e3), 2: (e2, e3).
inline constexpr int kRegionPlanes = 3;
Eigen::VectorXd RegionAxis(int axis);
const char* RegionPlaneName(int plane);

/// Precomputed maps for repeated ray queries of one query.
class ViableProblem {
 public:
  explicit ViableProblem(const ViableQuery& query);

  RegionSample MaxScale(ViableController kind, const Eigen::VectorXd& direction) const;

  const ViableQuery& query() const { return query_; }
  const PeriodicGait& gait() const { return gait_; }

 private:
  RegionSample ControllerScale(ViableController kind, const Eigen::VectorXd& dir) const;
  RegionSample MaximalScale(const Eigen::VectorXd& dir) const;

  ViableQuery query_;
  PhaseLti model_;
  PeriodicGait gait_;
  DlqrDesign design_;
  double period_ = 0.0;
  double dt_ = 0.0;
  std::vector<Eigen::MatrixXd> sub_a_;
  std::vector<Eigen::MatrixXd> sub_b_;
  std::vector<Eigen::MatrixXd> proj_gain_;
  Eigen::MatrixXd event_map_;
};

RegionSample LpMaxScale(const ViableQuery& query, ViableController kind,
                        const Eigen::VectorXd& direction);

struct RegionScanResult {
  ViableController controller = ViableController::kDlqr;
  std::vector<RegionSample> samples;
  /// Boundary points alpha * (plane coordinates), one polyline per plane.
  std::vector<std::vector<Eigen::Vector2d>> slices;
  double mean_alpha = 0.0;
};

/// Scans `rays` directions on every plane, or on `only_plane` when >= 0.
/// Slices are indexed in scan order.
RegionScanResult RegionScan(const ViableProblem& problem, ViableController kind,
                            int only_plane = -1);
RegionScanResult RegionScan(const ViableQuery& query, ViableController kind,
                            int only_plane = -1);

/// Polygon centroid of a closed boundary polyline.
Eigen::Vector2d SliceCentroid(const std::vector<Eigen::Vector2d>& slice);

/// Maximal scale for x0 = alpha on x' = x + u, inputs constant over each
/// of `subphases` pieces per step, |u| <= u_max, x = 0 after `steps` steps.
double ScalarToyMaxScale(double period, int steps, int subphases, double u_max);

// Scalar stability scan --------------------------------------------------

struct LyapunovRow {
  double gain = 0.0;
  bool singular = false;
  double singular_time = 0.0;
  bool decreasing = false;
  double max_rate = 0.0;  // largest eps(t) sampled
};

/// Checks V(t) = x^2/2 along projection feedback over one step for each gain.
/// Gains <= 1 violate the precondition and raise DomainError. Gains at or
/// above the tightened bound report the in-phase singularity.
std::vector<LyapunovRow> LyapunovScan(double period, const std::vector<double>& gains,
                                      int samples = 1000);

struct ScalarTrace {
  std::vector<double> t;
  std::vector<double> continuous;
  std::vector<double> dlqr;
  std::vector<double> projection;
};

/// Responses of x' = x + u + w from x = 0 to a unit pulse w over
/// [pulse_start, pulse_end] under continuous, discrete and projection
/// feedback, sampled every `dt`.
ScalarTrace ScalarResponses(double period, double gain, double pulse_start,
                            double pulse_end, double horizon, double dt = 1e-3);

}  // namespace walkproj
