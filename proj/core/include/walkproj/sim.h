#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "walkproj/dlqr.h"
#include "walkproj/gait.h"
#include "walkproj/models.h"

namespace walkproj {

enum class ControllerKind { kOpenLoop, kDlqr, kProjection };

const char* ControllerName(ControllerKind kind);
/// Accepts "open_loop", "dlqr", "projection".
std::optional<ControllerKind> ParseControllerKind(const std::string& name);

/// A force (sagittal, lateral) in N held over a fraction of one phase.
struct PushEvent {
  int phase = 0;
  double start_pct = 0.0;
  double end_pct = 0.0;
  Eigen::Vector2d force = Eigen::Vector2d::Zero();
};

/// New desired speed, effective at the touch-down that starts `step`.
struct SpeedChange {
  int step = 0;
  double speed = 0.0;
};

struct Scenario {
  ModelKind model_kind = ModelKind::k3lp;
  BodyParams body;
  double frequency = 2.0;  // steps/s
  double speed = 1.0;      // m/s
  ControllerKind controller = ControllerKind::kProjection;
  double q_scale = 1.0;
  double r_scale = 1.0;
  int substeps = 50;
  int n_steps = 6;
  std::vector<PushEvent> pushes;
  std::vector<SpeedChange> speed_schedule;
  /// Optional reduced error added to the nominal initial state.
  Eigen::VectorXd initial_error;
  /// Fall when the reduced error exceeds this many leg lengths.
  double fall_factor = 1e3;

  void Validate() const;
};

/// Everything a run needs that does not depend on pushes or the speed
/// schedule. Reusable across runs sharing model, frequency and costs.
struct WalkSetup {
  PhaseLti model;
  PeriodicGait gait;
  DlqrDesign design;
  double period = 0.0;
  int substeps = 0;
  TransitionSet step_transition;  // over one substep
  std::vector<Eigen::MatrixXd> projection_gains;
  std::vector<bool> projection_singular;
};

WalkSetup MakeWalkSetup(const Scenario& scn);

struct LogSample {
  double t = 0.0;
  int phase = 0;
  Eigen::VectorXd q;       // world state at t
  Eigen::VectorXd input;   // applied input parameters, world frame
  Eigen::VectorXd du;      // corrective part, reduced frame
  double err_norm = 0.0;
  bool push_active = false;
};

struct EventRecord {
  int step = 0;
  double t = 0.0;
  Eigen::VectorXd error;   // reduced error after touch-down
  Eigen::VectorXd du;      // event correction
  Eigen::Vector2d stance_foot = Eigen::Vector2d::Zero();
  double speed_target = 0.0;
};

struct TrajectoryLog {
  ControllerKind controller = ControllerKind::kOpenLoop;
  double period = 0.0;
  std::vector<LogSample> samples;
  std::vector<EventRecord> events;
  bool fell = false;
  int fall_step = -1;
};

TrajectoryLog RunWalk(const Scenario& scn);
TrajectoryLog RunWalk(const Scenario& scn, const WalkSetup& setup);

struct SpeedTrackResult {
  TrajectoryLog log;
  /// Stance-to-stance sagittal distance over each step divided by T.
  std::vector<double> step_speeds;
  std::vector<double> step_targets;
  /// RMS of the corrective input over each step.
  std::vector<double> rms_correction;
};

SpeedTrackResult SpeedTrack(const Scenario& scn);
SpeedTrackResult SpeedTrack(const Scenario& scn, const WalkSetup& setup);

}  // namespace walkproj
