#include "walkproj/sim.h"

#include <algorithm>
#include <cmath>

#include "walkproj/errors.h"
#include "walkproj/projection.h"

namespace walkproj {

namespace {

// Reduced-frame sign flip for phase k.
Eigen::MatrixXd PhaseSign(const Eigen::MatrixXd& o, int k) {
  return (k % 2 == 0) ? Eigen::MatrixXd::Identity(o.rows(), o.cols()) : o;
}

double SpeedAt(const Scenario& scn, int step) {
  double v = scn.speed;
  for (const SpeedChange& c : scn.speed_schedule) {
    if (c.step <= step) v = c.speed;
  }
  return v;
}

struct Window {
  double start;
  double end;
  Eigen::Vector2d force;
};

std::vector<Window> PushesInPhase(const Scenario& scn, int k, double period) {
  std::vector<Window> out;
  for (const PushEvent& p : scn.pushes) {
    if (p.phase == k && p.end_pct > p.start_pct) {
      out.push_back({p.start_pct * period, p.end_pct * period, p.force});
    }
  }
  return out;
}

}  // namespace

const char* ControllerName(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::kOpenLoop: return "open_loop";
    case ControllerKind::kDlqr: return "dlqr";
    case ControllerKind::kProjection: return "projection";
  }
  return "unknown";
}

std::optional<ControllerKind> ParseControllerKind(const std::string& name) {
  if (name == "open_loop") return ControllerKind::kOpenLoop;
  if (name == "dlqr") return ControllerKind::kDlqr;
  if (name == "projection") return ControllerKind::kProjection;
  return std::nullopt;
}

void Scenario::Validate() const {
  body.Validate();
  if (!(frequency > 0.0)) throw ArgumentError("frequency must be positive");
  if (substeps < 1) throw ArgumentError("substeps must be at least 1");
  if (n_steps < 1) throw ArgumentError("n_steps must be at least 1");
  for (const PushEvent& p : pushes) {
    if (p.phase < 0) throw ArgumentError("push phase must be non-negative");
    if (!(p.start_pct >= 0.0 && p.start_pct <= p.end_pct && p.end_pct <= 1.0)) {
      throw ArgumentError("push window must satisfy 0 <= start <= end <= 1");
    }
    if (!p.force.allFinite()) throw ArgumentError("push force must be finite");
  }
  for (size_t i = 1; i < speed_schedule.size(); ++i) {
    if (speed_schedule[i].step <= speed_schedule[i - 1].step) {
      throw ArgumentError("speed schedule steps must be strictly increasing");
    }
  }
  if (initial_error.size() != 0 && initial_error.size() != 8) {
    throw ArgumentError("initial error must have 8 entries");
  }
}

WalkSetup MakeWalkSetup(const Scenario& scn) {
  scn.Validate();
  WalkSetup s;
  s.model = BuildModel(scn.model_kind, scn.body);
  s.gait = SolvePeriodicGait(s.model, scn.frequency, scn.speed);
  for (const SpeedChange& c : scn.speed_schedule) ScaleGait(s.gait, c.speed);
  s.period = s.gait.period;
  s.substeps = scn.substeps;
  const ErrorSystem err = MakeErrorSystem(s.model, s.period);
  s.design = DesignDlqr(err, DefaultStateCost(scn.q_scale),
                        DefaultInputCost(s.model, scn.r_scale));
  const double dt = s.period / scn.substeps;
  s.step_transition = Transition(s.model, dt);
  if (scn.controller == ControllerKind::kProjection) {
    s.projection_gains.resize(scn.substeps);
    s.projection_singular.assign(scn.substeps, false);
    for (int i = 0; i < scn.substeps; ++i) {
      try {
        s.projection_gains[i] = ProjectionGain(s.model, s.design, s.period, i * dt);
      } catch (const ProjectionSingularity&) {
        s.projection_singular[i] = true;
      }
    }
  }
  return s;
}

TrajectoryLog RunWalk(const Scenario& scn) { return RunWalk(scn, MakeWalkSetup(scn)); }

TrajectoryLog RunWalk(const Scenario& scn, const WalkSetup& setup) {
  scn.Validate();
  const SymmetryOps& ops = GetSymmetryOps();
  const PhaseLti& model = setup.model;
  const double period = setup.period;
  const int nsub = setup.substeps;
  const double dt = period / nsub;
  const int ntorque = model.torque_dim();
  const double fall_bound = scn.fall_factor * model.leg_length;

  if (scn.controller == ControllerKind::kProjection &&
      static_cast<int>(setup.projection_gains.size()) != nsub) {
    throw ArgumentError("walk setup was built without projection gains");
  }

  TrajectoryLog log;
  log.controller = scn.controller;
  log.period = period;

  PeriodicGait gait = ScaleGait(setup.gait, SpeedAt(scn, 0));
  Eigen::VectorXd q = gait.qbar;
  if (scn.initial_error.size() == 8) q += ops.mhat * scn.initial_error;

  auto advance = [&](const Eigen::VectorXd& x, double from, double to,
                     const Eigen::VectorXd& u, double d,
                     const Eigen::Vector2d& force) -> Eigen::VectorXd {
    if (to <= from) return x;
    const bool regular = std::abs((to - from) - dt) < 1e-12 * period;
    const TransitionSet ts = regular ? setup.step_transition : Transition(model, to - from);
    return ts.a * x + ts.b * (RampShift(ntorque, from) * u) + ts.c * d + ts.w * force;
  };

  Eigen::VectorXd du_hold = Eigen::VectorXd::Zero(model.input_dim());
  for (int k = 0; k <= scn.n_steps; ++k) {
    if (k > 0) {
      q = ops.s * q;
      q.segment(model.n_pos() + 4, 2).setZero();
      const double v = SpeedAt(scn, k);
      if (v != gait.speed) gait = ScaleGait(setup.gait, v);
    }
    const Eigen::MatrixXd sign = PhaseSign(ops.o, k);
    const Eigen::MatrixXd sign_u = PhaseSign(ops.o_input, k);
    const double d = (k % 2 == 0) ? gait.dbar : -gait.dbar;

    const Eigen::VectorXd err0 = sign * ops.m * q - ops.m * gait.qbar;
    Eigen::VectorXd du_event = Eigen::VectorXd::Zero(model.input_dim());
    if (scn.controller != ControllerKind::kOpenLoop) du_event = -setup.design.k_full * err0;
    EventRecord ev;
    ev.step = k;
    ev.t = k * period;
    ev.error = err0;
    ev.du = du_event;
    ev.stance_foot = q.segment(4, 2);
    ev.speed_target = gait.speed;
    log.events.push_back(ev);
    if (k == scn.n_steps) break;

    const std::vector<Window> pushes = PushesInPhase(scn, k, period);
    du_hold = du_event;
    for (int i = 0; i < nsub; ++i) {
      const double t0 = i * dt;
      const double t1 = (i + 1 == nsub) ? period : (i + 1) * dt;
      const Eigen::VectorXd qn = NominalState(model, gait, t0);
      const Eigen::VectorXd e = sign * ops.m * q - ops.m * qn;
      const double enorm = e.norm();

      LogSample smp;
      smp.t = k * period + t0;
      smp.phase = k;
      smp.q = q;
      smp.err_norm = enorm;
      if (!std::isfinite(enorm) || enorm > fall_bound) {
        smp.input = Eigen::VectorXd::Zero(model.input_dim());
        smp.du = smp.input;
        log.samples.push_back(smp);
        log.fell = true;
        log.fall_step = k;
        return log;
      }

      Eigen::VectorXd du = Eigen::VectorXd::Zero(model.input_dim());
      if (scn.controller == ControllerKind::kDlqr) {
        du = du_event;
      } else if (scn.controller == ControllerKind::kProjection) {
        if (i == 0) {
          du = du_event;
        } else if (!setup.projection_singular[i]) {
          du = setup.projection_gains[i] * e;
        } else {
          du = du_hold;
        }
        du_hold = du;
      }
      const Eigen::VectorXd u = sign_u * (gait.ubar + du);

      // Split the substep at push boundaries.
      std::vector<double> cuts{t0, t1};
      for (const Window& w : pushes) {
        if (w.start > t0 && w.start < t1) cuts.push_back(w.start);
        if (w.end > t0 && w.end < t1) cuts.push_back(w.end);
      }
      std::sort(cuts.begin(), cuts.end());
      bool active = false;
      for (size_t c = 0; c + 1 < cuts.size(); ++c) {
        const double mid = 0.5 * (cuts[c] + cuts[c + 1]);
        Eigen::Vector2d force = Eigen::Vector2d::Zero();
        for (const Window& w : pushes) {
          if (mid > w.start && mid < w.end) force += w.force;
        }
        if (force.squaredNorm() > 0.0) active = true;
        q = advance(q, cuts[c], cuts[c + 1], u, d, force);
      }

      smp.input = u;
      smp.du = du;
      smp.push_active = active;
      log.samples.push_back(smp);
    }
  }

  // Closing sample at the final touch-down.
  LogSample last;
  last.t = scn.n_steps * period;
  last.phase = scn.n_steps;
  last.q = q;
  last.input = Eigen::VectorXd::Zero(model.input_dim());
  last.du = last.input;
  last.err_norm = log.events.back().error.norm();
  log.samples.push_back(last);
  return log;
}

SpeedTrackResult SpeedTrack(const Scenario& scn) { return SpeedTrack(scn, MakeWalkSetup(scn)); }

SpeedTrackResult SpeedTrack(const Scenario& scn, const WalkSetup& setup) {
  for (const SpeedChange& c : scn.speed_schedule) ScaleGait(setup.gait, c.speed);
  SpeedTrackResult res;
  res.log = RunWalk(scn, setup);
  const auto& ev = res.log.events;
  for (size_t k = 0; k + 1 < ev.size(); ++k) {
    res.step_speeds.push_back((ev[k + 1].stance_foot(0) - ev[k].stance_foot(0)) / setup.period);
    res.step_targets.push_back(ev[k].speed_target);
  }
  const int nsub = setup.substeps;
  const int steps = static_cast<int>(ev.size()) - 1;
  for (int k = 0; k < steps; ++k) {
    double acc = 0.0;
    int count = 0;
    for (int i = 0; i < nsub; ++i) {
      const size_t idx = static_cast<size_t>(k) * nsub + i;
      if (idx >= res.log.samples.size()) break;
      acc += res.log.samples[idx].du.squaredNorm();
      ++count;
    }
    res.rms_correction.push_back(count > 0 ? std::sqrt(acc / count) : 0.0);
  }
  return res;
}

}  // namespace walkproj
