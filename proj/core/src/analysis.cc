#include "walkproj/analysis.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "walkproj/errors.h"
#include "walkproj/gait.h"
#include "walkproj/lp.h"
#include "walkproj/projection.h"
#include "walkproj/scalar.h"

namespace walkproj {

namespace {

constexpr int kSag[4] = {0, 2, 4, 6};

std::string Tag(const char* what, int step, int sub = -1) {
  std::string s = std::string(what) + "@" + std::to_string(step);
  if (sub >= 0) s += "." + std::to_string(sub);
  return s;
}

// A bound  nom + alpha * dir <= limit  collected from one controller run.
struct RatioBound {
  double nom;
  double dir;
  double limit;
  std::string tag;
};

RegionSample Resolve(const std::vector<RatioBound>& bounds, const Eigen::VectorXd& dir) {
  RegionSample s;
  s.direction = dir;
  s.alpha = std::numeric_limits<double>::infinity();
  for (const RatioBound& b : bounds) {
    if (b.nom > b.limit) {
      s.alpha = 0.0;
      s.binding = "nominal:" + b.tag;
      return s;
    }
    if (b.dir > 1e-14) {
      const double a = (b.limit - b.nom) / b.dir;
      if (a < s.alpha) {
        s.alpha = a;
        s.binding = b.tag;
      }
    }
  }
  if (!std::isfinite(s.alpha)) {
    s.unbounded = true;
    s.binding = "none";
  }
  return s;
}

}  // namespace

// Step-to-step maps ------------------------------------------------------

Eigen::MatrixXd StepMap(const PhaseLti& model, const DlqrDesign& design,
                        ControllerKind kind, double period, int substeps) {
  const SymmetryOps& ops = GetSymmetryOps();
  const Eigen::MatrixXd event = ops.reset * ops.o * ops.m * ops.s * ops.mhat;
  if (kind != ControllerKind::kProjection) {
    const ErrorSystem err = MakeErrorSystem(model, period);
    if (kind == ControllerKind::kOpenLoop) return ops.reset * err.ahat;
    return ops.reset * (err.ahat - err.bhat * design.k_full);
  }
  if (substeps < 1) throw ArgumentError("StepMap: substeps must be positive");
  const double dt = period / substeps;
  Eigen::MatrixXd phi = Eigen::MatrixXd::Identity(8, 8);
  Eigen::MatrixXd du = -design.k_full;
  for (int i = 0; i < substeps; ++i) {
    const double t0 = i * dt;
    if (i > 0) {
      try {
        du = ProjectionGain(model, design, period, t0) * phi;
      } catch (const ProjectionSingularity&) {
      }
    }
    const SubphaseMaps maps = MakeSubphaseMaps(model, t0, dt);
    phi = maps.a * phi + maps.b * du;
  }
  return event * phi;
}

Eigen::Matrix3d SagittalPoincareMap(const Eigen::MatrixXd& step_map) {
  Eigen::Matrix4d p4;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) p4(i, j) = step_map(kSag[i], kSag[j]);
  }
  Eigen::Matrix<double, 4, 3> lift = Eigen::Matrix<double, 4, 3>::Zero();
  lift(0, 0) = 1.0;
  lift(1, 1) = 1.0;
  lift(2, 2) = 1.0;
  lift(3, 2) = 1.0;
  return (p4 * lift).topRows(3);
}

std::vector<double> PoincareEigenvalues(const PhaseLti& model, ControllerKind kind,
                                        double frequency,
                                        const PoincareOptions& options) {
  if (!(frequency > 0.0)) throw ArgumentError("frequency must be positive");
  const double period = 1.0 / frequency;
  DlqrDesign design;
  if (kind != ControllerKind::kOpenLoop) {
    design = DesignDlqr(MakeErrorSystem(model, period), DefaultStateCost(options.q_scale),
                        DefaultInputCost(model, options.r_scale));
  }
  const Eigen::Matrix3d map =
      SagittalPoincareMap(StepMap(model, design, kind, period, options.substeps));
  const Eigen::Vector3cd ev = map.eigenvalues();
  std::vector<double> mags;
  for (int i = 0; i < 3; ++i) mags.push_back(std::abs(ev(i)));
  std::sort(mags.begin(), mags.end(), std::greater<>());
  return mags;
}

// Push sweeps ------------------------------------------------------------

std::vector<PushSweepCell> PushSweep(const Scenario& base,
                                     const std::vector<double>& starts,
                                     const std::vector<double>& ends,
                                     const Eigen::Vector2d& force,
                                     const std::vector<ControllerKind>& controllers) {
  std::vector<PushSweepCell> out;
  for (ControllerKind kind : controllers) {
    Scenario scn = base;
    scn.controller = kind;
    scn.pushes.clear();
    scn.n_steps = std::max(scn.n_steps, 3);
    const WalkSetup setup = MakeWalkSetup(scn);
    for (double s : starts) {
      for (double e : ends) {
        if (s > e) continue;
        if (s < 0.0 || e > 1.0) throw ArgumentError("push grid outside [0, 1]");
        scn.pushes = {PushEvent{0, s, e, force}};
        const TrajectoryLog log = RunWalk(scn, setup);
        PushSweepCell cell;
        cell.start_pct = s;
        cell.end_pct = e;
        cell.controller = kind;
        cell.fell = log.fell;
        for (int k = 0; k < 3; ++k) {
          cell.norms[k] = (k + 1 < static_cast<int>(log.events.size()))
                              ? log.events[k + 1].error.norm()
                              : std::numeric_limits<double>::infinity();
        }
        out.push_back(cell);
      }
    }
  }
  return out;
}

// Viable regions ---------------------------------------------------------

const char* ViableControllerName(ViableController kind) {
  switch (kind) {
    case ViableController::kDlqr: return "dlqr";
    case ViableController::kProjection: return "projection";
    case ViableController::kMaximal: return "maximal";
  }
  return "unknown";
}

void ViableQuery::Validate() const {
  body.Validate();
  if (!(frequency > 0.0)) throw ArgumentError("frequency must be positive");
  if (n_steps < 1 || subphases < 1) throw ArgumentError("steps and subphases must be positive");
  if (!(torque_limit > 0.0) || !(diamond > 0.0)) throw ArgumentError("bounds must be positive");
  if (rays < 1) throw ArgumentError("rays must be positive");
}

Eigen::VectorXd RegionAxis(int axis) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(8);
  switch (axis) {
    case 0: v(0) = 1.0; break;
    case 1: v(2) = 1.0; break;
    case 2: v(4) = 1.0; v(6) = 1.0; break;
    default: throw ArgumentError("region axis must be 0, 1 or 2");
  }
  return v;
}

const char* RegionPlaneName(int plane) {
  static const char* names[kRegionPlanes] = {"e1_e2", "e1_e3", "e2_e3"};
  if (plane < 0 || plane >= kRegionPlanes) throw ArgumentError("unknown plane");
  return names[plane];
}

namespace {

std::pair<int, int> PlaneAxes(int plane) {
  static const std::pair<int, int> axes[kRegionPlanes] = {{0, 1}, {0, 2}, {1, 2}};
  return axes[plane];
}

}  // namespace

ViableProblem::ViableProblem(const ViableQuery& query) : query_(query) {
  query_.Validate();
  model_ = BuildModel(query_.model_kind, query_.body);
  gait_ = SolvePeriodicGait(model_, query_.frequency, query_.speed);
  period_ = gait_.period;
  dt_ = period_ / query_.subphases;
  design_ = DesignDlqr(MakeErrorSystem(model_, period_), DefaultStateCost(query_.q_scale),
                       DefaultInputCost(model_, query_.r_scale));
  const SymmetryOps& ops = GetSymmetryOps();
  event_map_ = ops.reset * ops.o * ops.m * ops.s * ops.mhat;
  for (int j = 0; j < query_.subphases; ++j) {
    const SubphaseMaps maps = MakeSubphaseMaps(model_, j * dt_, dt_);
    sub_a_.push_back(maps.a);
    sub_b_.push_back(maps.b);
    proj_gain_.push_back(ProjectionGain(model_, design_, period_, j * dt_));
  }
}

RegionSample ViableProblem::MaxScale(ViableController kind,
                                     const Eigen::VectorXd& direction) const {
  if (direction.size() != 8 || !(direction.norm() > 0.0)) {
    throw ArgumentError("ray direction must be a non-zero 8-vector");
  }
  if (kind == ViableController::kMaximal) return MaximalScale(direction);
  return ControllerScale(kind, direction);
}

RegionSample ViableProblem::ControllerScale(ViableController kind,
                                            const Eigen::VectorXd& dir) const {
  const double lim = query_.torque_limit;
  const double radius = 0.5 * query_.diamond;
  const Eigen::VectorXd& ubar = gait_.ubar;
  std::vector<RatioBound> bounds;
  Eigen::VectorXd e = dir;
  for (int k = 0; k < query_.n_steps; ++k) {
    // The error appears just after the first event decision.
    const Eigen::VectorXd du_event =
        k == 0 ? Eigen::VectorXd::Zero(4) : Eigen::VectorXd(-design_.k_full * e);
    for (int j = 0; j < query_.subphases; ++j) {
      Eigen::VectorXd du = du_event;
      if (kind == ViableController::kProjection && j > 0) du = proj_gain_[j] * e;
      for (int end = 0; end < 2; ++end) {
        const double tau = (j + end) * dt_;
        for (int c = 0; c < 2; ++c) {
          const double nom = ubar(c) + tau * ubar(2 + c);
          const double d = du(c) + tau * du(2 + c);
          const std::string tag = Tag(c == 0 ? "torque_x" : "torque_y", k, j);
          bounds.push_back({nom, d, lim, tag});
          bounds.push_back({-nom, -d, lim, tag});
        }
      }
      e = sub_a_[j] * e + sub_b_[j] * du;
    }
    const Eigen::Vector2d step(e(2) - e(0), e(3) - e(1));
    for (int sx = -1; sx <= 1; sx += 2) {
      for (int sy = -1; sy <= 1; sy += 2) {
        bounds.push_back({sx * gait_.footstep(0) + sy * gait_.footstep(1),
                          sx * step(0) + sy * step(1), radius, Tag("diamond", k)});
      }
    }
    e = event_map_ * e;
  }
  return Resolve(bounds, dir);
}

RegionSample ViableProblem::MaximalScale(const Eigen::VectorXd& dir) const {
  const int ns = query_.n_steps;
  const int sp = query_.subphases;
  const int nvar = 1 + 4 * ns * sp;
  const double lim = query_.torque_limit;
  const double radius = 0.5 * query_.diamond;
  const Eigen::VectorXd& ubar = gait_.ubar;

  std::vector<Eigen::RowVectorXd> rows;
  std::vector<double> rhs;
  std::vector<std::string> tags;
  auto add = [&](const Eigen::RowVectorXd& r, double b, const std::string& tag) {
    rows.push_back(r);
    rhs.push_back(b);
    tags.push_back(tag);
  };

  Eigen::MatrixXd ex = Eigen::MatrixXd::Zero(8, nvar);
  ex.col(0) = dir;
  for (int k = 0; k < ns; ++k) {
    for (int j = 0; j < sp; ++j) {
      const int base = 1 + 4 * (k * sp + j);
      for (int end = 0; end < 2; ++end) {
        const double tau = (j + end) * dt_;
        for (int c = 0; c < 2; ++c) {
          Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(nvar);
          r(base + c) = 1.0;
          r(base + 2 + c) = tau;
          const double nom = ubar(c) + tau * ubar(2 + c);
          const std::string tag = Tag(c == 0 ? "torque_x" : "torque_y", k, j);
          add(r, lim - nom, tag);
          add(-r, lim + nom, tag);
        }
      }
      ex = sub_a_[j] * ex;
      ex.middleCols(base, 4) += sub_b_[j];
    }
    const Eigen::RowVectorXd fx = ex.row(2) - ex.row(0);
    const Eigen::RowVectorXd fy = ex.row(3) - ex.row(1);
    for (int sx = -1; sx <= 1; sx += 2) {
      for (int sy = -1; sy <= 1; sy += 2) {
        add(sx * fx + sy * fy,
            radius - (sx * gait_.footstep(0) + sy * gait_.footstep(1)), Tag("diamond", k));
      }
    }
    ex = event_map_ * ex;
  }

  LinearProgram lp;
  lp.c = Eigen::VectorXd::Zero(nvar);
  lp.c(0) = -1.0;
  lp.a_ub.resize(static_cast<Eigen::Index>(rows.size()), nvar);
  lp.b_ub.resize(static_cast<Eigen::Index>(rows.size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    lp.a_ub.row(i) = rows[i];
    lp.b_ub(i) = rhs[i];
  }
  lp.a_eq = ex;
  lp.b_eq = Eigen::VectorXd::Zero(8);
  lp.free.assign(nvar, true);
  lp.free[0] = false;

  RegionSample s;
  s.direction = dir;
  const LpResult res = SolveLp(lp);
  if (res.status == LpStatus::kUnbounded) {
    s.alpha = std::numeric_limits<double>::infinity();
    s.unbounded = true;
    s.binding = "none";
    return s;
  }
  if (res.status != LpStatus::kOptimal) {
    throw NumericalError(std::string("maximal viable LP: ") + LpStatusName(res.status));
  }
  s.alpha = res.x(0);
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < rows.size(); ++i) {
    const double slack = (rhs[i] - rows[i].dot(res.x)) / std::max(1.0, rows[i].norm());
    if (slack < best) {
      best = slack;
      s.binding = tags[i];
    }
  }
  return s;
}

RegionSample LpMaxScale(const ViableQuery& query, ViableController kind,
                        const Eigen::VectorXd& direction) {
  return ViableProblem(query).MaxScale(kind, direction);
}

RegionScanResult RegionScan(const ViableProblem& problem, ViableController kind,
                            int only_plane) {
  if (only_plane >= kRegionPlanes) throw ArgumentError("unknown plane");
  const int rays = problem.query().rays;
  RegionScanResult out;
  out.controller = kind;
  double sum = 0.0;
  for (int plane = 0; plane < kRegionPlanes; ++plane) {
    if (only_plane >= 0 && plane != only_plane) continue;
    const auto [ia, ib] = PlaneAxes(plane);
    const Eigen::VectorXd a = RegionAxis(ia);
    const Eigen::VectorXd b = RegionAxis(ib);
    std::vector<Eigen::Vector2d> slice;
    for (int i = 0; i < rays; ++i) {
      const double ang = 2.0 * std::numbers::pi * i / rays;
      const Eigen::VectorXd raw = std::cos(ang) * a + std::sin(ang) * b;
      const double nrm = raw.norm();
      RegionSample s = problem.MaxScale(kind, raw / nrm);
      s.plane = plane;
      s.angle = ang;
      slice.push_back(s.alpha / nrm * Eigen::Vector2d(std::cos(ang), std::sin(ang)));
      sum += s.alpha;
      out.samples.push_back(std::move(s));
    }
    out.slices.push_back(std::move(slice));
  }
  out.mean_alpha = sum / static_cast<double>(out.samples.size());
  return out;
}

RegionScanResult RegionScan(const ViableQuery& query, ViableController kind,
                            int only_plane) {
  return RegionScan(ViableProblem(query), kind, only_plane);
}

Eigen::Vector2d SliceCentroid(const std::vector<Eigen::Vector2d>& slice) {
  double area = 0.0;
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  for (size_t i = 0; i < slice.size(); ++i) {
    const Eigen::Vector2d& p = slice[i];
    const Eigen::Vector2d& q = slice[(i + 1) % slice.size()];
    const double cross = p.x() * q.y() - q.x() * p.y();
    area += cross;
    c += cross * (p + q);
  }
  if (std::abs(area) < 1e-300) return Eigen::Vector2d::Zero();
  return c / (3.0 * area);
}

double ScalarToyMaxScale(double period, int steps, int subphases, double u_max) {
  if (!(period > 0.0) || steps < 1 || subphases < 1 || !(u_max > 0.0)) {
    throw ArgumentError("ScalarToyMaxScale: invalid arguments");
  }
  const double dt = period / subphases;
  const double a = std::exp(dt);
  const double b = std::expm1(dt);
  const int nu = steps * subphases;
  // x_end = a^n alpha + sum_j a^(n-1-j) b u_j = 0.
  LinearProgram lp;
  lp.c = Eigen::VectorXd::Zero(nu + 1);
  lp.c(0) = -1.0;
  lp.a_eq = Eigen::MatrixXd::Zero(1, nu + 1);
  lp.a_eq(0, 0) = std::pow(a, nu);
  for (int j = 0; j < nu; ++j) lp.a_eq(0, 1 + j) = std::pow(a, nu - 1 - j) * b;
  lp.b_eq = Eigen::VectorXd::Zero(1);
  lp.a_ub = Eigen::MatrixXd::Zero(2 * nu, nu + 1);
  lp.b_ub = Eigen::VectorXd::Constant(2 * nu, u_max);
  for (int j = 0; j < nu; ++j) {
    lp.a_ub(2 * j, 1 + j) = 1.0;
    lp.a_ub(2 * j + 1, 1 + j) = -1.0;
  }
  lp.free.assign(nu + 1, true);
  lp.free[0] = false;
  const LpResult res = SolveLp(lp);
  if (res.status != LpStatus::kOptimal) {
    throw NumericalError(std::string("scalar toy LP: ") + LpStatusName(res.status));
  }
  return res.x(0);
}

// Scalar stability scan --------------------------------------------------

std::vector<LyapunovRow> LyapunovScan(double period, const std::vector<double>& gains,
                                      int samples) {
  if (!(period > 0.0) || samples < 2) throw ArgumentError("LyapunovScan: invalid arguments");
  std::vector<LyapunovRow> rows;
  for (double g : gains) {
    if (!(g > 1.0)) throw DomainError("gain must exceed 1 for a stabilizing projection loop");
    LyapunovRow row;
    row.gain = g;
    row.singular_time = ScalarSingularityTime(g);
    if (row.singular_time <= period) {
      row.singular = true;
      rows.push_back(row);
      continue;
    }
    // x(t) / x(0) = e^t (1 - G) + G under projection feedback.
    bool ok = true;
    double prev_v = std::numeric_limits<double>::infinity();
    const double eps0 = ScalarProjectionFeedback(g, 0.0);
    row.max_rate = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
      const double t = period * i / (samples - 1);
      const double eps = ScalarProjectionFeedback(g, t);
      const double x = std::exp(t) * (1.0 - g) + g;
      const double v = 0.5 * x * x;
      row.max_rate = std::max(row.max_rate, eps);
      if (!(eps < 0.0) || eps > eps0 || !(v < prev_v)) ok = false;
      prev_v = v;
    }
    row.decreasing = ok;
    rows.push_back(row);
  }
  return rows;
}

ScalarTrace ScalarResponses(double period, double gain, double pulse_start,
                            double pulse_end, double horizon, double dt) {
  if (!(period > 0.0) || !(dt > 0.0) || !(horizon > 0.0)) {
    throw ArgumentError("ScalarResponses: invalid arguments");
  }
  const double rate = GainToContinuous(gain, period);
  const int n = static_cast<int>(std::llround(horizon / dt));
  const int per_step = static_cast<int>(std::llround(period / dt));
  const double ea = std::exp(dt);
  const double eb = std::expm1(dt);
  const double lc = 1.0 - rate;
  const double ec = std::exp(lc * dt);
  const double fc = std::abs(lc) > 1e-14 ? std::expm1(lc * dt) / lc : dt;

  ScalarTrace tr;
  double xc = 0.0, xd = 0.0, xp = 0.0, ud = 0.0, up = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = i * dt;
    tr.t.push_back(t);
    tr.continuous.push_back(xc);
    tr.dlqr.push_back(xd);
    tr.projection.push_back(xp);
    if (i == n) break;
    const double mid = t + 0.5 * dt;
    const double w = (mid > pulse_start && mid < pulse_end) ? 1.0 : 0.0;
    const int local = i % per_step;
    if (local == 0) ud = -gain * xd;
    try {
      up = ScalarProjectionInput(gain, local * dt, xp);
    } catch (const ProjectionSingularity&) {
    }
    xc = ec * xc + fc * w;
    xd = ea * xd + eb * (ud + w);
    xp = ea * xp + eb * (up + w);
  }
  return tr;
}

}  // namespace walkproj
