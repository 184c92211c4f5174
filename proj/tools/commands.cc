#include "commands.h"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <tuple>

#include "CLI11.hpp"
#include "walkproj/errors.h"
#include "walkproj/gait.h"
#include "walkproj/scalar.h"

namespace walkproj::cli {
namespace {

// Either the requested file or the data stream.
class CsvSink {
 public:
  CsvSink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ConfigError("cannot write '" + path + "'");
      os_ = &file_;
    }
    os_->precision(12);
  }
  std::ostream& stream() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

std::ostream& Info(const CommandOptions& opt, CommandIo io) {
  static std::ostream null_stream(nullptr);
  if (opt.quiet) return null_stream;
  return opt.out.empty() ? io.info : io.data;
}

std::string ControllerChoice(const ConfigFile& cfg, const CommandOptions& opt,
                             const char* fallback) {
  if (!opt.controller.empty()) return opt.controller;
  return fallback ? fallback : cfg.controller;
}

std::vector<ControllerKind> WalkControllers(const std::string& name) {
  if (name == "all") {
    return {ControllerKind::kOpenLoop, ControllerKind::kDlqr, ControllerKind::kProjection};
  }
  auto kind = ParseControllerKind(name);
  if (!kind) throw ConfigError("unknown controller '" + name + "'");
  return {*kind};
}

std::vector<ViableController> RegionControllers(const std::string& name) {
  if (name == "all") {
    return {ViableController::kDlqr, ViableController::kProjection, ViableController::kMaximal};
  }
  for (ViableController k : {ViableController::kDlqr, ViableController::kProjection,
                             ViableController::kMaximal}) {
    if (name == ViableControllerName(k)) return {k};
  }
  throw ConfigError("viable controller must be dlqr, projection, maximal or all");
}

// run.csv -> run_dlqr.csv
std::string SuffixedPath(const std::string& path, const std::string& tag) {
  std::filesystem::path p(path);
  std::filesystem::path name = p.stem();
  name += "_" + tag;
  name += p.extension();
  return (p.parent_path() / name).string();
}

void PrintVector(std::ostream& os, const char* label, const Eigen::VectorXd& v) {
  os << label;
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : " [") << v[i];
  os << "]\n";
}

PhaseLti ConfigModel(const ConfigFile& cfg) {
  return BuildModel(cfg.scenario.model_kind, cfg.scenario.body);
}

void WriteTrajectory(std::ostream& os, const TrajectoryLog& log, int n_pos) {
  os << "t_s,phase,controller,x1x,x1y,x2x,x2y,x3x,x3y,v1x,v1y,err_norm,du_norm,push_active\n";
  const char* name = ControllerName(log.controller);
  for (const LogSample& s : log.samples) {
    const Eigen::VectorXd& q = s.q;
    // state order is (swing, pelvis, stance)
    os << s.t << ',' << s.phase << ',' << name << ',' << q[2] << ',' << q[3] << ',' << q[0]
       << ',' << q[1] << ',' << q[4] << ',' << q[5] << ',' << q[n_pos + 2] << ','
       << q[n_pos + 3] << ',' << s.err_norm << ',' << (s.du.size() ? s.du.norm() : 0.0) << ','
       << (s.push_active ? 1 : 0) << '\n';
  }
  if (log.fell) os << "fall=1\n";
}

}  // namespace

void CmdGait(const ConfigFile& cfg, const CommandOptions& opt, CommandIo io) {
  const PhaseLti model = ConfigModel(cfg);
  const PeriodicGait gait = SolvePeriodicGait(model, cfg.scenario.frequency, cfg.scenario.speed);
  const double residual = GaitResidual(model, gait);

  std::ostream& info = Info(opt, io);
  info.precision(10);
  info << "model " << (cfg.scenario.model_kind == ModelKind::kLip ? "lip" : "3lp")
       << "\nperiod_s " << gait.period << "\nspeed_mps " << gait.speed << '\n';
  PrintVector(info, "qbar", gait.qbar);
  PrintVector(info, "ubar", gait.ubar);
  PrintVector(info, "footstep_m", gait.footstep);
  info << "residual " << residual << '\n';

  CsvSink sink(opt.out, io.data);
  std::ostream& os = sink.stream();
  const int n_pos = model.n_pos();
  os << "t_s,x1x,x1y,x2x,x2y,x3x,x3y,v1x,v1y,tau_x,tau_y\n";
  const int samples = cfg.scenario.substeps;
  for (int i = 0; i <= samples; ++i) {
    const double t = gait.period * i / samples;
    const Eigen::VectorXd q = NominalState(model, gait, t);
    const Eigen::Vector2d tau = gait.ubar.head<2>() + t * gait.ubar.tail<2>();
    os << t << ',' << q[2] << ',' << q[3] << ',' << q[0] << ',' << q[1] << ',' << q[4] << ','
       << q[5] << ',' << q[n_pos + 2] << ',' << q[n_pos + 3] << ',' << tau.x() << ','
       << tau.y() << '\n';
  }
}

void CmdSimulate(const ConfigFile& cfg, const CommandOptions& opt, CommandIo io) {
  const std::vector<ControllerKind> kinds = WalkControllers(ControllerChoice(cfg, opt, nullptr));
  if (kinds.size() > 1 && opt.out.empty()) {
    throw ConfigError("--out is required when simulating several controllers");
  }
  std::ostream& info = Info(opt, io);
  info.precision(6);

  Scenario scn = cfg.scenario;
  // A projection setup also serves the other controllers.
  scn.controller = ControllerKind::kProjection;
  const WalkSetup setup = MakeWalkSetup(scn);
  for (ControllerKind kind : kinds) {
    scn.controller = kind;
    const SpeedTrackResult run = SpeedTrack(scn, setup);
    const std::string path =
        kinds.size() > 1 ? SuffixedPath(opt.out, ControllerName(kind)) : opt.out;
    CsvSink sink(path, io.data);
    WriteTrajectory(sink.stream(), run.log, setup.model.n_pos());

    info << ControllerName(kind) << ": " << run.log.events.size() << " events";
    if (run.log.fell) info << ", fell at step " << run.log.fall_step;
    info << "\n  event error norms:";
    for (const EventRecord& e : run.log.events) info << ' ' << e.error.norm();
    if (!scn.speed_schedule.empty()) {
      info << "\n  step speeds:";
      for (double v : run.step_speeds) info << ' ' << v;
    }
    info << '\n';
    if (!path.empty()) info << "  wrote " << path << '\n';
  }
}

void CmdEigen(const ConfigFile& cfg, const CommandOptions& opt, CommandIo io) {
  const std::vector<ControllerKind> kinds = WalkControllers(ControllerChoice(cfg, opt, "all"));
  const PhaseLti model = ConfigModel(cfg);
  PoincareOptions po;
  po.q_scale = cfg.scenario.q_scale;
  po.r_scale = cfg.scenario.r_scale;
  po.substeps = cfg.scenario.substeps;

  CsvSink sink(opt.out, io.data);
  std::ostream& os = sink.stream();
  std::ostream& info = Info(opt, io);
  info.precision(6);
  os << "f_hz,controller,lambda1,lambda2,lambda3\n";
  info << "f_hz";
  for (ControllerKind k : kinds) info << ' ' << ControllerName(k);
  info << '\n';
  for (double f : cfg.sweep.frequencies) {
    info << f;
    for (ControllerKind k : kinds) {
      const std::vector<double> lam = PoincareEigenvalues(model, k, f, po);
      os << f << ',' << ControllerName(k);
      for (double l : lam) os << ',' << l;
      os << '\n';
      info << ' ' << lam.front();
    }
    info << '\n';
  }
}

void CmdPushSweep(const ConfigFile& cfg, const CommandOptions& opt, CommandIo io) {
  const std::vector<ControllerKind> kinds = WalkControllers(ControllerChoice(cfg, opt, "all"));
  Scenario base = cfg.scenario;
  base.pushes.clear();
  base.speed_schedule.clear();
  base.n_steps = std::max(base.n_steps, 4);
  const std::vector<PushSweepCell> cells =
      PushSweep(base, cfg.sweep.starts, cfg.sweep.ends, cfg.sweep.force, kinds);

  CsvSink sink(opt.out, io.data);
  std::ostream& os = sink.stream();
  os << "controller,start_pct,end_pct,err_step1,err_step2,err_step3,fell\n";
  for (const PushSweepCell& c : cells) {
    os << ControllerName(c.controller) << ',' << 100.0 * c.start_pct << ',' << 100.0 * c.end_pct;
    for (double n : c.norms) os << ',' << n;
    os << ',' << (c.fell ? 1 : 0) << '\n';
  }
  std::ostream& info = Info(opt, io);
  info.precision(6);
  for (ControllerKind k : kinds) {
    double worst = 0.0;
    int falls = 0, cells_k = 0;
    for (const PushSweepCell& c : cells) {
      if (c.controller != k) continue;
      ++cells_k;
      falls += c.fell;
      worst = std::max(worst, c.norms[2]);
    }
    info << ControllerName(k) << ": " << cells_k << " cells, max step-3 error " << worst
         << ", falls " << falls << '\n';
  }
}

void CmdViable(const ConfigFile& cfg, const CommandOptions& opt, CommandIo io) {
  const std::vector<ViableController> kinds =
      RegionControllers(ControllerChoice(cfg, opt, "all"));
  const ViableProblem problem(cfg.viable);

  std::vector<RegionScanResult> scans;
  for (ViableController k : kinds) scans.push_back(RegionScan(problem, k, cfg.viable_plane));

  CsvSink sink(opt.out, io.data);
  std::ostream& os = sink.stream();
  os << "controller,plane,ray,angle_rad,alpha,binding,unbounded,slice_u,slice_v\n";
  bool unbounded = false;
  for (const RegionScanResult& scan : scans) {
    const int rays = cfg.viable.rays;
    for (size_t i = 0; i < scan.samples.size(); ++i) {
      const RegionSample& s = scan.samples[i];
      const Eigen::Vector2d& p = scan.slices[i / rays][i % rays];
      os << ViableControllerName(scan.controller) << ',' << RegionPlaneName(s.plane) << ','
         << i % rays << ',' << s.angle << ',' << s.alpha << ',' << s.binding << ','
         << (s.unbounded ? 1 : 0) << ',' << p.x() << ',' << p.y() << '\n';
      unbounded |= s.unbounded;
    }
  }

  std::ostream& info = Info(opt, io);
  info.precision(6);
  info << "f_hz " << cfg.viable.frequency << " v_mps " << cfg.viable.speed << '\n';
  for (const RegionScanResult& scan : scans) {
    info << ViableControllerName(scan.controller) << ": " << scan.samples.size()
         << " rays, mean alpha " << scan.mean_alpha << '\n';
  }
  // Nesting dlqr <= projection <= maximal on each ray of the scanned set.
  for (size_t a = 0; a + 1 < scans.size(); ++a) {
    int violations = 0;
    for (size_t i = 0; i < scans[a].samples.size(); ++i) {
      if (scans[a].samples[i].alpha > scans[a + 1].samples[i].alpha + 1e-6) ++violations;
    }
    info << "nesting " << ViableControllerName(scans[a].controller) << " <= "
         << ViableControllerName(scans[a + 1].controller) << ": " << violations
         << " violating rays\n";
  }
  if (unbounded) throw NumericalError("maximal region unbounded along some ray");
}

void CmdAppendixC(const ConfigFile& cfg, const CommandOptions& opt, CommandIo io) {
  const ScalarConfig& sc = cfg.scalar;
  const double gain = ScalarDlqrGain(sc.period, sc.q, sc.r);
  const double rate = GainToContinuous(gain, sc.period);
  const ScalarGainBounds bounds = ComputeScalarGainBounds(sc.period);

  std::ostream& info = Info(opt, io);
  info.precision(6);
  info << "Gamma " << gain << "\ngamma " << rate << "\nbounds " << bounds.lo << ' '
       << bounds.hi_dlqr << ' ' << bounds.hi_proj << '\n';

  const ScalarTrace tr =
      ScalarResponses(sc.period, gain, sc.pulse_start, sc.pulse_end, sc.horizon, sc.dt);
  CsvSink sink(opt.out, io.data);
  std::ostream& os = sink.stream();
  os << "t_s,continuous,dlqr,projection\n";
  for (size_t i = 0; i < tr.t.size(); ++i) {
    os << tr.t[i] << ',' << tr.continuous[i] << ',' << tr.dlqr[i] << ',' << tr.projection[i]
       << '\n';
  }
}

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gait synthesis, walking simulation and stability analysis", "walkproj"};
  app.require_subcommand(1);

  std::string config_path;
  CommandOptions opt;
  using Handler = void (*)(const ConfigFile&, const CommandOptions&, CommandIo);
  const std::vector<std::tuple<const char*, const char*, Handler>> commands = {
      {"gait", "Solve the periodic gait and write one sampled phase", CmdGait},
      {"simulate", "Run a walking scenario and write the trajectory log", CmdSimulate},
      {"eigen", "Tabulate sagittal step-map eigenvalue magnitudes", CmdEigen},
      {"push-sweep", "Error norms over a grid of push windows", CmdPushSweep},
      {"viable", "Ray-cast viable regions", CmdViable},
      {"appendix-c", "Scalar example: gains and pulse responses", CmdAppendixC},
  };
  Handler chosen = nullptr;
  for (const auto& [name, help, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "Scenario file")->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "CSV output path (default stdout)");
    sub->add_option("--controller", opt.controller, "Controller override, or all");
    sub->add_flag("--quiet", opt.quiet, "Suppress the summary");
    sub->callback([&chosen, fn = fn] { chosen = fn; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    ConfigFile cfg;
    if (!config_path.empty()) {
      cfg = LoadConfig(config_path);
    } else {
      std::istringstream empty;
      cfg = ParseConfig(empty);
    }
    chosen(cfg, opt, CommandIo{out, err});
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ArgumentError& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "infeasible request: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const DesignError& e) {
    err << "design failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ProjectionSingularity& e) {
    err << "projection singular: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace walkproj::cli
