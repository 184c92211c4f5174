#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "walkproj/analysis.h"
#include "walkproj/sim.h"

namespace walkproj::cli {

/// Malformed or out-of-range configuration. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepConfig {
  std::vector<double> frequencies;  // Hz, eigen table
  std::vector<double> starts;       // fractions of the phase
  std::vector<double> ends;
  Eigen::Vector2d force = Eigen::Vector2d(100.0, 0.0);
};

struct ScalarConfig {
  double period = 1.0;
  double q = 1.0;
  double r = 1.0;
  double pulse_start = 0.25;
  double pulse_end = 0.5;
  double horizon = 4.0;
  double dt = 1e-3;
};

struct ConfigFile {
  Scenario scenario;
  /// Controller name as written, may be "all".
  std::string controller = "projection";
  ViableQuery viable;
  /// -1 scans every plane.
  int viable_plane = -1;
  SweepConfig sweep;
  ScalarConfig scalar;
};

/// Reads the TOML subset
///
///   [model] [gait] [controller] [sim] [[push]] [[speed]] [viable]
///   [sweep] [scalar]
///
/// Unknown sections and keys throw ConfigError, as do values outside their
/// domain.
ConfigFile ParseConfig(std::istream& in);
ConfigFile LoadConfig(const std::string& path);

}  // namespace walkproj::cli
