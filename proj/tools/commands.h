#pragma once

#include <iosfwd>
#include <string>

#include "scenario_config.h"

namespace walkproj::cli {

enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitNumerical = 3 };

struct CommandOptions {
  /// CSV destination; empty writes the CSV to the data stream and moves the
  /// summary to the diagnostic stream.
  std::string out;
  /// Overrides [controller] kind; "all" runs every applicable controller.
  std::string controller;
  bool quiet = false;
};

/// Streams used by a command: `data` receives CSV when no --out is given,
/// `info` the human-readable summary.
struct CommandIo {
  std::ostream& data;
  std::ostream& info;
};

void CmdGait(const ConfigFile& cfg, const CommandOptions& opt, CommandIo io);
void CmdSimulate(const ConfigFile& cfg, const CommandOptions& opt, CommandIo io);
void CmdEigen(const ConfigFile& cfg, const CommandOptions& opt, CommandIo io);
void CmdPushSweep(const ConfigFile& cfg, const CommandOptions& opt, CommandIo io);
void CmdViable(const ConfigFile& cfg, const CommandOptions& opt, CommandIo io);
void CmdAppendixC(const ConfigFile& cfg, const CommandOptions& opt, CommandIo io);

/// Full command line entry point. Returns the process exit code.
int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace walkproj::cli
