#include "scenario_config.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "walkproj/errors.h"

namespace walkproj::cli {
namespace {

const std::string& Scalar(const CLI::ConfigItem& item) {
  if (item.inputs.size() != 1) {
    throw ConfigError("key '" + item.name + "' expects a single value");
  }
  return item.inputs.front();
}

double ToDouble(const std::string& text, const std::string& key) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ConfigError("key '" + key + "': '" + text + "' is not a finite number");
  }
  return v;
}

int ToInt(const std::string& text, const std::string& key) {
  int v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("key '" + key + "': '" + text + "' is not an integer");
  }
  return v;
}

double Number(const CLI::ConfigItem& item) { return ToDouble(Scalar(item), item.name); }
int Integer(const CLI::ConfigItem& item) { return ToInt(Scalar(item), item.name); }

std::vector<double> Numbers(const CLI::ConfigItem& item) {
  std::vector<double> out;
  for (const std::string& s : item.inputs) out.push_back(ToDouble(s, item.name));
  return out;
}

using Setter = std::function<void(const CLI::ConfigItem&)>;

// Model keys are collected first: height and mass seed the human
// proportions, explicit lengths override them.
struct ModelKeys {
  std::optional<double> mass, height, leg, pelvis, gravity, leg_fraction, torso_fraction;
};

}  // namespace

ConfigFile ParseConfig(std::istream& in) {
  // The reader does not accept comments after a table header.
  std::stringstream text;
  for (std::string line; std::getline(in, line);) {
    const size_t first = line.find_first_not_of(" \t");
    if (first != std::string::npos && line[first] == '[') {
      const size_t hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
    }
    text << line << '\n';
  }
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_config(text);
  } catch (const CLI::Error& e) {
    throw ConfigError(std::string("cannot parse config: ") + e.what());
  }

  ConfigFile cfg;
  ModelKeys mk;
  PushEvent push;
  SpeedChange speed;

  std::map<std::string, std::map<std::string, Setter>> keys;
  keys["model"] = {
      {"kind", [&](const auto& it) {
         const std::string& k = Scalar(it);
         if (k == "lip") cfg.scenario.model_kind = ModelKind::kLip;
         else if (k == "3lp") cfg.scenario.model_kind = ModelKind::k3lp;
         else throw ConfigError("model kind must be lip or 3lp, got '" + k + "'");
       }},
      {"mass_kg", [&](const auto& it) { mk.mass = Number(it); }},
      {"height_m", [&](const auto& it) { mk.height = Number(it); }},
      {"leg_length_m", [&](const auto& it) { mk.leg = Number(it); }},
      {"pelvis_width_m", [&](const auto& it) { mk.pelvis = Number(it); }},
      {"gravity_mps2", [&](const auto& it) { mk.gravity = Number(it); }},
      {"leg_mass_fraction", [&](const auto& it) { mk.leg_fraction = Number(it); }},
      {"torso_com_fraction", [&](const auto& it) { mk.torso_fraction = Number(it); }},
  };
  keys["gait"] = {
      {"frequency_hz", [&](const auto& it) { cfg.scenario.frequency = Number(it); }},
      {"speed_mps", [&](const auto& it) { cfg.scenario.speed = Number(it); }},
  };
  keys["controller"] = {
      {"kind", [&](const auto& it) { cfg.controller = Scalar(it); }},
      {"q_scale", [&](const auto& it) { cfg.scenario.q_scale = Number(it); }},
      {"r_scale", [&](const auto& it) { cfg.scenario.r_scale = Number(it); }},
  };
  keys["sim"] = {
      {"substeps", [&](const auto& it) { cfg.scenario.substeps = Integer(it); }},
      {"n_steps", [&](const auto& it) { cfg.scenario.n_steps = Integer(it); }},
  };
  keys["push"] = {
      {"phase", [&](const auto& it) { push.phase = Integer(it); }},
      {"start_pct", [&](const auto& it) { push.start_pct = Number(it) / 100.0; }},
      {"end_pct", [&](const auto& it) { push.end_pct = Number(it) / 100.0; }},
      {"fx_n", [&](const auto& it) { push.force.x() = Number(it); }},
      {"fy_n", [&](const auto& it) { push.force.y() = Number(it); }},
  };
  keys["speed"] = {
      {"step", [&](const auto& it) { speed.step = Integer(it); }},
      {"v_mps", [&](const auto& it) { speed.speed = Number(it); }},
  };
  keys["viable"] = {
      {"n_steps", [&](const auto& it) { cfg.viable.n_steps = Integer(it); }},
      {"subphases", [&](const auto& it) { cfg.viable.subphases = Integer(it); }},
      {"torque_nm", [&](const auto& it) { cfg.viable.torque_limit = Number(it); }},
      {"diamond_m", [&](const auto& it) { cfg.viable.diamond = Number(it); }},
      {"rays", [&](const auto& it) { cfg.viable.rays = Integer(it); }},
      {"frequency_hz", [&](const auto& it) { cfg.viable.frequency = Number(it); }},
      {"speed_mps", [&](const auto& it) { cfg.viable.speed = Number(it); }},
      {"plane", [&](const auto& it) {
         const std::string& p = Scalar(it);
         if (p == "all") { cfg.viable_plane = -1; return; }
         for (int i = 0; i < kRegionPlanes; ++i) {
           if (p == RegionPlaneName(i)) { cfg.viable_plane = i; return; }
         }
         throw ConfigError("unknown viable plane '" + p + "'");
       }},
  };
  keys["sweep"] = {
      {"frequencies_hz", [&](const auto& it) { cfg.sweep.frequencies = Numbers(it); }},
      {"starts_pct", [&](const auto& it) {
         cfg.sweep.starts = Numbers(it);
         for (double& s : cfg.sweep.starts) s /= 100.0;
       }},
      {"ends_pct", [&](const auto& it) {
         cfg.sweep.ends = Numbers(it);
         for (double& s : cfg.sweep.ends) s /= 100.0;
       }},
      {"fx_n", [&](const auto& it) { cfg.sweep.force.x() = Number(it); }},
      {"fy_n", [&](const auto& it) { cfg.sweep.force.y() = Number(it); }},
  };
  keys["scalar"] = {
      {"period_s", [&](const auto& it) { cfg.scalar.period = Number(it); }},
      {"q", [&](const auto& it) { cfg.scalar.q = Number(it); }},
      {"r", [&](const auto& it) { cfg.scalar.r = Number(it); }},
      {"pulse_start_s", [&](const auto& it) { cfg.scalar.pulse_start = Number(it); }},
      {"pulse_end_s", [&](const auto& it) { cfg.scalar.pulse_end = Number(it); }},
      {"horizon_s", [&](const auto& it) { cfg.scalar.horizon = Number(it); }},
      {"dt_s", [&](const auto& it) { cfg.scalar.dt = Number(it); }},
  };
  const std::set<std::string> repeated = {"push", "speed"};
  std::set<std::string> seen;

  for (const CLI::ConfigItem& item : items) {
    if (item.parents.empty()) {
      throw ConfigError("key '" + item.name + "' outside of a section");
    }
    if (item.parents.size() != 1) {
      throw ConfigError("nested section '" + item.fullname() + "' not supported");
    }
    const std::string& section = item.parents.front();
    auto sec = keys.find(section);
    if (sec == keys.end()) throw ConfigError("unknown section [" + section + "]");

    if (item.name == "++") {
      if (!repeated.count(section) && !seen.insert(section).second) {
        throw ConfigError("section [" + section + "] given twice");
      }
      push = PushEvent{};
      speed = SpeedChange{};
      continue;
    }
    if (item.name == "--") {
      if (section == "push") cfg.scenario.pushes.push_back(push);
      if (section == "speed") cfg.scenario.speed_schedule.push_back(speed);
      continue;
    }
    auto key = sec->second.find(item.name);
    if (key == sec->second.end()) {
      throw ConfigError("unknown key '" + item.name + "' in [" + section + "]");
    }
    key->second(item);
  }

  BodyParams body = BodyParams::Human(mk.mass.value_or(70.0), mk.height.value_or(1.7));
  if (mk.leg) body.leg_length = *mk.leg;
  if (mk.pelvis) body.pelvis_width = *mk.pelvis;
  if (mk.gravity) body.gravity = *mk.gravity;
  if (mk.leg_fraction) body.leg_mass_fraction = *mk.leg_fraction;
  if (mk.torso_fraction) body.torso_com_fraction = *mk.torso_fraction;
  cfg.scenario.body = body;
  cfg.viable.body = body;
  cfg.viable.model_kind = cfg.scenario.model_kind;
  cfg.viable.q_scale = cfg.scenario.q_scale;
  cfg.viable.r_scale = cfg.scenario.r_scale;

  if (cfg.controller != "all") {
    auto kind = ParseControllerKind(cfg.controller);
    if (!kind) throw ConfigError("unknown controller kind '" + cfg.controller + "'");
    cfg.scenario.controller = *kind;
  }
  if (cfg.sweep.frequencies.empty()) {
    for (int i = 0; i <= 11; ++i) cfg.sweep.frequencies.push_back(0.8 + 0.2 * i);
  }
  if (cfg.sweep.starts.empty()) cfg.sweep.starts = {0.0, 0.2, 0.4, 0.6, 0.8};
  if (cfg.sweep.ends.empty()) cfg.sweep.ends = {0.2, 0.4, 0.6, 0.8, 1.0};
  for (double f : cfg.sweep.frequencies) {
    if (!(f > 0.0)) throw ConfigError("sweep frequencies must be positive");
  }
  for (const std::vector<double>* v : {&cfg.sweep.starts, &cfg.sweep.ends}) {
    for (double s : *v) {
      if (!(s >= 0.0 && s <= 1.0)) throw ConfigError("sweep percentages must lie in [0, 100]");
    }
  }
  const ScalarConfig& sc = cfg.scalar;
  if (!(sc.period > 0.0 && sc.q > 0.0 && sc.r > 0.0 && sc.dt > 0.0 && sc.horizon > 0.0 &&
        sc.pulse_start >= 0.0 && sc.pulse_start <= sc.pulse_end)) {
    throw ConfigError("invalid [scalar] section");
  }

  try {
    cfg.scenario.Validate();
    cfg.viable.Validate();
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

ConfigFile LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  return ParseConfig(in);
}

}  // namespace walkproj::cli
