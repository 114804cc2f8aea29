#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "avs/core/errors.hpp"
#include "avs/core/pomdp.hpp"
#include "avs/pose3d/model.hpp"
#include "avs/search2d/model.hpp"
#include "avs/search2d/reward.hpp"
#include "avs/world/object_template.hpp"

namespace avs::harness {

enum class Policy { Pomcp, RandomWalk };
enum class Stage { Search2D, SearchPose3D };

inline std::string to_string(Policy p) { return p == Policy::Pomcp ? "pomcp" : "random"; }
inline std::string to_string(Stage s) { return s == Stage::Search2D ? "2d" : "3d"; }

inline Policy parse_policy(std::string_view s) {
  if (s == "pomcp") return Policy::Pomcp;
  if (s == "random" || s == "random_walk") return Policy::RandomWalk;
  throw ConfigError("unknown policy '" + std::string(s) + "' (pomcp|random)");
}

inline search2d::ObservationModel parse_observation_model(std::string_view s) {
  if (s == "grid") return search2d::ObservationModel::Grid;
  if (s == "binary") return search2d::ObservationModel::Binary;
  throw ConfigError("unknown observation model '" + std::string(s) + "' (grid|binary)");
}

inline Stage parse_stage(std::string_view s) {
  if (s == "2d") return Stage::Search2D;
  if (s == "3d" || s == "2d+3d") return Stage::SearchPose3D;
  throw ConfigError("unknown stage '" + std::string(s) + "' (2d|3d)");
}

struct ExperimentConfig {
  int width = 20;
  int height = 20;
  int z_levels = 5;
  std::string object = "L";
  std::string map_file;  // empty: random open-floor scenes

  std::vector<int> n_sims{4, 10, 25, 50, 100, 200};
  std::vector<int> particles{5, 50, 200, 500};
  std::vector<Policy> policies{Policy::Pomcp, Policy::RandomWalk};
  search2d::ObservationModel observation_model = search2d::ObservationModel::Grid;
  Stage stage = Stage::Search2D;

  int episodes = 100;
  int max_steps = 200;
  std::uint64_t seed = 0;
  double p_noise = 0.0;
  int footprint_w = 3;
  int footprint_h = 3;

  // Planner constants shared by every point.
  double exploration = 20.0;
  double gamma = 0.95;
  double epsilon = 0.01;
  int max_depth = 60;
  int rejection_factor = 100;

  RewardConfig reward;
  pose3d::PointCloudParams cloud;

  int threads = 0;  // 0: hardware concurrency
  bool record_time = true;

  SolverConfig solver(int n_sim, int k) const {
    SolverConfig s;
    s.n_sim = n_sim;
    s.particles = k;
    s.exploration = exploration;
    s.gamma = gamma;
    s.epsilon = epsilon;
    s.max_depth = max_depth;
    s.rejection_factor = rejection_factor;
    s.seed = seed;
    return s;
  }

  void validate() const {
    if (width < 1 || height < 1) throw ConfigError("width and height must be >= 1");
    if (z_levels < 1) throw ConfigError("z_levels must be >= 1");
    if (episodes < 1) throw ConfigError("episodes must be >= 1");
    if (max_steps < 0) throw ConfigError("max_steps must be >= 0");
    if (n_sims.empty() || particles.empty() || policies.empty()) {
      throw ConfigError("sims, particles and policy lists must be non-empty");
    }
    for (int n : n_sims) {
      if (n < 1) throw ConfigError("every n_sim must be >= 1");
    }
    for (int k : particles) {
      if (k < 1) throw ConfigError("every particle count must be >= 1");
    }
    if (!(p_noise >= 0.0 && p_noise <= 1.0)) throw ConfigError("p_noise must lie in [0, 1]");
    if (threads < 0) throw ConfigError("threads must be >= 0");
    search2d::require_odd_window(footprint_w, footprint_h);
    solver(n_sims.front(), particles.front()).validate();
    reward.validate();
    cloud.validate();
    (void)builtin_template(object);
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in{std::string(s)};
  while (std::getline(in, cur, ',')) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

template <class T>
T parse_number(std::string_view key, std::string_view v) {
  T out{};
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || p != end) {
    throw ConfigError("bad value '" + std::string(v) + "' for key '" + std::string(key) + "'");
  }
  return out;
}

inline bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("bad boolean '" + std::string(v) + "' for key '" + std::string(key) + "'");
}

template <class T>
std::vector<T> parse_number_list(std::string_view key, std::string_view v) {
  std::vector<T> out;
  for (const std::string& item : split_list(v)) out.push_back(parse_number<T>(key, item));
  if (out.empty()) throw ConfigError("empty list for key '" + std::string(key) + "'");
  return out;
}

}  // namespace detail

// Applies one `key = value` setting. Keys mirror the ExperimentConfig
// fields; lists are comma-separated.
inline void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  using namespace detail;
  const std::string v = trim(value);
  if (key == "width") cfg.width = parse_number<int>(key, v);
  else if (key == "height") cfg.height = parse_number<int>(key, v);
  else if (key == "z_levels") cfg.z_levels = parse_number<int>(key, v);
  else if (key == "object") cfg.object = v;
  else if (key == "map") cfg.map_file = v;
  else if (key == "sims" || key == "n_sim") cfg.n_sims = parse_number_list<int>(key, v);
  else if (key == "particles") cfg.particles = parse_number_list<int>(key, v);
  else if (key == "policy") {
    cfg.policies.clear();
    for (const std::string& p : split_list(v)) cfg.policies.push_back(parse_policy(p));
  } else if (key == "obs") cfg.observation_model = parse_observation_model(v);
  else if (key == "stage") cfg.stage = parse_stage(v);
  else if (key == "episodes") cfg.episodes = parse_number<int>(key, v);
  else if (key == "max_steps") cfg.max_steps = parse_number<int>(key, v);
  else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, v);
  else if (key == "noise" || key == "p_noise") cfg.p_noise = parse_number<double>(key, v);
  else if (key == "footprint_w") cfg.footprint_w = parse_number<int>(key, v);
  else if (key == "footprint_h") cfg.footprint_h = parse_number<int>(key, v);
  else if (key == "exploration") cfg.exploration = parse_number<double>(key, v);
  else if (key == "gamma") cfg.gamma = parse_number<double>(key, v);
  else if (key == "epsilon") cfg.epsilon = parse_number<double>(key, v);
  else if (key == "max_depth") cfg.max_depth = parse_number<int>(key, v);
  else if (key == "rejection_factor") cfg.rejection_factor = parse_number<int>(key, v);
  else if (key == "p_action") cfg.reward.p_action = parse_number<double>(key, v);
  else if (key == "p_reobserve") cfg.reward.p_reobserve = parse_number<double>(key, v);
  else if (key == "r_terminal") cfg.reward.r_terminal = parse_number<double>(key, v);
  else if (key == "r_exploration") cfg.reward.r_exploration = parse_number<double>(key, v);
  else if (key == "r_discovery") cfg.reward.r_discovery = parse_number<double>(key, v);
  else if (key == "r_refinement") cfg.reward.r_refinement = parse_number<double>(key, v);
  else if (key == "points_per_face") cfg.cloud.points_per_face = parse_number<int>(key, v);
  else if (key == "jitter") cfg.cloud.jitter = parse_number<double>(key, v);
  else if (key == "dropout") cfg.cloud.dropout = parse_number<double>(key, v);
  else if (key == "threads") cfg.threads = parse_number<int>(key, v);
  else if (key == "record_time") cfg.record_time = parse_bool(key, v);
  else throw ConfigError("unknown config key '" + std::string(key) + "'");
}

// Line-oriented `key = value`; '#' starts a comment. Later keys win.
inline ExperimentConfig parse_config(std::istream& in, ExperimentConfig cfg = {}) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = detail::trim(std::string_view(t).substr(0, eq));
    try {
      apply_setting(cfg, key, std::string_view(t).substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

inline ExperimentConfig load_config_file(const std::string& path, ExperimentConfig cfg = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, std::move(cfg));
}

}  // namespace avs::harness
