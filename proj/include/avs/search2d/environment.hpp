#pragma once

#include <algorithm>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "avs/core/errors.hpp"
#include "avs/core/random.hpp"
#include "avs/search2d/model.hpp"
#include "avs/search2d/observation.hpp"
#include "avs/world/grid_map.hpp"
#include "avs/world/object_template.hpp"

namespace avs::search2d {

// Ground truth for one episode. `truth` holds EMPTY floor, BLOCKED,
// OTHER_OBJECT and the OBJECT cells listed in `object`.
struct Scene2D {
  GridMap2D truth;
  Cell agent_start;
  Placement object;
};

// Floor plan the agent starts with: walls known, everything else CANDIDATE.
inline GridMap2D floor_knowledge(const GridMap2D& truth) {
  GridMap2D m(truth.width(), truth.height(), CellValue::Candidate);
  for (int y = 0; y < truth.height(); ++y) {
    for (int x = 0; x < truth.width(); ++x) {
      if (truth.at({x, y}) == CellValue::Blocked) m.set({x, y}, CellValue::Blocked);
    }
  }
  return m;
}

inline Cell random_free_cell(const GridMap2D& truth, Rng& rng) {
  std::vector<Cell> free;
  for (int y = 0; y < truth.height(); ++y) {
    for (int x = 0; x < truth.width(); ++x) {
      if (truth.at({x, y}) != CellValue::Blocked) free.push_back({x, y});
    }
  }
  if (free.empty()) throw ConfigError("map has no free cell for the agent");
  return free[uniform_index(rng, free.size())];
}

// Open w x h floor; object uniform over placements, then agent uniform over
// free cells. Draw order: placement index, agent cell index.
inline Scene2D random_scene(int width, int height, const Placement& shape, Rng& rng) {
  Scene2D s;
  s.truth = GridMap2D(width, height, CellValue::Empty);
  const auto table = enumerate_placements(shape, width, height);
  if (table.empty()) throw ConfigError("object does not fit on the map");
  s.object = table[uniform_index(rng, table.size())];
  for (const Cell& c : s.object) s.truth.set(c, CellValue::Object);
  s.agent_start = random_free_cell(s.truth, rng);
  return s;
}

// ASCII map: one row per line. '.' floor, '#' BLOCKED, 'X' other object,
// 'O' true object cell, 'A' agent start (floor). Object cells must exist and
// be 4-connected. Without an 'A' the start cell is left for the caller
// (`has_agent` false).
struct LoadedMap {
  Scene2D scene;
  bool has_agent = false;
};

inline LoadedMap load_map(std::istream& in) {
  std::vector<std::string> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(line);
  }
  if (rows.empty()) throw MapFormatError("map is empty");
  const int width = static_cast<int>(rows.front().size());
  const int height = static_cast<int>(rows.size());

  LoadedMap out;
  out.scene.truth = GridMap2D(width, height, CellValue::Empty);
  int agents = 0;
  for (int y = 0; y < height; ++y) {
    if (static_cast<int>(rows[static_cast<std::size_t>(y)].size()) != width) {
      throw MapFormatError(y + 1, "row length differs from the first row");
    }
    for (int x = 0; x < width; ++x) {
      const char ch = rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)];
      switch (ch) {
        case '.': break;
        case '#': out.scene.truth.set({x, y}, CellValue::Blocked); break;
        case 'X': out.scene.truth.set({x, y}, CellValue::OtherObject); break;
        case 'O':
          out.scene.truth.set({x, y}, CellValue::Object);
          out.scene.object.push_back({x, y});
          break;
        case 'A':
          out.scene.agent_start = {x, y};
          ++agents;
          break;
        default:
          throw MapFormatError(y + 1, std::string("unknown map character '") + ch + "'");
      }
    }
  }
  if (agents > 1) throw MapFormatError("map has more than one agent start");
  if (out.scene.object.empty()) throw MapFormatError("map has no object cells");
  std::sort(out.scene.object.begin(), out.scene.object.end());
  if (!is_4_connected(out.scene.object)) throw MapFormatError("object cells are not 4-connected");
  out.has_agent = agents == 1;
  return out;
}

inline LoadedMap load_map_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MapFormatError("cannot open map file '" + path + "'");
  return load_map(in);
}

struct EnvParams2D {
  double p_noise = 0.0;
  int footprint_w = 3;
  int footprint_h = 3;
};

// The real world the agent acts in. Single writer.
class GroundTruthEnv {
 public:
  GroundTruthEnv(Scene2D scene, EnvParams2D params)
      : scene_(std::move(scene)), params_(params), agent_(scene_.agent_start) {
    require_odd_window(params_.footprint_w, params_.footprint_h);
    if (!is_4_connected(scene_.object)) throw ConfigError("true object must be 4-connected");
    for (const Cell& c : scene_.object) {
      if (scene_.truth.at(c) == CellValue::Blocked) {
        throw ConfigError("true object overlaps a blocked cell");
      }
    }
    if (!scene_.truth.contains(agent_) || scene_.truth.at(agent_) == CellValue::Blocked) {
      throw ConfigError("agent start is off the map or blocked");
    }
  }

  const Scene2D& scene() const noexcept { return scene_; }
  const EnvParams2D& params() const noexcept { return params_; }
  Cell agent() const noexcept { return agent_; }
  int steps() const noexcept { return steps_; }

  ObservationGrid2D observe(Rng& rng) const;

  // Moves the agent and returns the (noisy) image at the new pose.
  ObservationGrid2D step(Action a, Rng& rng) {
    const Cell next = moved(agent_, a);
    if (!scene_.truth.contains(next) || scene_.truth.at(next) == CellValue::Blocked) {
      throw LegalityError("real move leaves the map or hits a blocked cell");
    }
    agent_ = next;
    ++steps_;
    return observe(rng);
  }

 private:
  Scene2D scene_;
  EnvParams2D params_;
  Cell agent_;
  int steps_ = 0;
};

// Ground-truth rendering at `pose` followed by the border noise model.
inline ObservationGrid2D observe_true(const GroundTruthEnv& env, Cell pose, Rng& rng) {
  const auto& p = env.params();
  const ObservationGrid2D clean =
      render_observation(env.scene().truth, env.scene().object, pose, p.footprint_w, p.footprint_h);
  return perturb_border(clean, p.p_noise, rng);
}

inline ObservationGrid2D GroundTruthEnv::observe(Rng& rng) const { return observe_true(*this, agent_, rng); }

}  // namespace avs::search2d
