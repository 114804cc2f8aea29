#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "avs/core/errors.hpp"
#include "avs/core/pomdp.hpp"
#include "avs/core/random.hpp"
#include "avs/pomcp/belief.hpp"
#include "avs/pose3d/pointcloud.hpp"
#include "avs/search2d/model.hpp"
#include "avs/search2d/observation.hpp"
#include "avs/search2d/reward.hpp"
#include "avs/world/grid_map.hpp"
#include "avs/world/object_template.hpp"

namespace avs::pose3d {

struct SearchState3D {
  GridMap3D map;
  Cell agent;
  Shape3 believed_object;  // sorted

  bool operator==(const SearchState3D&) const = default;
};

struct PointCloudParams {
  int points_per_face = 64;  // must be a perfect square; faces are stratified
  double jitter = 0.1;       // uniform +-jitter*cell_size in x and y
  double dropout = 0.05;

  static PointCloudParams noise_free() { return {64, 0.0, 0.0}; }

  void validate() const {
    int side = 1;
    while (side * side < points_per_face) ++side;
    if (points_per_face < 4 || side * side != points_per_face) {
      throw ConfigError("points_per_face must be a perfect square >= 4");
    }
    if (jitter < 0.0 || jitter >= 0.5) throw ConfigError("jitter must lie in [0, 0.5)");
    if (dropout < 0.0 || dropout >= 1.0) throw ConfigError("dropout must lie in [0, 1)");
  }
};

inline bool contains_cell3(const Shape3& cells, Cell3 c) {
  return std::binary_search(cells.begin(), cells.end(), c);
}

// Highest occupied level of a column and what occupies it, or -1. Object
// cells come from `object`; everything else from OTHER_OBJECT cells of `map`.
inline std::pair<int, PointSource> top_of_column(const GridMap3D& map, const Shape3& object, Cell col) {
  for (int z = map.depth() - 1; z >= 0; --z) {
    const Cell3 c{col.x, col.y, z};
    if (contains_cell3(object, c)) return {z, PointSource::Object};
    if (map.at(c) == CellValue::OtherObject) return {z, PointSource::OtherObject};
  }
  return {-1, PointSource::Object};
}

// Top-down sensor at fixed height over the w x h window around `pose`. Each
// column contributes points on the top face of its highest occupied cell
// only; lower cells are occluded. BLOCKED columns return nothing. Unit cells,
// origin at the map corner, table at z = 0. Draw order per column (row-major)
// and per stratum: two unit draws, then jitter x, jitter y, dropout (each
// only when enabled).
inline PointCloud render_pointcloud(const GridMap3D& map, const Shape3& object, Cell pose, int w, int h,
                                    const PointCloudParams& params, Rng& rng) {
  PointCloud pc;
  int side = 1;
  while (side * side < params.points_per_face) ++side;
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      const Cell col = search2d::window_cell(pose, w, h, i, j);
      if (!map.contains_column(col) || map.at({col.x, col.y, 0}) == CellValue::Blocked) continue;
      const auto [top, source] = top_of_column(map, object, col);
      if (top < 0) continue;
      const double z = static_cast<double>(top + 1);
      for (int sv = 0; sv < side; ++sv) {
        for (int su = 0; su < side; ++su) {
          double x = col.x + (su + uniform_unit(rng)) / side;
          double y = col.y + (sv + uniform_unit(rng)) / side;
          if (params.jitter > 0.0) {
            x += uniform_real(rng, -params.jitter, params.jitter);
            y += uniform_real(rng, -params.jitter, params.jitter);
          }
          if (params.dropout > 0.0 && bernoulli(rng, params.dropout)) continue;
          pc.points.push_back({{x, y, z}, source});
        }
      }
    }
  }
  return pc;
}

inline PointCloud render_pointcloud(const SearchState3D& s, Cell pose, int w, int h,
                                    const PointCloudParams& params, Rng& rng) {
  return render_pointcloud(s.map, s.believed_object, pose, w, h, params, rng);
}

// Voxelized window observation for an agent at `pose`.
inline ObservationGrid3D observe_window(const PointCloud& pc, Cell pose, int w, int h, int depth) {
  const Vec3 origin{static_cast<double>(pose.x - w / 2), static_cast<double>(pose.y - h / 2), 0.0};
  return voxelize(pc, origin, 1.0, {w, h, depth});
}

// Map update from one voxel observation. Core cells take their observed
// value; visible non-core cells are free space (stray points never form a
// core) and become EMPTY; occluded cells and BLOCKED columns keep their value.
inline GridMap3D apply_observation_3d(GridMap3D map, const ObservationGrid3D& obs, Cell pose) {
  const Dims3 d = obs.dims();
  for (int j = 0; j < d.h; ++j) {
    for (int i = 0; i < d.w; ++i) {
      const Cell col = search2d::window_cell(pose, d.w, d.h, i, j);
      if (!map.contains_column(col) || map.at({col.x, col.y, 0}) == CellValue::Blocked) continue;
      for (int k = 0; k < std::min(d.d, map.depth()); ++k) {
        const Voxel& v = obs.at(i, j, k);
        const Cell3 c{col.x, col.y, k};
        if (v.core) {
          map.set(c, v.value);
        } else if (v.visible) {
          map.set(c, CellValue::Empty);
        }
      }
    }
  }
  return map;
}

// Every believed cell is OBJECT and no believed column still holds a
// CANDIDATE cell.
inline bool is_terminal_3d(const SearchState3D& s) {
  if (s.believed_object.empty()) return false;
  std::set<Cell> columns;
  for (const Cell3& c : s.believed_object) {
    if (!s.map.contains(c) || s.map.at(c) != CellValue::Object) return false;
    columns.insert({c.x, c.y});
  }
  for (const Cell& col : columns) {
    for (int z = 0; z < s.map.depth(); ++z) {
      if (s.map.at({col.x, col.y, z}) == CellValue::Candidate) return false;
    }
  }
  return true;
}

// R_3D = P_action + P_reobserve (map unchanged) + R_terminal
//      + R_refinement per cell going OBJECT -> EMPTY.
inline double reward_3d(const SearchState3D& s, Action /*action*/, const SearchState3D& next,
                        const RewardConfig& cfg) {
  double r = cfg.p_action;
  const auto before = s.map.cells();
  const auto after = next.map.cells();
  std::size_t refined = 0;
  for (std::size_t i = 0; i < before.size(); ++i) {
    if (before[i] == CellValue::Object && after[i] == CellValue::Empty) ++refined;
  }
  if (s.map == next.map) r += cfg.p_reobserve;
  if (is_terminal_3d(next)) r += cfg.r_terminal;
  r += cfg.r_refinement * static_cast<double>(refined);
  return r;
}

inline ActionSet legal_actions_3d(const GridMap3D& map, Cell agent) {
  ActionSet out;
  for (Action a : kAllActions) {
    const Cell c = moved(agent, a);
    if (map.contains_column(c) && map.at({c.x, c.y, 0}) != CellValue::Blocked) out.insert(a);
  }
  return out;
}

// All 6-connected sets of `n` cells inside the columns of `shadow`, below
// `z_levels`, touching the table (min z = 0) and covering every column.
inline std::vector<Shape3> enumerate_shapes(const Placement& shadow, std::size_t n, int z_levels) {
  if (shadow.empty() || n < shadow.size() || z_levels < 1) return {};
  std::vector<Cell3> pool;
  for (int z = 0; z < z_levels; ++z) {
    for (const Cell& c : shadow) pool.push_back({c.x, c.y, z});
  }
  std::sort(pool.begin(), pool.end());
  if (n > pool.size()) return {};

  std::vector<Shape3> out;
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::size_t visited = 0;
  constexpr std::size_t kLimit = 5'000'000;
  Shape3 cur(n);
  while (true) {
    if (++visited > kLimit) throw ConfigError("too many candidate 3D shapes to enumerate");
    for (std::size_t i = 0; i < n; ++i) cur[i] = pool[idx[i]];
    bool touches = false;
    std::set<Cell> cols;
    for (const Cell3& c : cur) {
      touches = touches || c.z == 0;
      cols.insert({c.x, c.y});
    }
    if (touches && cols.size() == shadow.size() && is_6_connected(cur)) out.push_back(cur);
    // Next combination in lexicographic order.
    std::size_t k = n;
    while (k > 0 && idx[k - 1] == pool.size() - n + (k - 1)) --k;
    if (k == 0) break;
    ++idx[k - 1];
    for (std::size_t m = k; m < n; ++m) idx[m] = idx[m - 1] + 1;
  }
  return out;
}

// Shape is not ruled out by the agent's 3D knowledge: none of its cells is
// known EMPTY, BLOCKED or OTHER_OBJECT, and it covers every raised cell the
// agent has seen as OBJECT.
inline bool shape_consistent(const GridMap3D& know, const Shape3& shape) {
  for (const Cell3& c : shape) {
    if (!know.contains(c)) return false;
    const CellValue v = know.at(c);
    if (v != CellValue::Candidate && v != CellValue::Object) return false;
  }
  for (int z = 1; z < know.depth(); ++z) {
    for (int y = 0; y < know.height(); ++y) {
      for (int x = 0; x < know.width(); ++x) {
        if (know.at({x, y, z}) == CellValue::Object && !contains_cell3(shape, {x, y, z})) return false;
      }
    }
  }
  return true;
}

struct ModelParams3D {
  int footprint_w = 3;
  int footprint_h = 3;
  PointCloudParams cloud;
  RewardConfig reward;
};

// Black-box simulator G_PC for the pose stage: renders a point cloud from the
// state's belief, voxelizes it and matches observations by soft equality.
class PoseModel3D {
 public:
  using State = SearchState3D;
  using Observation = ObservationGrid3D;

  PoseModel3D(int width, int height, int depth, ModelParams3D params)
      : width_(width), height_(height), depth_(depth), params_(params) {
    search2d::require_odd_window(params_.footprint_w, params_.footprint_h);
    params_.cloud.validate();
    params_.reward.validate();
    if (depth_ < 1) throw ConfigError("z_levels must be >= 1");
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int depth() const noexcept { return depth_; }
  const ModelParams3D& params() const noexcept { return params_; }

  ActionSet legal_actions(const State& s) const { return legal_actions_3d(s.map, s.agent); }
  bool is_terminal(const State& s) const { return is_terminal_3d(s); }
  bool observations_match(const Observation& a, const Observation& b) const { return soft_equal(a, b); }

  Observation render(const State& s, Cell pose, Rng& rng) const {
    const PointCloud pc = render_pointcloud(s, pose, params_.footprint_w, params_.footprint_h, params_.cloud, rng);
    return observe_window(pc, pose, params_.footprint_w, params_.footprint_h, depth_);
  }

  StepOutcome<State, Observation> step(const State& s, Action a, Rng& rng) const {
    if (!legal_actions(s).contains(a)) {
      throw LegalityError(std::string("action ") + std::string(to_string(a)) +
                          " is not legal in this state");
    }
    State next;
    next.agent = moved(s.agent, a);
    next.believed_object = s.believed_object;
    Observation obs = render(s, next.agent, rng);
    next.map = apply_observation_3d(s.map, obs, next.agent);
    const double r = reward_3d(s, a, next, params_.reward);
    const bool term = is_terminal_3d(next);
    return {std::move(next), std::move(obs), r, term};
  }

 private:
  int width_ = 0;
  int height_ = 0;
  int depth_ = 0;
  ModelParams3D params_;
};

// The agent's 3D knowledge plus the shape hypotheses handed over at lift time.
struct AgentKnowledge3D {
  GridMap3D map;
  Cell agent;
  std::vector<Shape3> hypotheses;

  void record(Cell pose, const ObservationGrid3D& obs) {
    agent = pose;
    map = apply_observation_3d(std::move(map), obs, pose);
  }
};

// Shapes for every distinct believed footprint in a 2D belief, deduplicated.
inline std::vector<Shape3> shape_hypotheses(const pomcp::BeliefState<search2d::SearchState2D>& belief2d,
                                            std::size_t n_cells, int z_levels) {
  std::set<Placement> shadows;
  for (const auto& p : belief2d) shadows.insert(p.believed_object);
  std::vector<Shape3> out;
  for (const Placement& sh : shadows) {
    auto shapes = enumerate_shapes(sh, n_cells, z_levels);
    out.insert(out.end(), shapes.begin(), shapes.end());
  }
  return out;
}

// 2D -> 3D belief transfer. Level 0 of every particle map copies its 2D map,
// levels above are CANDIDATE, and the believed shape is drawn uniformly from
// the n-cell shapes over the particle's 2D footprint.
inline pomcp::BeliefState<SearchState3D> lift_belief(const pomcp::BeliefState<search2d::SearchState2D>& belief2d,
                                                     int z_levels, std::size_t n_cells, Rng& rng) {
  if (z_levels < 1) throw ConfigError("z_levels must be >= 1");
  for (const auto& p : belief2d) {
    if (!search2d::is_terminal(p)) throw StageOrderError("lift_belief needs a terminal 2D belief");
  }
  std::map<Placement, std::vector<Shape3>> cache;
  pomcp::BeliefState<SearchState3D> out;
  for (const auto& p : belief2d) {
    auto it = cache.find(p.believed_object);
    if (it == cache.end()) {
      it = cache.emplace(p.believed_object, enumerate_shapes(p.believed_object, n_cells, z_levels)).first;
    }
    if (it->second.empty()) throw UnsatisfiableError("no 3D shape fits the believed footprint");
    SearchState3D s;
    s.map = GridMap3D::lifted(p.map, z_levels);
    s.agent = p.agent;
    s.believed_object = it->second[uniform_index(rng, it->second.size())];
    out.push(std::move(s));
  }
  return out;
}

// Fresh particles uniform over the hypotheses the 3D knowledge still allows.
inline std::vector<SearchState3D> reinvigorate_3d(const AgentKnowledge3D& know, std::size_t count, Rng& rng) {
  std::vector<const Shape3*> ok;
  for (const Shape3& s : know.hypotheses) {
    if (shape_consistent(know.map, s)) ok.push_back(&s);
  }
  if (ok.empty()) throw UnsatisfiableError("observations rule out every 3D object shape");
  std::vector<SearchState3D> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back({know.map, know.agent, *ok[uniform_index(rng, ok.size())]});
  }
  return out;
}

}  // namespace avs::pose3d
