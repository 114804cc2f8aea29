#pragma once

#include <cstddef>
#include <cstdlib>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "avs/core/errors.hpp"
#include "avs/core/pomdp.hpp"
#include "avs/core/random.hpp"
#include "avs/search2d/observation.hpp"
#include "avs/search2d/reward.hpp"
#include "avs/world/grid_map.hpp"
#include "avs/world/object_template.hpp"

namespace avs::search2d {

// s_t = (M, p_agent, P_object).
struct SearchState2D {
  GridMap2D map;
  Cell agent;
  Placement believed_object;

  bool operator==(const SearchState2D&) const = default;
};

enum class ObservationModel { Grid, Binary };

inline std::string to_string(ObservationModel m) { return m == ObservationModel::Grid ? "grid" : "binary"; }

// What the planner matches on. In binary mode `grid` is left empty and only
// `object_found` carries information.
struct Observation2D {
  ObservationGrid2D grid;
  bool object_found = false;

  bool operator==(const Observation2D&) const = default;
};

// Moves whose destination is on the map and not BLOCKED in the state's map.
inline ActionSet legal_actions(const GridMap2D& map, Cell agent) {
  ActionSet out;
  for (Action a : kAllActions) {
    const Cell c = moved(agent, a);
    if (map.contains(c) && map.at(c) != CellValue::Blocked) out.insert(a);
  }
  return out;
}

inline ActionSet legal_actions(const SearchState2D& s) { return legal_actions(s.map, s.agent); }

// Every believed object cell is confirmed OBJECT in the state's map.
inline bool is_terminal(const SearchState2D& s) {
  if (s.believed_object.empty()) return false;
  for (const Cell& c : s.believed_object) {
    if (!s.map.contains(c) || s.map.at(c) != CellValue::Object) return false;
  }
  return true;
}

inline ObservationGrid2D render_observation(const SearchState2D& s, Cell pose, int w, int h) {
  return render_observation(s.map, s.believed_object, pose, w, h);
}

// R_2D = P_action + R_2 (flat re-observe penalty when M is unchanged)
//      + R_3 (terminal) + exploration and discovery bonuses.
inline double reward_2d(const SearchState2D& s, Action /*action*/, const SearchState2D& next,
                        const RewardConfig& cfg) {
  double r = cfg.p_action;
  std::size_t resolved = 0, discovered = 0;
  const auto before = s.map.cells();
  const auto after = next.map.cells();
  for (std::size_t i = 0; i < before.size(); ++i) {
    if (before[i] == CellValue::Candidate && after[i] != CellValue::Candidate) ++resolved;
    if (before[i] != CellValue::Object && after[i] == CellValue::Object) ++discovered;
  }
  if (s.map == next.map) r += cfg.p_reobserve;
  if (is_terminal(next)) r += cfg.r_terminal;
  r += cfg.r_exploration * static_cast<double>(resolved);
  r += cfg.r_discovery * static_cast<double>(discovered);
  return r;
}

// A placement may sit on CANDIDATE or OBJECT cells only.
inline bool placement_allowed(const GridMap2D& map, const Placement& p) {
  for (const Cell& c : p) {
    if (!map.contains(c)) return false;
    const CellValue v = map.at(c);
    if (v != CellValue::Candidate && v != CellValue::Object) return false;
  }
  return true;
}

// Uniform over the allowed entries of a precomputed placement table.
inline Placement place_object_simulation(const GridMap2D& map, std::span<const Placement> table,
                                         Rng& rng) {
  std::vector<std::size_t> ok;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (placement_allowed(map, table[i])) ok.push_back(i);
  }
  if (ok.empty()) throw UnsatisfiableError("no consistent object placement on this map");
  return table[ok[uniform_index(rng, ok.size())]];
}

inline Placement place_object_simulation(const GridMap2D& map, const Placement& shape, Rng& rng) {
  const auto table = enumerate_placements(shape, map.width(), map.height());
  return place_object_simulation(map, table, rng);
}

struct ModelParams2D {
  int footprint_w = 3;
  int footprint_h = 3;
  ObservationModel observation_model = ObservationModel::Grid;
  RewardConfig reward;
};

// Black-box simulator G_I for the search stage. Observations are rendered
// straight from the state's map and believed object, never from the true
// object position.
class SearchModel2D {
 public:
  using State = SearchState2D;
  using Observation = Observation2D;

  SearchModel2D(Placement shape, int width, int height, ModelParams2D params)
      : shape_(normalized(std::move(shape))), width_(width), height_(height), params_(params) {
    require_odd_window(params_.footprint_w, params_.footprint_h);
    params_.reward.validate();
    placements_ = enumerate_placements(shape_, width_, height_);
    if (placements_.empty()) throw ConfigError("object does not fit on the map");
  }

  const Placement& shape() const noexcept { return shape_; }
  std::size_t object_size() const noexcept { return shape_.size(); }
  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  const ModelParams2D& params() const noexcept { return params_; }
  const std::vector<Placement>& placements() const noexcept { return placements_; }
  ObservationModel observation_model() const noexcept { return params_.observation_model; }

  ActionSet legal_actions(const State& s) const { return search2d::legal_actions(s); }
  bool is_terminal(const State& s) const { return search2d::is_terminal(s); }

  bool observations_match(const Observation& a, const Observation& b) const {
    if (params_.observation_model == ObservationModel::Binary) return a.object_found == b.object_found;
    return a.grid == b.grid;
  }

  // What the agent is allowed to see of a full grid under this model.
  Observation reduce(ObservationGrid2D grid) const {
    Observation o;
    o.object_found = make_binary_observation(grid, object_size());
    if (params_.observation_model == ObservationModel::Grid) o.grid = std::move(grid);
    return o;
  }

  // The state's own belief about the current view (used for successor maps).
  ObservationGrid2D render(const State& s) const {
    return render_observation(s, s.agent, params_.footprint_w, params_.footprint_h);
  }

  // G(s, a). Deterministic; the rng is part of the contract but unused here.
  StepOutcome<State, Observation> step(const State& s, Action a, Rng& /*rng*/) const {
    if (!legal_actions(s).contains(a)) {
      throw LegalityError(std::string("action ") + std::string(to_string(a)) +
                          " is not legal in this state");
    }
    State next;
    next.agent = moved(s.agent, a);
    next.believed_object = s.believed_object;
    ObservationGrid2D grid = render_observation(s.map, s.believed_object, next.agent,
                                                params_.footprint_w, params_.footprint_h);
    next.map = apply_observation(s.map, grid, next.agent);
    const double r = reward_2d(s, a, next, params_.reward);
    const bool term = search2d::is_terminal(next);
    return {std::move(next), reduce(std::move(grid)), r, term};
  }

 private:
  Placement shape_;
  int width_ = 0;
  int height_ = 0;
  ModelParams2D params_;
  std::vector<Placement> placements_;
};

// The agent's real knowledge: floor map at start, accumulated map, and every
// (pose, observation) it has actually received, the initial one first.
struct AgentKnowledge2D {
  GridMap2D initial_map;
  GridMap2D map;
  Cell agent;
  std::vector<Cell> poses;
  std::vector<Observation2D> observations;

  AgentKnowledge2D() = default;
  AgentKnowledge2D(GridMap2D floor, Cell start) : initial_map(floor), map(std::move(floor)), agent(start) {}

  void record(Cell pose, const Observation2D& obs) {
    agent = pose;
    poses.push_back(pose);
    observations.push_back(obs);
    if (!obs.grid.empty()) map = apply_observation(std::move(map), obs.grid, pose);
  }
};

namespace detail {

inline bool inside_window(const Placement& p, Cell pose, int w, int h) {
  for (const Cell& c : p) {
    if (std::abs(c.x - pose.x) > w / 2 || std::abs(c.y - pose.y) > h / 2) return false;
  }
  return true;
}

}  // namespace detail

// Placements consistent with everything the agent has seen. Grid model:
// cells on CANDIDATE/OBJECT only and, when possible, covering every observed
// OBJECT cell. Binary model: the full-object-in-view flag of every past
// observation is reproduced.
inline std::vector<std::size_t> consistent_placements(const SearchModel2D& model,
                                                      const AgentKnowledge2D& know) {
  const auto& table = model.placements();
  std::vector<std::size_t> out;
  if (model.observation_model() == ObservationModel::Binary) {
    const int w = model.params().footprint_w, h = model.params().footprint_h;
    for (std::size_t i = 0; i < table.size(); ++i) {
      bool ok = true;
      for (const Cell& c : table[i]) {
        if (know.initial_map.at(c) == CellValue::Blocked) ok = false;
      }
      for (std::size_t t = 0; ok && t < know.poses.size(); ++t) {
        ok = detail::inside_window(table[i], know.poses[t], w, h) == know.observations[t].object_found;
      }
      if (ok) out.push_back(i);
    }
    return out;
  }

  std::vector<Cell> seen_object;
  for (int y = 0; y < know.map.height(); ++y) {
    for (int x = 0; x < know.map.width(); ++x) {
      if (know.map.at({x, y}) == CellValue::Object) seen_object.push_back({x, y});
    }
  }
  std::vector<std::size_t> loose;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (!placement_allowed(know.map, table[i])) continue;
    loose.push_back(i);
    bool covers = true;
    for (const Cell& c : seen_object) {
      if (!contains_cell(table[i], c)) {
        covers = false;
        break;
      }
    }
    if (covers) out.push_back(i);
  }
  return out.empty() ? loose : out;
}

// Particle for a hypothesised placement given the agent's real knowledge.
inline SearchState2D particle_for(const SearchModel2D& model, const AgentKnowledge2D& know,
                                  const Placement& p) {
  SearchState2D s;
  s.agent = know.agent;
  s.believed_object = p;
  if (model.observation_model() == ObservationModel::Grid) {
    s.map = know.map;
  } else {
    // Binary observations say nothing cell-wise, so the particle's map is
    // what it would have seen along the real trajectory if it were right.
    s.map = know.initial_map;
    for (const Cell& pose : know.poses) {
      s.map = apply_observation(std::move(s.map),
                                render_observation(s.map, p, pose, model.params().footprint_w,
                                                   model.params().footprint_h),
                                pose);
    }
  }
  return s;
}

// Fresh particles uniform over the consistent placements.
inline std::vector<SearchState2D> reinvigorate_2d(const SearchModel2D& model,
                                                  const AgentKnowledge2D& know, std::size_t count,
                                                  Rng& rng) {
  const auto ok = consistent_placements(model, know);
  if (ok.empty()) throw UnsatisfiableError("observations rule out every object placement");
  std::vector<SearchState2D> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(particle_for(model, know, model.placements()[ok[uniform_index(rng, ok.size())]]));
  }
  return out;
}

}  // namespace avs::search2d
