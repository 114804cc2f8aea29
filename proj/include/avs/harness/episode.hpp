#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "avs/core/errors.hpp"
#include "avs/core/pomdp.hpp"
#include "avs/core/random.hpp"
#include "avs/harness/config.hpp"
#include "avs/pomcp/belief.hpp"
#include "avs/pomcp/solver.hpp"
#include "avs/pose3d/environment.hpp"
#include "avs/pose3d/model.hpp"
#include "avs/search2d/environment.hpp"
#include "avs/search2d/model.hpp"
#include "avs/world/object_template.hpp"

namespace avs::harness {

// One (policy, n_sim, K) cell of the experiment matrix. n_sim is 0 for the
// random walk.
struct RunPoint {
  Policy policy = Policy::Pomcp;
  int n_sim = 50;
  int particles = 200;
};

struct EpisodeResult {
  bool found = false;
  int steps = 0;
  double wall_time = 0.0;  // seconds
  std::uint64_t seed = 0;
  Stage stage = Stage::Search2D;
  // Observations ruled out every hypothesis; the episode was abandoned.
  bool contradiction = false;
  // At termination all particles share one believed object...
  bool belief_agreed = false;
  // ...equal to the true object (3D cells in the pose stage).
  bool belief_correct = false;
  bool search_found = false;  // the 2D stage terminated
  int search_steps = 0;
  bool lift_preserved = true;  // level-0 maps survived lift_belief bit-exactly
};

// Uniform over the legal moves.
inline Action random_walk_policy(ActionSet legal, Rng& rng) {
  if (legal.empty()) throw PlanningError("random walk: no legal action");
  return legal.nth(uniform_index(rng, legal.size()));
}

// Per-episode random streams. The scene stream is shared by every policy
// evaluated on the same seed, so comparisons are paired.
enum Stream : std::uint64_t { kSceneStream = 1, kAgentStream = 2, kEnvStream = 3 };

inline pose3d::Scene3D make_scene(const ExperimentConfig& cfg, Rng& scene_rng) {
  const ObjectTemplate tmpl = builtin_template(cfg.object);
  if (cfg.map_file.empty()) {
    if (cfg.stage == Stage::SearchPose3D) {
      return pose3d::random_scene_3d(cfg.width, cfg.height, cfg.z_levels, tmpl, scene_rng);
    }
    pose3d::Scene3D s;
    s.scene2d = search2d::random_scene(cfg.width, cfg.height, tmpl.shadow(), scene_rng);
    return s;
  }

  search2d::LoadedMap loaded = search2d::load_map_file(cfg.map_file);
  pose3d::Scene3D s;
  s.scene2d = std::move(loaded.scene);
  if (cfg.stage == Stage::SearchPose3D) {
    // The 3D pose is any template pose whose shadow is the marked footprint.
    std::vector<Shape3> fits;
    const auto& fp = s.scene2d.object;
    for (const Shape3& rot : rotations(tmpl.cells())) {
      const Placement sh = pose3d::shadow_of(rot);
      if (sh.size() != fp.size()) continue;
      const int dx = fp.front().x - sh.front().x, dy = fp.front().y - sh.front().y;
      Shape3 moved_shape;
      for (const Cell3& c : rot) moved_shape.push_back({c.x + dx, c.y + dy, c.z});
      if (pose3d::shadow_of(moved_shape) == fp) fits.push_back(std::move(moved_shape));
    }
    if (fits.empty()) throw ConfigError("object template does not match the map's object cells");
    s.object = fits[uniform_index(scene_rng, fits.size())];
    s.truth = pose3d::build_truth_3d(s.scene2d.truth, s.object, cfg.z_levels);
  }
  if (!loaded.has_agent) s.scene2d.agent_start = search2d::random_free_cell(s.scene2d.truth, scene_rng);
  return s;
}

namespace detail {

template <class State>
bool all_terminal(const pomcp::BeliefState<State>& b, bool (*pred)(const State&)) {
  if (b.empty()) return false;
  for (const State& s : b) {
    if (!pred(s)) return false;
  }
  return true;
}

template <class State>
bool all_agree(const pomcp::BeliefState<State>& b) {
  for (const State& s : b) {
    if (s.believed_object != b[0].believed_object) return false;
  }
  return !b.empty();
}

// Per-cell share of particles that put the object there, as a digit 0-9
// ('*' for all of them), walls as '#'.
inline std::string belief_grid(const pomcp::BeliefState<search2d::SearchState2D>& b, const GridMap2D& know) {
  std::vector<int> hits(know.area(), 0);
  for (const auto& s : b) {
    for (const Cell& c : s.believed_object) ++hits[know.index(c)];
  }
  std::string out;
  for (int y = 0; y < know.height(); ++y) {
    for (int x = 0; x < know.width(); ++x) {
      const int h = hits[know.index({x, y})];
      if (know.at({x, y}) == CellValue::Blocked) {
        out.push_back('#');
      } else if (h == 0) {
        out.push_back('.');
      } else if (static_cast<std::size_t>(h) == b.size()) {
        out.push_back('*');
      } else {
        out.push_back(static_cast<char>('0' + std::min(9, static_cast<int>(10 * h / static_cast<int>(b.size())))));
      }
    }
    out.push_back('\n');
  }
  return out;
}

inline std::string side_by_side(const std::string& a, const std::string& b) {
  std::istringstream la(a), lb(b);
  std::string out, x, y;
  while (std::getline(la, x)) {
    std::getline(lb, y);
    out += x + "   " + y + "\n";
  }
  return out;
}

}  // namespace detail

// Plays one episode: initial view, then plan, act, observe and update the
// belief until every particle is terminal or max_steps actions were taken.
// In the pose stage the search belief is lifted to 3D and the episode
// continues on the same step budget. `trace` receives a text dump of the
// knowledge and belief maps after every step.
inline EpisodeResult run_episode(const ExperimentConfig& cfg, const RunPoint& point, std::uint64_t seed,
                                 std::ostream* trace = nullptr) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();

  EpisodeResult res;
  res.seed = seed;
  res.stage = cfg.stage;

  Rng scene_rng(derive_seed(seed, kSceneStream));
  Rng agent_rng(derive_seed(seed, kAgentStream));
  Rng env_rng(derive_seed(seed, kEnvStream));

  const pose3d::Scene3D scene = make_scene(cfg, scene_rng);
  const GridMap2D& truth = scene.scene2d.truth;
  const SolverConfig solver = cfg.solver(std::max(point.n_sim, 1), point.particles);
  const auto k = static_cast<std::size_t>(point.particles);

  search2d::ModelParams2D mp;
  mp.footprint_w = cfg.footprint_w;
  mp.footprint_h = cfg.footprint_h;
  mp.observation_model = cfg.observation_model;
  mp.reward = cfg.reward;
  const search2d::SearchModel2D model(normalized(scene.scene2d.object), truth.width(), truth.height(), mp);
  search2d::GroundTruthEnv env(scene.scene2d, {cfg.p_noise, cfg.footprint_w, cfg.footprint_h});

  search2d::AgentKnowledge2D know(search2d::floor_knowledge(truth), env.agent());
  know.record(env.agent(), model.reduce(env.observe(env_rng)));

  auto finish = [&]() {
    if (cfg.record_time) res.wall_time = std::chrono::duration<double>(Clock::now() - t0).count();
    return res;
  };

  try {
    auto reinvig2 = [&](std::size_t n, Rng& rng) { return search2d::reinvigorate_2d(model, know, n, rng); };
    pomcp::BeliefState<search2d::SearchState2D> belief(reinvig2(k, agent_rng));
    History<search2d::Observation2D> history;
    pomcp::Pomcp<search2d::SearchModel2D> planner(model, solver, agent_rng);

    auto dump2 = [&](std::optional<Action> a) {
      if (trace == nullptr) return;
      *trace << "step " << res.steps;
      if (a) *trace << " action " << to_string(*a);
      *trace << " agent (" << know.agent.x << "," << know.agent.y << ")\n"
             << detail::side_by_side(know.map.to_string(), detail::belief_grid(belief, know.map)) << '\n';
    };
    dump2(std::nullopt);

    while (!detail::all_terminal(belief, &search2d::is_terminal) && res.steps < cfg.max_steps) {
      const Action a = point.policy == Policy::Pomcp
                           ? planner.search(belief, history)
                           : random_walk_policy(search2d::legal_actions(know.map, know.agent), agent_rng);
      const search2d::Observation2D obs = model.reduce(env.step(a, env_rng));
      know.record(env.agent(), obs);
      history.push(a, obs);
      ++res.steps;
      belief = pomcp::update_belief(model, belief, a, obs, solver, agent_rng, reinvig2);
      dump2(a);
    }

    res.search_found = detail::all_terminal(belief, &search2d::is_terminal);
    res.search_steps = res.steps;
    res.belief_agreed = detail::all_agree(belief);
    res.belief_correct = res.belief_agreed && belief[0].believed_object == scene.scene2d.object;
    res.found = res.search_found;
    if (cfg.stage == Stage::Search2D || !res.search_found) return finish();

    // Pose stage.
    res.found = false;
    res.belief_agreed = res.belief_correct = false;
    const ObjectTemplate tmpl = builtin_template(cfg.object);
    auto belief3 = pose3d::lift_belief(belief, cfg.z_levels, tmpl.size(), agent_rng);
    for (std::size_t i = 0; i < belief.size(); ++i) {
      if (!(belief3[i].map.level(0) == belief[i].map)) res.lift_preserved = false;
    }
    pose3d::AgentKnowledge3D know3{GridMap3D::lifted(know.map, cfg.z_levels), env.agent(),
                                   pose3d::shape_hypotheses(belief, tmpl.size(), cfg.z_levels)};
    pose3d::ModelParams3D mp3;
    mp3.footprint_w = cfg.footprint_w;
    mp3.footprint_h = cfg.footprint_h;
    mp3.cloud = cfg.cloud;
    mp3.reward = cfg.reward;
    const pose3d::PoseModel3D model3(truth.width(), truth.height(), cfg.z_levels, mp3);
    pose3d::GroundTruthEnv3D env3(scene.truth, scene.object, env.agent(),
                                  {cfg.footprint_w, cfg.footprint_h, cfg.cloud});
    auto reinvig3 = [&](std::size_t n, Rng& rng) { return pose3d::reinvigorate_3d(know3, n, rng); };
    History<pose3d::ObservationGrid3D> history3;
    pomcp::Pomcp<pose3d::PoseModel3D> planner3(model3, solver, agent_rng);

    while (!detail::all_terminal(belief3, &pose3d::is_terminal_3d) && res.steps < cfg.max_steps) {
      const Action a = point.policy == Policy::Pomcp
                           ? planner3.search(belief3, history3)
                           : random_walk_policy(pose3d::legal_actions_3d(know3.map, know3.agent), agent_rng);
      const pose3d::ObservationGrid3D obs = env3.step(a, env_rng);
      know3.record(env3.agent(), obs);
      history3.push(a, obs);
      ++res.steps;
      belief3 = pomcp::update_belief(model3, belief3, a, obs, solver, agent_rng, reinvig3);
      if (trace != nullptr) {
        std::map<Shape3, int> votes;
        for (const auto& s : belief3) ++votes[s.believed_object];
        *trace << "3d step " << res.steps << " action " << to_string(a) << " agent (" << know3.agent.x << ","
               << know3.agent.y << ") hypotheses " << votes.size() << '\n';
      }
    }
    res.found = detail::all_terminal(belief3, &pose3d::is_terminal_3d);
    res.belief_agreed = detail::all_agree(belief3);
    res.belief_correct = res.belief_agreed && belief3[0].believed_object == env3.object();
  } catch (const UnsatisfiableError& e) {
    res.contradiction = true;
    res.found = false;
    if (trace != nullptr) *trace << "contradiction: " << e.what() << '\n';
  }
  return finish();
}

}  // namespace avs::harness
