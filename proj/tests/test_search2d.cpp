#include <gtest/gtest.h>

#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "avs/pomcp/solver.hpp"
#include "avs/search2d/environment.hpp"
#include "avs/search2d/model.hpp"
#include "avs/search2d/observation.hpp"
#include "support/corridor.hpp"
#include "support/stats.hpp"

using namespace avs;
using namespace avs::search2d;

namespace {

SearchState2D open_state(int w, int h, Cell agent, Placement object = {}) {
  return {GridMap2D(w, h, CellValue::Candidate), agent, std::move(object)};
}

const Placement kL = builtin_template("L").shadow();

}  // namespace

TEST(ObjectTemplate, BuiltinsAreValid) {
  for (const auto& name : builtin_template_names()) {
    const ObjectTemplate t = builtin_template(name);
    EXPECT_EQ(t.name(), name);
    EXPECT_TRUE(is_4_connected(t.shadow()));
    EXPECT_TRUE(is_6_connected(t.cells()));
  }
  EXPECT_EQ(builtin_template("L").size(), 3u);
  EXPECT_EQ(builtin_template("step").size(), 3u);
  EXPECT_EQ(builtin_template("step").shadow().size(), 2u);
  EXPECT_EQ(builtin_template("step").height(), 2);
  EXPECT_THROW(builtin_template("Z"), ConfigError);
}

TEST(ObjectTemplate, RejectsDisconnectedOrRepeatedCells) {
  EXPECT_THROW(ObjectTemplate::flat("gap", {{0, 0}, {2, 0}}), ConfigError);
  EXPECT_THROW(ObjectTemplate("dup", {{0, 0, 0}, {0, 0, 0}}), ConfigError);
  EXPECT_THROW(ObjectTemplate("empty", {}), ConfigError);
}

TEST(ObjectTemplate, RotationsAreDistinctQuarterTurns) {
  EXPECT_EQ(rotations(Placement{{0, 0}}).size(), 1u);
  EXPECT_EQ(rotations(Placement{{0, 0}, {1, 0}}).size(), 2u);
  EXPECT_EQ(rotations(kL).size(), 4u);
  EXPECT_EQ(rotations(builtin_template("T").shadow()).size(), 4u);
}

TEST(ObjectTemplate, PlacementCountOnOpenMap) {
  // An L fits in every 2x2 block in 4 orientations.
  EXPECT_EQ(enumerate_placements(kL, 20, 20).size(), 4u * 19u * 19u);
  EXPECT_EQ(enumerate_placements({{0, 0}, {1, 0}}, 3, 1).size(), 2u);
  EXPECT_TRUE(enumerate_placements(kL, 1, 5).empty());
}

TEST(LegalActions, CornerOfOpenMap) {
  EXPECT_EQ(legal_actions(open_state(20, 20, {0, 0})), (ActionSet{Action::East, Action::South}));
}

TEST(LegalActions, EnclosedAgentHasNone) {
  auto s = open_state(3, 3, {1, 1});
  for (Cell c : {Cell{1, 0}, Cell{0, 1}, Cell{2, 1}, Cell{1, 2}}) s.map.set(c, CellValue::Blocked);
  EXPECT_TRUE(legal_actions(s).empty());
}

TEST(LegalActions, BlockedEastOnly) {
  auto s = open_state(5, 5, {2, 2});
  s.map.set({3, 2}, CellValue::Blocked);
  EXPECT_EQ(legal_actions(s), (ActionSet{Action::North, Action::South, Action::West}));
}

TEST(Footprint, CentredWindow) {
  const auto f = footprint({5, 5}, 3, 3, 20, 20);
  ASSERT_EQ(f.size(), 9u);
  for (const Cell& c : f) {
    EXPECT_GE(c.x, 4);
    EXPECT_LE(c.x, 6);
    EXPECT_GE(c.y, 4);
    EXPECT_LE(c.y, 6);
  }
}

TEST(Footprint, ClippedAtCorners) {
  EXPECT_EQ(footprint({0, 0}, 3, 3, 20, 20).size(), 4u);
  EXPECT_EQ(footprint({19, 19}, 3, 3, 20, 20).size(), 4u);
  EXPECT_THROW(footprint({0, 0}, 2, 3, 20, 20), ConfigError);
}

TEST(RenderObservation, BelievedObjectInsideWindow) {
  const auto s = open_state(10, 10, {5, 5}, {{4, 4}, {4, 5}, {5, 5}});
  const auto o = render_observation(s, {5, 5}, 3, 3);
  EXPECT_EQ(o.count(CellValue::Object), 3u);
  EXPECT_EQ(o.at(0, 0), CellValue::Object);
  EXPECT_EQ(o.at(0, 1), CellValue::Object);
  EXPECT_EQ(o.at(1, 1), CellValue::Object);
  EXPECT_EQ(o.count(CellValue::Candidate), 0u);
}

TEST(RenderObservation, ObjectOutsideWindowShowsTheMap) {
  auto s = open_state(10, 10, {5, 5}, {{0, 0}, {0, 1}, {1, 1}});
  s.map.set({6, 6}, CellValue::OtherObject);
  s.map.set({4, 6}, CellValue::Blocked);
  const auto o = render_observation(s, {5, 5}, 3, 3);
  EXPECT_EQ(o.count(CellValue::Object), 0u);
  EXPECT_EQ(o.at(2, 2), CellValue::OtherObject);
  EXPECT_EQ(o.at(0, 2), CellValue::Blocked);
  EXPECT_EQ(o.count(CellValue::Empty), 7u);
}

TEST(RenderObservation, OffMapCellsAreBlocked) {
  const auto o = render_observation(open_state(10, 10, {0, 0}), {0, 0}, 3, 3);
  EXPECT_EQ(o.count(CellValue::Blocked), 5u);
  EXPECT_EQ(o.at(0, 0), CellValue::Blocked);
  EXPECT_EQ(o.at(1, 1), CellValue::Empty);
}

TEST(RenderObservation, DependsOnlyOnWindowCells) {
  Rng rng(1);
  auto s = open_state(12, 12, {6, 6}, {{6, 7}});
  const auto base = render_observation(s, {6, 6}, 3, 3);
  for (int i = 0; i < 200; ++i) {
    Cell c{static_cast<int>(uniform_index(rng, 12)), static_cast<int>(uniform_index(rng, 12))};
    if (std::abs(c.x - 6) <= 1 && std::abs(c.y - 6) <= 1) continue;
    s.map.set(c, static_cast<CellValue>(uniform_index(rng, 5)));
    ASSERT_EQ(render_observation(s, {6, 6}, 3, 3), base);
  }
}

TEST(ObserveTrue, ZeroNoiseIsTheGroundTruthRendering) {
  Rng scene_rng(2), rng(3);
  const auto scene = random_scene(10, 10, kL, scene_rng);
  GroundTruthEnv env(scene, {0.0, 3, 3});
  for (int i = 0; i < 50; ++i) {
    const Cell pose{static_cast<int>(uniform_index(rng, 10)), static_cast<int>(uniform_index(rng, 10))};
    EXPECT_EQ(observe_true(env, pose, rng), render_observation(scene.truth, scene.object, pose, 3, 3));
  }
}

TEST(ObserveTrue, FullNoiseSpreadsTheObjectIntoABorderCell) {
  // Object in the window's centre column; the top-left border cell has only
  // in-window neighbours (0,1) and (1,0). Put the object on both.
  Scene2D scene{GridMap2D(5, 5, CellValue::Empty), {2, 2}, {{1, 2}, {2, 1}, {2, 2}}};
  for (const Cell& c : scene.object) scene.truth.set(c, CellValue::Object);
  GroundTruthEnv env(scene, {1.0, 3, 3});
  Rng rng(4);
  const auto o = observe_true(env, {2, 2}, rng);
  EXPECT_EQ(scene.truth.at({1, 1}), CellValue::Empty);
  EXPECT_EQ(o.at(0, 0), CellValue::Object);
  EXPECT_EQ(o.at(1, 1), CellValue::Object);  // centre untouched
}

TEST(ObserveTrue, CentreCellIsNeverCorrupted) {
  ObservationGrid2D g(3, 3, CellValue::OtherObject);
  g.set(1, 1, CellValue::Empty);
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(perturb_border(g, 1.0, rng).at(1, 1), CellValue::Empty);
}

TEST(ObserveTrue, BorderFlipRateMatchesNoiseProbability) {
  // Checkerboard: every neighbour differs, so a fired flip always shows.
  ObservationGrid2D g(3, 3);
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) g.set(i, j, (i + j) % 2 == 0 ? CellValue::OtherObject : CellValue::Empty);
  }
  Rng rng(6);
  const double p = 0.1;
  const long n = 10000;
  std::vector<long> flips(9, 0);
  for (long t = 0; t < n; ++t) {
    const auto o = perturb_border(g, p, rng);
    for (int j = 0; j < 3; ++j) {
      for (int i = 0; i < 3; ++i) flips[static_cast<std::size_t>(j * 3 + i)] += o.at(i, j) != g.at(i, j);
    }
  }
  EXPECT_EQ(flips[4], 0);
  for (std::size_t k = 0; k < 9; ++k) {
    if (k != 4) {
      EXPECT_TRUE(test::within_3_sigma(flips[k], n, p)) << "cell " << k << ": " << flips[k];
    }
  }
}

TEST(ApplyObservation, EmptyWindowOnUnknownMap) {
  GridMap2D m(6, 6, CellValue::Candidate);
  m = apply_observation(std::move(m), ObservationGrid2D(3, 3, CellValue::Empty), {2, 2});
  EXPECT_EQ(m.count(CellValue::Empty), 9u);
  EXPECT_EQ(m.count(CellValue::Candidate), 27u);
}

TEST(ApplyObservation, Idempotent) {
  GridMap2D m(6, 6, CellValue::Candidate);
  ObservationGrid2D o(3, 3, CellValue::Empty);
  o.set(0, 0, CellValue::OtherObject);
  const auto once = apply_observation(m, o, {3, 3});
  EXPECT_EQ(apply_observation(once, o, {3, 3}), once);
}

TEST(ApplyObservation, ObjectOverCandidate) {
  ObservationGrid2D o(3, 3, CellValue::Empty);
  o.set(1, 1, CellValue::Object);
  const auto m = apply_observation(GridMap2D(5, 5), o, {2, 2});
  EXPECT_EQ(m.at({2, 2}), CellValue::Object);
}

TEST(ApplyObservation, OffMapWindowCellsIgnored) {
  const auto m = apply_observation(GridMap2D(5, 5), ObservationGrid2D(3, 3, CellValue::Blocked), {0, 0});
  EXPECT_EQ(m.count(CellValue::Blocked), 4u);
  EXPECT_EQ(m.count(CellValue::Candidate), 21u);
}

TEST(Reward2D, UnchangedMapPaysActionAndReobserve) {
  const RewardConfig r;
  auto s = open_state(5, 5, {2, 2}, {{0, 0}});
  s.map = GridMap2D(5, 5, CellValue::Empty);
  s.map.set({0, 0}, CellValue::Candidate);
  auto next = s;
  next.agent = {2, 3};
  EXPECT_DOUBLE_EQ(reward_2d(s, Action::South, next, r), r.p_action + r.p_reobserve);
}

TEST(Reward2D, ResolvingThreeCandidates) {
  const RewardConfig r;
  auto s = open_state(5, 5, {2, 2}, {{0, 0}});
  auto next = s;
  for (int x = 1; x < 4; ++x) next.map.set({x, 4}, CellValue::Empty);
  EXPECT_DOUBLE_EQ(reward_2d(s, Action::South, next, r), r.p_action + 3 * r.r_exploration);
}

TEST(Reward2D, CompletingTheObject) {
  const RewardConfig r;
  auto s = open_state(5, 5, {2, 2}, {{0, 0}, {1, 0}});
  s.map = GridMap2D(5, 5, CellValue::Empty);
  s.map.set({0, 0}, CellValue::Object);
  s.map.set({1, 0}, CellValue::Candidate);
  auto next = s;
  next.map.set({1, 0}, CellValue::Object);
  EXPECT_DOUBLE_EQ(reward_2d(s, Action::North, next, r),
                   r.p_action + r.r_terminal + r.r_discovery + r.r_exploration);
}

TEST(Reward2D, AllZeroConstantsGiveZero) {
  RewardConfig zero{0, 0, 0, 0, 0, 0};
  const auto m = SearchModel2D(kL, 8, 8, {3, 3, ObservationModel::Grid, zero});
  Rng rng(7);
  for (int t = 0; t < 200; ++t) {
    auto s = open_state(8, 8, {static_cast<int>(uniform_index(rng, 8)), static_cast<int>(uniform_index(rng, 8))},
                        m.placements()[uniform_index(rng, m.placements().size())]);
    for (Action a : m.legal_actions(s)) ASSERT_DOUBLE_EQ(m.step(s, a, rng).reward, 0.0);
  }
}

TEST(Terminal, AllBelievedCellsObject) {
  auto s = open_state(5, 5, {0, 0}, {{1, 1}, {1, 2}, {2, 2}});
  EXPECT_FALSE(is_terminal(s));
  s.map.set({1, 1}, CellValue::Object);
  s.map.set({1, 2}, CellValue::Object);
  EXPECT_FALSE(is_terminal(s));
  s.map.set({2, 2}, CellValue::Object);
  EXPECT_TRUE(is_terminal(s));
}

TEST(PlaceObject, UniqueRegion) {
  GridMap2D m(5, 5, CellValue::Empty);
  for (Cell c : {Cell{3, 0}, Cell{3, 1}, Cell{4, 1}}) m.set(c, CellValue::Candidate);
  Rng rng(8);
  EXPECT_EQ(place_object_simulation(m, kL, rng), (Placement{{3, 0}, {3, 1}, {4, 1}}));
}

TEST(PlaceObject, AllEmptyIsUnsatisfiable) {
  Rng rng(9);
  EXPECT_THROW(place_object_simulation(GridMap2D(5, 5, CellValue::Empty), kL, rng), UnsatisfiableError);
}

TEST(PlaceObject, UniformOverConsistentPlacements) {
  // A 2x2 candidate block holds the L in exactly 4 ways.
  GridMap2D m(6, 6, CellValue::Empty);
  for (Cell c : {Cell{2, 2}, Cell{3, 2}, Cell{2, 3}, Cell{3, 3}}) m.set(c, CellValue::Candidate);
  Rng rng(10);
  std::map<Placement, long> f;
  for (int i = 0; i < 10000; ++i) ++f[place_object_simulation(m, kL, rng)];
  ASSERT_EQ(f.size(), 4u);
  std::vector<long> counts;
  for (const auto& [p, c] : f) counts.push_back(c);
  EXPECT_TRUE(test::chi_square_uniform_passes(counts));
}

TEST(PlaceObject, NeverOnOtherObjectsOrWalls) {
  GridMap2D m(4, 4, CellValue::Candidate);
  m.set({1, 1}, CellValue::OtherObject);
  m.set({2, 2}, CellValue::Blocked);
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    for (const Cell& c : place_object_simulation(m, kL, rng)) {
      ASSERT_NE(c, (Cell{1, 1}));
      ASSERT_NE(c, (Cell{2, 2}));
    }
  }
}

TEST(BinaryObservation, FullPartialEmpty) {
  ObservationGrid2D o(3, 3);
  EXPECT_FALSE(make_binary_observation(o, 3));
  o.set(0, 0, CellValue::Object);
  o.set(0, 1, CellValue::Object);
  EXPECT_FALSE(make_binary_observation(o, 3));
  o.set(1, 1, CellValue::Object);
  EXPECT_TRUE(make_binary_observation(o, 3));
}

TEST(GenerativeModel, OffMapMoveIsALegalityError) {
  const SearchModel2D m(kL, 6, 6, {});
  Rng rng(12);
  EXPECT_THROW(m.step(open_state(6, 6, {0, 3}, {{3, 3}, {3, 4}, {4, 4}}), Action::West, rng), LegalityError);
}

TEST(GenerativeModel, BelievedObjectInNextWindowIsFullyObserved) {
  const SearchModel2D m(kL, 8, 8, {});
  const Placement obj{{3, 3}, {3, 4}, {4, 4}};
  Rng rng(13);
  for (Action a : kAllActions) {
    const auto out = m.step(open_state(8, 8, {4, 3}, obj), a, rng);
    const auto grid = render_observation(out.next, out.next.agent, 3, 3);
    if (out.next.agent == Cell{4, 4} || out.next.agent == Cell{3, 3} || out.next.agent == Cell{3, 4}) {
      EXPECT_EQ(out.observation.grid.count(CellValue::Object), 3u) << to_string(a);
    }
    EXPECT_EQ(out.observation.grid, grid);
  }
}

TEST(GenerativeModel, RevealingTheOtherCandidateEarnsExploration) {
  const auto m = test::corridor_model();
  Rng rng(14);
  const auto out = m.step(test::corridor_state(2), Action::West, rng);
  EXPECT_EQ(out.observation.grid.at(0, 0), CellValue::Empty);
  EXPECT_EQ(out.next.map.at({0, 0}), CellValue::Empty);
  const RewardConfig r;
  EXPECT_DOUBLE_EQ(out.reward, r.p_action + r.r_exploration);
  EXPECT_FALSE(out.terminal);
}

TEST(GenerativeModel, DeterministicUnderReplay) {
  const SearchModel2D m(kL, 8, 8, {});
  const auto s = open_state(8, 8, {2, 2}, {{5, 5}, {5, 6}, {6, 6}});
  Rng a(15), b(15);
  for (Action act : m.legal_actions(s)) {
    const auto x = m.step(s, act, a);
    const auto y = m.step(s, act, b);
    EXPECT_EQ(x.next, y.next);
    EXPECT_EQ(x.observation, y.observation);
    EXPECT_EQ(x.reward, y.reward);
    EXPECT_EQ(x.terminal, y.terminal);
  }
}

TEST(GenerativeModel, IgnoresTheTrueEnvironment) {
  // Same particle, two different worlds: simulated outcomes are identical.
  const SearchModel2D m(kL, 8, 8, {});
  const auto s = open_state(8, 8, {3, 3}, {{4, 4}, {4, 5}, {5, 5}});
  Scene2D w1{GridMap2D(8, 8, CellValue::Empty), {3, 3}, {{0, 0}, {0, 1}, {1, 1}}};
  Scene2D w2{GridMap2D(8, 8, CellValue::Empty), {3, 3}, {{4, 3}, {4, 4}, {5, 4}}};
  for (auto* w : {&w1, &w2}) {
    for (const Cell& c : w->object) w->truth.set(c, CellValue::Object);
  }
  GroundTruthEnv e1(w1, {}), e2(w2, {});
  Rng r1(16), r2(16);
  (void)e1.step(Action::East, r1);
  (void)e2.step(Action::East, r2);
  const auto o1 = m.step(s, Action::East, r1);
  const auto o2 = m.step(s, Action::East, r2);
  EXPECT_EQ(o1.observation, o2.observation);
  EXPECT_EQ(o1.next, o2.next);
}

TEST(GenerativeModel, TerminalFlagMatchesPredicate) {
  const SearchModel2D m(kL, 6, 6, {});
  Rng rng(17);
  for (int t = 0; t < 300; ++t) {
    auto s = open_state(6, 6, {static_cast<int>(uniform_index(rng, 6)), static_cast<int>(uniform_index(rng, 6))},
                        m.placements()[uniform_index(rng, m.placements().size())]);
    for (Action a : m.legal_actions(s)) {
      const auto out = m.step(s, a, rng);
      ASSERT_EQ(out.terminal, is_terminal(out.next));
    }
  }
}

TEST(GenerativeModel, BinaryModeMatchesOnFlagOnly) {
  const SearchModel2D m(kL, 8, 8, {3, 3, ObservationModel::Binary, {}});
  Rng rng(18);
  const auto out = m.step(open_state(8, 8, {2, 2}, {{5, 5}, {5, 6}, {6, 6}}), Action::East, rng);
  EXPECT_TRUE(out.observation.grid.empty());
  EXPECT_FALSE(out.observation.object_found);
  Observation2D other;
  other.object_found = false;
  other.grid = ObservationGrid2D(3, 3, CellValue::Blocked);
  EXPECT_TRUE(m.observations_match(out.observation, other));
}

TEST(BinaryKnowledge, ConsistentPlacementsFollowTheFlags) {
  const SearchModel2D m({{0, 0}}, 5, 1, {1, 1, ObservationModel::Binary, {}});
  AgentKnowledge2D know(GridMap2D(5, 1), {2, 0});
  Observation2D no;
  know.record({2, 0}, no);
  know.record({1, 0}, no);
  auto ok = consistent_placements(m, know);
  std::set<int> xs;
  for (auto i : ok) xs.insert(m.placements()[i][0].x);
  EXPECT_EQ(xs, (std::set<int>{0, 3, 4}));
  Observation2D yes;
  yes.object_found = true;
  know.record({0, 0}, yes);
  ok = consistent_placements(m, know);
  ASSERT_EQ(ok.size(), 1u);
  EXPECT_EQ(m.placements()[ok[0]], (Placement{{0, 0}}));
  const auto p = particle_for(m, know, m.placements()[ok[0]]);
  EXPECT_TRUE(is_terminal(p));
  EXPECT_EQ(p.map.at({3, 0}), CellValue::Candidate);
}

TEST(MapFile, LoadsAllCellKinds) {
  std::istringstream in("#....\n.A.X.\n..OO.\n");
  const auto m = load_map(in);
  EXPECT_TRUE(m.has_agent);
  EXPECT_EQ(m.scene.agent_start, (Cell{1, 1}));
  EXPECT_EQ(m.scene.truth.width(), 5);
  EXPECT_EQ(m.scene.truth.height(), 3);
  EXPECT_EQ(m.scene.truth.at({0, 0}), CellValue::Blocked);
  EXPECT_EQ(m.scene.truth.at({3, 1}), CellValue::OtherObject);
  EXPECT_EQ(m.scene.truth.at({1, 1}), CellValue::Empty);
  EXPECT_EQ(m.scene.object, (Placement{{2, 2}, {3, 2}}));
}

TEST(MapFile, RejectsBadMaps) {
  auto bad = [](const char* text) {
    std::istringstream in(text);
    EXPECT_THROW(load_map(in), MapFormatError) << text;
  };
  bad("");
  bad("....\n....\n");          // no object
  bad("O..O\n....\n");          // disconnected object
  bad("O...\n...\n");           // ragged
  bad("O..Z\n");                // unknown character
  bad("OA.A\n");                // two agents
}

TEST(MapFile, ReportsTheOffendingLine) {
  std::istringstream in("O...\n....\n..?.\n");
  try {
    load_map(in);
    FAIL();
  } catch (const MapFormatError& e) {
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(MapFile, AgentOptional) {
  std::istringstream in("O.\n..\n");
  EXPECT_FALSE(load_map(in).has_agent);
}

TEST(Environment, RejectsIllegalRealMoves) {
  Scene2D s{GridMap2D(3, 3, CellValue::Empty), {0, 0}, {{2, 2}}};
  s.truth.set({2, 2}, CellValue::Object);
  s.truth.set({1, 0}, CellValue::Blocked);
  GroundTruthEnv env(s, {});
  Rng rng(19);
  EXPECT_THROW(env.step(Action::North, rng), LegalityError);
  EXPECT_THROW(env.step(Action::East, rng), LegalityError);
  EXPECT_NO_THROW(env.step(Action::South, rng));
  EXPECT_EQ(env.steps(), 1);
}

TEST(Environment, RejectsInvalidScenes) {
  Scene2D s{GridMap2D(3, 3, CellValue::Empty), {0, 0}, {{0, 2}, {2, 2}}};
  EXPECT_THROW(GroundTruthEnv(s, {}), ConfigError);
  s.object = {{2, 2}};
  s.truth.set({0, 0}, CellValue::Blocked);
  EXPECT_THROW(GroundTruthEnv(s, {}), ConfigError);
  s.truth.set({0, 0}, CellValue::Empty);
  EXPECT_THROW(GroundTruthEnv(s, {0.0, 2, 3}), ConfigError);
}

TEST(Knowledge, MonotoneSoundAndTerminalCorrectUnderRandomWalks) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng scene_rng(seed), rng(seed + 50);
    const auto scene = random_scene(10, 10, kL, scene_rng);
    const SearchModel2D m(kL, 10, 10, {});
    GroundTruthEnv env(scene, {});
    AgentKnowledge2D know(floor_knowledge(scene.truth), env.agent());
    know.record(env.agent(), m.reduce(env.observe(rng)));
    std::size_t candidates = know.map.count(CellValue::Candidate);
    for (int t = 0; t < 150; ++t) {
      const ActionSet legal = legal_actions(know.map, know.agent);
      const Action a = legal.nth(uniform_index(rng, legal.size()));
      auto obs = env.step(a, rng);
      know.record(env.agent(), m.reduce(std::move(obs)));
      const std::size_t now = know.map.count(CellValue::Candidate);
      ASSERT_LE(now, candidates);
      candidates = now;
      for (int y = 0; y < 10; ++y) {
        for (int x = 0; x < 10; ++x) {
          const CellValue v = know.map.at({x, y});
          if (v != CellValue::Candidate) {
            ASSERT_EQ(v, scene.truth.at({x, y}));
          }
        }
      }
      // A placement the agent's own map shows as complete is the true one.
      for (const auto& p : m.placements()) {
        if (is_terminal(SearchState2D{know.map, know.agent, p})) {
          ASSERT_EQ(p, scene.object);
        }
      }
    }
  }
}
