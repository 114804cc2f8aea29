#include <gtest/gtest.h>

#include <set>
#include <vector>

#include "avs/core/action.hpp"
#include "avs/core/errors.hpp"
#include "avs/core/pomdp.hpp"
#include "avs/core/random.hpp"
#include "support/stats.hpp"

using namespace avs;

TEST(Action, FourDistinctUnitOffsetsWithNorthDecreasingY) {
  EXPECT_EQ(offset(Action::North).dx, 0);
  EXPECT_EQ(offset(Action::North).dy, -1);
  EXPECT_EQ(offset(Action::East).dx, 1);
  EXPECT_EQ(offset(Action::East).dy, 0);
  EXPECT_EQ(offset(Action::South).dx, 0);
  EXPECT_EQ(offset(Action::South).dy, 1);
  EXPECT_EQ(offset(Action::West).dx, -1);
  EXPECT_EQ(offset(Action::West).dy, 0);
  std::set<std::pair<int, int>> seen;
  for (Action a : kAllActions) {
    const Offset o = offset(a);
    EXPECT_EQ(std::abs(o.dx) + std::abs(o.dy), 1);
    seen.insert({o.dx, o.dy});
  }
  EXPECT_EQ(seen.size(), 4u);
}

TEST(Action, NamesRoundTrip) {
  for (Action a : kAllActions) EXPECT_EQ(parse_action(to_string(a)), a);
  EXPECT_FALSE(parse_action("UP").has_value());
}

TEST(ActionSet, IteratesInFixedOrder) {
  const ActionSet s{Action::West, Action::North, Action::South};
  std::vector<Action> got(s.begin(), s.end());
  EXPECT_EQ(got, (std::vector<Action>{Action::North, Action::South, Action::West}));
  EXPECT_EQ(s.size(), 3u);
  EXPECT_EQ(s.nth(1), Action::South);
  EXPECT_FALSE(s.contains(Action::East));
  EXPECT_TRUE(ActionSet{}.empty());
  EXPECT_EQ(ActionSet::all().size(), 4u);
}

TEST(ActionSet, InsertAndErase) {
  ActionSet s;
  s.insert(Action::East);
  s.insert(Action::East);
  EXPECT_EQ(s.size(), 1u);
  s.erase(Action::East);
  EXPECT_TRUE(s.empty());
}

TEST(History, AppendOnlyAndSized) {
  History<int> h;
  EXPECT_TRUE(h.empty());
  h.push(Action::North, 3);
  h.push(Action::West, 5);
  ASSERT_EQ(h.size(), 2u);
  EXPECT_EQ(h[0].action, Action::North);
  EXPECT_EQ(h.back().observation, 5);
}

TEST(DiscountedReturn, EmptySequenceIsZero) {
  EXPECT_DOUBLE_EQ(discounted_return(std::vector<double>{}, 0.9), 0.0);
}

TEST(DiscountedReturn, ZeroGammaKeepsFirstReward) {
  EXPECT_DOUBLE_EQ(discounted_return(std::vector<double>{1, 1, 1}, 0.0), 1.0);
}

TEST(DiscountedReturn, HalfGammaOnePowersOfTwo) {
  EXPECT_DOUBLE_EQ(discounted_return(std::vector<double>{1, 2, 4}, 0.5), 3.0);
}

TEST(DiscountedReturn, BoundedByRmaxOverOneMinusGamma) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const double gamma = uniform_real(rng, 0.0, 0.99);
    const double r_max = uniform_real(rng, 0.1, 50.0);
    std::vector<double> rs(1 + uniform_index(rng, 300));
    for (double& r : rs) r = uniform_real(rng, -r_max, r_max);
    EXPECT_LE(std::abs(discounted_return(rs, gamma)), r_max / (1.0 - gamma) + 1e-9);
  }
}

TEST(SolverConfig, DefaultsAreValid) { EXPECT_NO_THROW(SolverConfig{}.validate()); }

TEST(SolverConfig, RejectsOutOfRangeFields) {
  auto bad = [](auto mutate) {
    SolverConfig c;
    mutate(c);
    EXPECT_THROW(c.validate(), ConfigError);
  };
  bad([](SolverConfig& c) { c.n_sim = 0; });
  bad([](SolverConfig& c) { c.particles = 0; });
  bad([](SolverConfig& c) { c.exploration = -1; });
  bad([](SolverConfig& c) { c.gamma = 1.0; });
  bad([](SolverConfig& c) { c.gamma = -0.1; });
  bad([](SolverConfig& c) { c.epsilon = 0.0; });
  bad([](SolverConfig& c) { c.epsilon = 1.0; });
  bad([](SolverConfig& c) { c.max_depth = 0; });
}

TEST(Random, SameSeedSameStream) {
  Rng a(derive_seed(5, 2)), b(derive_seed(5, 2));
  for (int i = 0; i < 100; ++i) EXPECT_EQ(uniform_index(a, 1000), uniform_index(b, 1000));
}

TEST(Random, DerivedStreamsDiffer) {
  EXPECT_NE(derive_seed(5, 1), derive_seed(5, 2));
  EXPECT_NE(derive_seed(5, 1), derive_seed(6, 1));
}

TEST(Random, UniformIndexPassesChiSquare) {
  Rng rng(3);
  std::vector<long> counts(7, 0);
  for (int i = 0; i < 10000; ++i) ++counts[uniform_index(rng, counts.size())];
  EXPECT_TRUE(test::chi_square_uniform_passes(counts));
}

TEST(Random, UniformUnitInHalfOpenRange) {
  Rng rng(4);
  for (int i = 0; i < 10000; ++i) {
    const double u = uniform_unit(rng);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Errors, MapFormatErrorCarriesLine) {
  const MapFormatError e(4, "bad");
  EXPECT_EQ(e.line(), 4);
  EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
}
