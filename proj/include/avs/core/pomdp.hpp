#pragma once

#include <concepts>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "avs/core/action.hpp"
#include "avs/core/errors.hpp"
#include "avs/core/random.hpp"

namespace avs {

// Ordered (action, observation) pairs seen so far. Append-only.
template <class Observation>
class History {
 public:
  struct Entry {
    Action action;
    Observation observation;
  };

  void push(Action a, Observation o) { entries_.push_back(Entry{a, std::move(o)}); }

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const Entry& operator[](std::size_t i) const { return entries_[i]; }
  const Entry& back() const { return entries_.back(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

 private:
  std::vector<Entry> entries_;
};

// Result of one call to the black-box simulator G(s, a).
template <class State, class Observation>
struct StepOutcome {
  State next;
  Observation observation;
  double reward = 0.0;
  bool terminal = false;
};

struct SolverConfig {
  int n_sim = 50;            // simulations per decision
  int particles = 200;       // K
  double exploration = 20.0; // UCT constant c
  double gamma = 0.95;
  double epsilon = 0.01;     // stop once gamma^depth < epsilon
  int max_depth = 60;        // hard cap on rollout depth
  int rejection_factor = 100;  // belief update budget is rejection_factor * K simulator calls
  std::uint64_t seed = 0;

  void validate() const {
    if (n_sim < 1) throw ConfigError("n_sim must be >= 1");
    if (particles < 1) throw ConfigError("particle count must be >= 1");
    if (exploration < 0.0) throw ConfigError("exploration constant must be >= 0");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("gamma must lie in [0, 1)");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
    if (max_depth < 1) throw ConfigError("max_depth must be >= 1");
    if (rejection_factor < 1) throw ConfigError("rejection_factor must be >= 1");
  }
};

// Sum_k gamma^k r_k.
inline double discounted_return(std::span<const double> rewards, double gamma) {
  double total = 0.0;
  double discount = 1.0;
  for (double r : rewards) {
    total += discount * r;
    discount *= gamma;
  }
  return total;
}

// Environment contract consumed by the planner. `step` must be a pure
// function of (state, action, rng) and throw LegalityError for actions
// outside legal_actions(state).
template <class M>
concept GenerativeModel =
    requires(const M& m, const typename M::State& s, const typename M::Observation& o,
             Action a, Rng& rng) {
      typename M::State;
      typename M::Observation;
      { m.step(s, a, rng) }
          -> std::same_as<StepOutcome<typename M::State, typename M::Observation>>;
      { m.legal_actions(s) } -> std::same_as<ActionSet>;
      { m.is_terminal(s) } -> std::same_as<bool>;
      { m.observations_match(o, o) } -> std::same_as<bool>;
    };

}  // namespace avs
