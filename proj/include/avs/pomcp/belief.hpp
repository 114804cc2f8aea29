#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "avs/core/errors.hpp"
#include "avs/core/pomdp.hpp"
#include "avs/core/random.hpp"

namespace avs::pomcp {

// Unweighted particle approximation of B(s, h).
template <class State>
class BeliefState {
 public:
  BeliefState() = default;
  explicit BeliefState(std::vector<State> particles) : particles_(std::move(particles)) {}

  std::size_t size() const noexcept { return particles_.size(); }
  bool empty() const noexcept { return particles_.empty(); }
  const State& operator[](std::size_t i) const { return particles_[i]; }
  auto begin() const { return particles_.begin(); }
  auto end() const { return particles_.end(); }
  const std::vector<State>& particles() const noexcept { return particles_; }

  void push(State s) { particles_.push_back(std::move(s)); }

  const State& sample(Rng& rng) const { return particles_[uniform_index(rng, particles_.size())]; }

 private:
  std::vector<State> particles_;
};

struct BeliefUpdateStats {
  std::size_t simulator_calls = 0;
  std::size_t accepted = 0;
  std::size_t reinvigorated = 0;
};

// Fills `count` fresh particles from a domain sampler `draw(count, rng)`.
// The sampler throws UnsatisfiableError when nothing is consistent.
template <class State, class Sampler>
BeliefState<State> reinvigorate(BeliefState<State> belief, std::size_t count, Sampler&& draw,
                                Rng& rng) {
  std::vector<State> fresh = draw(count, rng);
  for (State& s : fresh) belief.push(std::move(s));
  return belief;
}

// Monte-Carlo belief update by rejection: sample a particle, push it through
// G(s, action), keep the successor when its observation matches the real
// one. Stops at K acceptances or after rejection_factor * K simulator calls;
// any shortfall is refilled by the reinvigoration sampler, so the result
// always holds exactly K particles.
//
// Draw order per attempt: particle index, then whatever the model's step
// consumes.
template <GenerativeModel Model, class Sampler>
BeliefState<typename Model::State> update_belief(
    const Model& model, const BeliefState<typename Model::State>& belief, Action action,
    const typename Model::Observation& real_obs, const SolverConfig& cfg, Rng& rng,
    Sampler&& reinvigorator, BeliefUpdateStats* stats = nullptr) {
  using State = typename Model::State;
  const auto k = static_cast<std::size_t>(cfg.particles);
  const std::size_t budget = static_cast<std::size_t>(cfg.rejection_factor) * k;

  BeliefUpdateStats local;
  std::vector<State> accepted;
  accepted.reserve(k);
  if (!belief.empty()) {
    while (accepted.size() < k && local.simulator_calls < budget) {
      const State& s = belief.sample(rng);
      ++local.simulator_calls;
      if (!model.legal_actions(s).contains(action)) continue;
      auto out = model.step(s, action, rng);
      if (model.observations_match(out.observation, real_obs)) {
        accepted.push_back(std::move(out.next));
      }
    }
  }
  local.accepted = accepted.size();

  BeliefState<State> next(std::move(accepted));
  if (next.size() < k) {
    local.reinvigorated = k - next.size();
    next = reinvigorate(std::move(next), k - next.size(), reinvigorator, rng);
  }
  if (stats != nullptr) *stats = local;
  return next;
}

}  // namespace avs::pomcp
