#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <utility>

#include "avs/core/errors.hpp"
#include "avs/core/pomdp.hpp"
#include "avs/core/random.hpp"
#include "avs/pomcp/belief.hpp"
#include "avs/pomcp/tree.hpp"

namespace avs::pomcp {

// Models may optionally provide an initial-state sampler I, used when
// planning from an empty history without particles.
template <class M>
concept HasInitialSampler = requires(const M& m, Rng& rng) {
  { m.sample_initial(rng) } -> std::same_as<typename M::State>;
};

// POMCP planner. A fresh search tree is built for every decision; the tree
// of the last search stays inspectable until the next one.
template <GenerativeModel Model>
class Pomcp {
 public:
  using State = typename Model::State;
  using Observation = typename Model::Observation;
  using Tree = SearchTree<State, Observation>;
  using Node = typename Tree::Node;
  // Called after every V(ha) update with (node, action, backed-up return).
  using BackupObserver = std::function<void(const Node&, Action, double)>;

  Pomcp(const Model& model, SolverConfig cfg, Rng& rng)
      : model_(model), cfg_(std::move(cfg)), rng_(rng), tree_(std::make_unique<Tree>()) {
    cfg_.validate();
  }

  const SolverConfig& config() const noexcept { return cfg_; }
  const Tree& tree() const noexcept { return *tree_; }
  Tree& tree() noexcept { return *tree_; }
  void set_backup_observer(BackupObserver obs) { observer_ = std::move(obs); }

  // Runs exactly n_sim simulations from root states drawn uniformly from the
  // belief (or from I on an empty history) and returns argmax_a V(ha) over
  // the root's legal actions.
  Action search(const BeliefState<State>& belief, const History<Observation>& history) {
    tree_ = std::make_unique<Tree>();
    Node& root = tree_->root();

    auto draw_root = [&]() -> State {
      if (!belief.empty()) return belief.sample(rng_);
      if constexpr (HasInitialSampler<Model>) {
        if (history.empty()) return model_.sample_initial(rng_);
      }
      throw PlanningError("search: empty belief and no initial-state sampler");
    };

    State first = draw_root();
    const ActionSet root_legal = model_.legal_actions(first);
    if (root_legal.empty()) throw PlanningError("search: agent is blocked, no legal action");

    simulate(first, root, 0);
    for (int i = 1; i < cfg_.n_sim; ++i) simulate(draw_root(), root, 0);
    return greedy_select(root.stats(), root_legal);
  }

  // One descent through the tree. Expands one node per new history and
  // finishes with a rollout from there.
  double simulate(const State& s, Node& node, int depth) {
    if (beyond_horizon(depth)) return 0.0;
    const ActionSet legal = model_.legal_actions(s);
    if (legal.empty()) return 0.0;

    const Action a = uct_select(node.stats(), node.visits, cfg_.exploration, legal);
    auto out = model_.step(s, a, rng_);

    double future = 0.0;
    if (!out.terminal) {
      auto match = [this](const Observation& x, const Observation& y) {
        return model_.observations_match(x, y);
      };
      if (Node* child = tree_->find_child(node, a, out.observation, match)) {
        future = simulate(out.next, *child, depth + 1);
      } else {
        tree_->add_child(node, a, std::move(out.observation));
        future = rollout(out.next, depth + 1);
      }
    }
    const double ret = out.reward + cfg_.gamma * future;

    node.particles.push_back(s);
    ++node.visits;
    ActionStats& st = node.edge(a).stats;
    ++st.visits;
    st.value += (ret - st.value) / static_cast<double>(st.visits);
    if (observer_) observer_(node, a, ret);
    return ret;
  }

  // Uniform-random policy until the horizon, a terminal state, a dead end or
  // max_depth.
  double rollout(State s, int depth) {
    double total = 0.0;
    double discount = 1.0;
    while (depth < cfg_.max_depth && !beyond_horizon(depth) && !model_.is_terminal(s)) {
      const ActionSet legal = model_.legal_actions(s);
      if (legal.empty()) break;
      const Action a = legal.nth(uniform_index(rng_, legal.size()));
      auto out = model_.step(s, a, rng_);
      total += discount * out.reward;
      discount *= cfg_.gamma;
      ++depth;
      if (out.terminal) break;
      s = std::move(out.next);
    }
    return total;
  }

  bool beyond_horizon(int depth) const { return std::pow(cfg_.gamma, depth) < cfg_.epsilon; }

 private:
  const Model& model_;
  SolverConfig cfg_;
  Rng& rng_;
  std::unique_ptr<Tree> tree_;
  BackupObserver observer_;
};

template <GenerativeModel Model>
Action search(const Model& model, const BeliefState<typename Model::State>& belief,
              const History<typename Model::Observation>& history, const SolverConfig& cfg,
              Rng& rng) {
  Pomcp<Model> planner(model, cfg, rng);
  return planner.search(belief, history);
}

}  // namespace avs::pomcp
