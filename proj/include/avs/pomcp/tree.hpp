#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "avs/core/action.hpp"
#include "avs/core/errors.hpp"
#include "avs/core/pomdp.hpp"

namespace avs::pomcp {

// N(ha) and V(ha) for one action child of a history node.
struct ActionStats {
  int visits = 0;
  double value = 0.0;
};

// UCB1 tree policy over the legal actions. Unvisited children win first;
// otherwise argmax V(ha) + c * sqrt(ln N(h) / N(ha)). Ties go to the
// earlier action in NORTH<EAST<SOUTH<WEST order.
inline Action uct_select(const std::array<ActionStats, kNumActions>& stats, int node_visits,
                         double c, ActionSet legal) {
  if (legal.empty()) throw PlanningError("uct_select: no legal action");
  for (Action a : legal) {
    if (stats[index_of(a)].visits == 0) return a;
  }
  const double log_n = std::log(static_cast<double>(std::max(node_visits, 1)));
  Action best = *legal.begin();
  double best_score = -std::numeric_limits<double>::infinity();
  for (Action a : legal) {
    const ActionStats& s = stats[index_of(a)];
    const double score = s.value + c * std::sqrt(log_n / static_cast<double>(s.visits));
    if (score > best_score) {
      best_score = score;
      best = a;
    }
  }
  return best;
}

// argmax V(ha) over legal actions, fixed-order tie-break.
inline Action greedy_select(const std::array<ActionStats, kNumActions>& stats, ActionSet legal) {
  if (legal.empty()) throw PlanningError("no legal action at root");
  Action best = *legal.begin();
  double best_value = -std::numeric_limits<double>::infinity();
  for (Action a : legal) {
    if (stats[index_of(a)].value > best_value) {
      best_value = stats[index_of(a)].value;
      best = a;
    }
  }
  return best;
}

template <class State, class Observation>
struct TreeNode;

template <class State, class Observation>
struct ActionEdge {
  ActionStats stats;
  // Observation children; lookup goes through the model's match predicate.
  std::vector<std::unique_ptr<TreeNode<State, Observation>>> children;
};

// T(h) = <N(h), per-action edges, B(h)>.
template <class State, class Observation>
struct TreeNode {
  int visits = 0;
  std::array<ActionEdge<State, Observation>, kNumActions> edges;
  std::vector<State> particles;

  TreeNode* parent = nullptr;
  std::optional<Action> via_action;
  std::optional<Observation> via_observation;

  std::array<ActionStats, kNumActions> stats() const {
    std::array<ActionStats, kNumActions> out{};
    for (std::size_t i = 0; i < kNumActions; ++i) out[i] = edges[i].stats;
    return out;
  }

  ActionEdge<State, Observation>& edge(Action a) { return edges[index_of(a)]; }
  const ActionEdge<State, Observation>& edge(Action a) const { return edges[index_of(a)]; }

  // The (action, observation) path from the root to this node.
  History<Observation> history() const {
    std::vector<const TreeNode*> rev;
    for (const TreeNode* n = this; n->parent != nullptr; n = n->parent) rev.push_back(n);
    History<Observation> h;
    for (auto it = rev.rbegin(); it != rev.rend(); ++it) {
      h.push(*(*it)->via_action, *(*it)->via_observation);
    }
    return h;
  }
};

template <class State, class Observation>
class SearchTree {
 public:
  using Node = TreeNode<State, Observation>;

  SearchTree() : root_(std::make_unique<Node>()), size_(1) {}

  Node& root() { return *root_; }
  const Node& root() const { return *root_; }
  std::size_t size() const noexcept { return size_; }

  template <class Match>
  Node* find_child(Node& node, Action a, const Observation& o, Match&& match) {
    for (auto& child : node.edge(a).children) {
      if (match(*child->via_observation, o)) return child.get();
    }
    return nullptr;
  }

  Node& add_child(Node& node, Action a, Observation o) {
    auto& children = node.edge(a).children;
    children.push_back(std::make_unique<Node>());
    Node& child = *children.back();
    child.parent = &node;
    child.via_action = a;
    child.via_observation = std::move(o);
    ++size_;
    return child;
  }

 private:
  std::unique_ptr<Node> root_;
  std::size_t size_ = 0;
};

}  // namespace avs::pomcp
