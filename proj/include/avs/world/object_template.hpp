#pragma once

#include <algorithm>
#include <array>
#include <queue>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "avs/core/errors.hpp"
#include "avs/world/grid_map.hpp"

namespace avs {

using Placement = std::vector<Cell>;  // sorted cell set
using Shape3 = std::vector<Cell3>;    // sorted cell set

namespace detail {

template <class C, class Neighbours>
bool connected(std::span<const C> cells, Neighbours&& neighbours) {
  if (cells.empty()) return false;
  std::set<C> remaining(cells.begin(), cells.end());
  std::queue<C> frontier;
  frontier.push(*remaining.begin());
  remaining.erase(remaining.begin());
  while (!frontier.empty()) {
    const C c = frontier.front();
    frontier.pop();
    for (const C& n : neighbours(c)) {
      if (auto it = remaining.find(n); it != remaining.end()) {
        remaining.erase(it);
        frontier.push(n);
      }
    }
  }
  return remaining.empty();
}

}  // namespace detail

inline bool is_4_connected(std::span<const Cell> cells) {
  return detail::connected(cells, [](Cell c) {
    return std::array<Cell, 4>{Cell{c.x + 1, c.y}, Cell{c.x - 1, c.y}, Cell{c.x, c.y + 1},
                               Cell{c.x, c.y - 1}};
  });
}

inline bool is_6_connected(std::span<const Cell3> cells) {
  return detail::connected(cells, [](Cell3 c) {
    return std::array<Cell3, 6>{Cell3{c.x + 1, c.y, c.z}, Cell3{c.x - 1, c.y, c.z},
                                Cell3{c.x, c.y + 1, c.z}, Cell3{c.x, c.y - 1, c.z},
                                Cell3{c.x, c.y, c.z + 1}, Cell3{c.x, c.y, c.z - 1}};
  });
}

// Translate so the minimum x and y are 0, then sort.
inline Placement normalized(Placement cells) {
  if (cells.empty()) return cells;
  int min_x = cells.front().x, min_y = cells.front().y;
  for (const Cell& c : cells) {
    min_x = std::min(min_x, c.x);
    min_y = std::min(min_y, c.y);
  }
  for (Cell& c : cells) c = {c.x - min_x, c.y - min_y};
  std::sort(cells.begin(), cells.end());
  return cells;
}

inline Shape3 normalized(Shape3 cells) {
  if (cells.empty()) return cells;
  int min_x = cells.front().x, min_y = cells.front().y, min_z = cells.front().z;
  for (const Cell3& c : cells) {
    min_x = std::min(min_x, c.x);
    min_y = std::min(min_y, c.y);
    min_z = std::min(min_z, c.z);
  }
  for (Cell3& c : cells) c = {c.x - min_x, c.y - min_y, c.z - min_z};
  std::sort(cells.begin(), cells.end());
  return cells;
}

// Distinct quarter-turn rotations about the vertical axis, normalized.
inline std::vector<Shape3> rotations(const Shape3& shape) {
  std::vector<Shape3> out;
  Shape3 cur = normalized(shape);
  for (int r = 0; r < 4; ++r) {
    if (std::find(out.begin(), out.end(), cur) == out.end()) out.push_back(cur);
    Shape3 next;
    for (const Cell3& c : cur) next.push_back({-c.y, c.x, c.z});
    cur = normalized(std::move(next));
  }
  return out;
}

inline std::vector<Placement> rotations(const Placement& shape) {
  std::vector<Placement> out;
  Placement cur = normalized(shape);
  for (int r = 0; r < 4; ++r) {
    if (std::find(out.begin(), out.end(), cur) == out.end()) out.push_back(cur);
    Placement next;
    for (const Cell& c : cur) next.push_back({-c.y, c.x});
    cur = normalized(std::move(next));
  }
  return out;
}

// A rigid object built from unit cubes ("letters"). The search stage works
// with its shadow on the table; the pose stage with the full cube set.
class ObjectTemplate {
 public:
  ObjectTemplate() = default;
  ObjectTemplate(std::string name, Shape3 cells) : name_(std::move(name)) {
    if (cells.empty()) throw ConfigError("object template '" + name_ + "' has no cells");
    cells_ = normalized(std::move(cells));
    if (std::adjacent_find(cells_.begin(), cells_.end()) != cells_.end()) {
      throw ConfigError("object template '" + name_ + "' repeats a cell");
    }
    if (!is_6_connected(cells_)) {
      throw ConfigError("object template '" + name_ + "' is not 6-connected");
    }
    std::set<Cell> shadow;
    for (const Cell3& c : cells_) shadow.insert({c.x, c.y});
    shadow_.assign(shadow.begin(), shadow.end());
    if (!is_4_connected(shadow_)) {
      throw ConfigError("object template '" + name_ + "' has a disconnected shadow");
    }
  }

  static ObjectTemplate flat(std::string name, const Placement& cells) {
    Shape3 s;
    for (const Cell& c : cells) s.push_back({c.x, c.y, 0});
    return ObjectTemplate(std::move(name), std::move(s));
  }

  const std::string& name() const noexcept { return name_; }
  const Shape3& cells() const noexcept { return cells_; }
  std::size_t size() const noexcept { return cells_.size(); }
  const Placement& shadow() const noexcept { return shadow_; }
  int height() const {
    int h = 0;
    for (const Cell3& c : cells_) h = std::max(h, c.z + 1);
    return h;
  }

 private:
  std::string name_;
  Shape3 cells_;
  Placement shadow_;
};

inline std::vector<std::string> builtin_template_names() {
  return {"cube", "domino", "L", "I", "T", "step"};
}

inline ObjectTemplate builtin_template(std::string_view name) {
  if (name == "cube") return ObjectTemplate::flat("cube", {{0, 0}});
  if (name == "domino") return ObjectTemplate::flat("domino", {{0, 0}, {1, 0}});
  // The 3-cell L.
  if (name == "L") return ObjectTemplate::flat("L", {{0, 0}, {0, 1}, {1, 1}});
  if (name == "I") return ObjectTemplate::flat("I", {{0, 0}, {0, 1}, {0, 2}});
  if (name == "T") return ObjectTemplate::flat("T", {{0, 0}, {1, 0}, {2, 0}, {1, 1}});
  // Three cubes: a domino with a second cube stacked on one end.
  if (name == "step") return ObjectTemplate("step", {{0, 0, 0}, {1, 0, 0}, {0, 0, 1}});
  throw ConfigError("unknown object template '" + std::string(name) + "'");
}

// Every distinct placement of `shape` (all quarter-turn rotations) fully
// inside a width x height map.
inline std::vector<Placement> enumerate_placements(const Placement& shape, int width, int height) {
  std::vector<Placement> out;
  for (const Placement& rot : rotations(shape)) {
    int span_x = 0, span_y = 0;
    for (const Cell& c : rot) {
      span_x = std::max(span_x, c.x);
      span_y = std::max(span_y, c.y);
    }
    for (int y = 0; y + span_y < height; ++y) {
      for (int x = 0; x + span_x < width; ++x) {
        Placement p;
        p.reserve(rot.size());
        for (const Cell& c : rot) p.push_back({c.x + x, c.y + y});
        out.push_back(std::move(p));
      }
    }
  }
  return out;
}

}  // namespace avs
