#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "avs/core/errors.hpp"
#include "avs/core/random.hpp"
#include "avs/world/grid_map.hpp"

namespace avs::search2d {

// Discretized camera image: a w x h grid centred on the agent. Cell (0,0) is
// the upper-left corner of the image. Never contains CANDIDATE.
struct ObservationGrid2D {
  int width = 0;
  int height = 0;
  std::vector<CellValue> cells;

  ObservationGrid2D() = default;
  ObservationGrid2D(int w, int h, CellValue fill = CellValue::Empty)
      : width(w), height(h), cells(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

  CellValue at(int i, int j) const { return cells[static_cast<std::size_t>(j * width + i)]; }
  void set(int i, int j, CellValue v) { cells[static_cast<std::size_t>(j * width + i)] = v; }
  std::size_t count(CellValue v) const {
    return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), v));
  }
  bool empty() const noexcept { return cells.empty(); }

  bool operator==(const ObservationGrid2D&) const = default;

  std::string to_string() const {
    std::string out;
    for (int j = 0; j < height; ++j) {
      for (int i = 0; i < width; ++i) out.push_back(to_char(at(i, j)));
      out.push_back('\n');
    }
    return out;
  }
};

// Map cell under window entry (i, j) for an agent at `pose`.
inline Cell window_cell(Cell pose, int w, int h, int i, int j) noexcept {
  return {pose.x - w / 2 + i, pose.y - h / 2 + j};
}

inline void require_odd_window(int w, int h) {
  if (w < 1 || h < 1 || w % 2 == 0 || h % 2 == 0) {
    throw ConfigError("observation window must have odd, positive dimensions");
  }
}

// The agent-centred w x h window clipped to the map.
inline std::vector<Cell> footprint(Cell agent, int w, int h, int map_width, int map_height) {
  require_odd_window(w, h);
  std::vector<Cell> out;
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      const Cell c = window_cell(agent, w, h, i, j);
      if (c.x >= 0 && c.y >= 0 && c.x < map_width && c.y < map_height) out.push_back(c);
    }
  }
  return out;
}

inline bool contains_cell(std::span<const Cell> cells, Cell c) noexcept {
  return std::find(cells.begin(), cells.end(), c) != cells.end();
}

// Noise-free rendering from a map plus object cells: OBJECT on object cells,
// OTHER_OBJECT/BLOCKED where the map says so, EMPTY otherwise, BLOCKED
// outside the map.
inline ObservationGrid2D render_observation(const GridMap2D& map, std::span<const Cell> object,
                                            Cell pose, int w, int h) {
  ObservationGrid2D obs(w, h);
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      const Cell c = window_cell(pose, w, h, i, j);
      CellValue v = CellValue::Empty;
      if (!map.contains(c)) {
        v = CellValue::Blocked;
      } else if (contains_cell(object, c)) {
        v = CellValue::Object;
      } else if (const CellValue m = map.at(c);
                 m == CellValue::OtherObject || m == CellValue::Blocked) {
        v = m;
      }
      obs.set(i, j, v);
    }
  }
  return obs;
}

// Overwrites every in-map window cell with the observed value.
inline GridMap2D apply_observation(GridMap2D map, const ObservationGrid2D& obs, Cell pose) {
  for (int j = 0; j < obs.height; ++j) {
    for (int i = 0; i < obs.width; ++i) {
      const Cell c = window_cell(pose, obs.width, obs.height, i, j);
      if (map.contains(c)) map.set(c, obs.at(i, j));
    }
  }
  return map;
}

// Perspective-distortion noise: each cell on the window's outer ring (never
// the centre) independently takes the pre-noise value of a uniformly chosen
// in-window 4-neighbour with probability p. Draw order, row-major over the
// ring cells: one unit draw, then one neighbour index if it fired.
inline ObservationGrid2D perturb_border(const ObservationGrid2D& obs, double p, Rng& rng) {
  ObservationGrid2D out = obs;
  if (p <= 0.0) return out;
  const int ci = obs.width / 2, cj = obs.height / 2;
  for (int j = 0; j < obs.height; ++j) {
    for (int i = 0; i < obs.width; ++i) {
      const bool ring = i == 0 || j == 0 || i == obs.width - 1 || j == obs.height - 1;
      if (!ring || (i == ci && j == cj)) continue;
      if (!bernoulli(rng, p)) continue;
      std::array<std::pair<int, int>, 4> nbrs{};
      std::size_t n = 0;
      for (auto [di, dj] : {std::pair{0, -1}, std::pair{1, 0}, std::pair{0, 1}, std::pair{-1, 0}}) {
        const int ni = i + di, nj = j + dj;
        if (ni >= 0 && nj >= 0 && ni < obs.width && nj < obs.height) nbrs[n++] = {ni, nj};
      }
      if (n == 0) continue;
      const auto [ni, nj] = nbrs[uniform_index(rng, n)];
      out.set(i, j, obs.at(ni, nj));
    }
  }
  return out;
}

// object_found iff the whole object is in view.
inline bool make_binary_observation(const ObservationGrid2D& obs, std::size_t object_size) {
  return object_size > 0 && obs.count(CellValue::Object) >= object_size;
}

}  // namespace avs::search2d
