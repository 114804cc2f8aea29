#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "avs/core/action.hpp"
#include "avs/core/errors.hpp"

namespace avs {

// What the agent knows about one cell. CANDIDATE means "not yet observed".
enum class CellValue : std::uint8_t { Empty, Candidate, Object, OtherObject, Blocked };

inline constexpr char to_char(CellValue v) noexcept {
  switch (v) {
    case CellValue::Empty: return '.';
    case CellValue::Candidate: return '?';
    case CellValue::Object: return 'O';
    case CellValue::OtherObject: return 'X';
    case CellValue::Blocked: return '#';
  }
  return '!';
}

struct Cell {
  int x = 0;
  int y = 0;
  auto operator<=>(const Cell&) const = default;
};

inline constexpr Cell moved(Cell c, Action a) noexcept {
  const Offset o = offset(a);
  return {c.x + o.dx, c.y + o.dy};
}

struct Cell3 {
  int x = 0;
  int y = 0;
  int z = 0;
  auto operator<=>(const Cell3&) const = default;
};

// M in V^{x*y}, row-major.
class GridMap2D {
 public:
  GridMap2D() = default;
  GridMap2D(int width, int height, CellValue fill = CellValue::Candidate)
      : width_(width), height_(height) {
    if (width < 1 || height < 1) throw ConfigError("map dimensions must be >= 1");
    cells_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t area() const noexcept { return cells_.size(); }

  bool contains(Cell c) const noexcept {
    return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_;
  }
  std::size_t index(Cell c) const noexcept {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.x);
  }
  CellValue at(Cell c) const { return cells_[index(c)]; }
  void set(Cell c, CellValue v) { cells_[index(c)] = v; }

  std::size_t count(CellValue v) const {
    return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), v));
  }
  std::span<const CellValue> cells() const noexcept { return cells_; }

  bool operator==(const GridMap2D&) const = default;

  std::string to_string() const {
    std::string out;
    out.reserve(cells_.size() + static_cast<std::size_t>(height_));
    for (int y = 0; y < height_; ++y) {
      for (int x = 0; x < width_; ++x) out.push_back(to_char(at({x, y})));
      out.push_back('\n');
    }
    return out;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<CellValue> cells_;
};

// M in V^{x*y*z}; level 0 is the table plane.
class GridMap3D {
 public:
  GridMap3D() = default;
  GridMap3D(int width, int height, int depth, CellValue fill = CellValue::Candidate)
      : width_(width), height_(height), depth_(depth) {
    if (width < 1 || height < 1 || depth < 1) throw ConfigError("map dimensions must be >= 1");
    cells_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) *
                      static_cast<std::size_t>(depth),
                  fill);
  }

  // Level 0 copied from `base`, every higher level CANDIDATE.
  static GridMap3D lifted(const GridMap2D& base, int depth) {
    GridMap3D m(base.width(), base.height(), depth, CellValue::Candidate);
    for (int y = 0; y < base.height(); ++y) {
      for (int x = 0; x < base.width(); ++x) m.set({x, y, 0}, base.at({x, y}));
    }
    return m;
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int depth() const noexcept { return depth_; }

  bool contains(Cell3 c) const noexcept {
    return c.x >= 0 && c.y >= 0 && c.z >= 0 && c.x < width_ && c.y < height_ && c.z < depth_;
  }
  bool contains_column(Cell c) const noexcept {
    return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_;
  }
  std::size_t index(Cell3 c) const noexcept {
    return (static_cast<std::size_t>(c.z) * static_cast<std::size_t>(height_) +
            static_cast<std::size_t>(c.y)) *
               static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.x);
  }
  CellValue at(Cell3 c) const { return cells_[index(c)]; }
  void set(Cell3 c, CellValue v) { cells_[index(c)] = v; }

  GridMap2D level(int z) const {
    GridMap2D m(width_, height_);
    for (int y = 0; y < height_; ++y) {
      for (int x = 0; x < width_; ++x) m.set({x, y}, at({x, y, z}));
    }
    return m;
  }

  std::size_t count(CellValue v) const {
    return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), v));
  }
  std::span<const CellValue> cells() const noexcept { return cells_; }

  bool operator==(const GridMap3D&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int depth_ = 0;
  std::vector<CellValue> cells_;
};

}  // namespace avs
