#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "avs/core/errors.hpp"
#include "avs/world/grid_map.hpp"

namespace avs::pose3d {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  bool operator==(const Vec3&) const = default;
};

enum class PointSource : std::uint8_t { Object, OtherObject };

struct CloudPoint {
  Vec3 position;
  PointSource source = PointSource::Object;
};

struct PointCloud {
  std::vector<CloudPoint> points;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
};

// Plain-text XYZ: one point per line, three decimal floats. Source tags are
// not serialized; loaded points are tagged Object.
inline void write_xyz(std::ostream& out, const PointCloud& pc) {
  char buf[96];
  for (const CloudPoint& p : pc.points) {
    std::snprintf(buf, sizeof buf, "%.6f %.6f %.6f\n", p.position.x, p.position.y, p.position.z);
    out << buf;
  }
}

inline PointCloud read_xyz(std::istream& in) {
  PointCloud pc;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    Vec3 v;
    if (!(ls >> v.x >> v.y >> v.z) || !std::isfinite(v.x) || !std::isfinite(v.y) ||
        !std::isfinite(v.z)) {
      throw ConfigError("xyz line " + std::to_string(lineno) + ": expected three finite numbers");
    }
    pc.points.push_back({v, PointSource::Object});
  }
  return pc;
}

// Axis-aligned cubic voxel.
struct CellBounds {
  Vec3 min;
  double size = 1.0;
};

// Quadrant of the cell's x-y footprint, split at the cell centre: bit 0 is
// x >= centre, bit 1 is y >= centre.
inline int quadrant(const Vec3& p, const CellBounds& b) {
  const double cx = b.min.x + 0.5 * b.size, cy = b.min.y + 0.5 * b.size;
  return (p.x >= cx ? 1 : 0) | (p.y >= cy ? 2 : 0);
}

// A core cell has points in all four x-y quadrants.
inline bool classify_core(std::span<const Vec3> points_in_cell, const CellBounds& bounds) {
  unsigned mask = 0;
  for (const Vec3& p : points_in_cell) mask |= 1u << quadrant(p, bounds);
  return mask == 0b1111u;
}

struct Voxel {
  CellValue value = CellValue::Empty;
  bool core = false;
  // False for cells hidden below a core cell from a top-down sensor.
  bool visible = true;
  bool operator==(const Voxel&) const = default;
};

struct Dims3 {
  int w = 0;
  int h = 0;
  int d = 0;
  bool operator==(const Dims3&) const = default;
};

// o_t in V^{w*h*d} plus per-cell core and visibility flags.
class ObservationGrid3D {
 public:
  ObservationGrid3D() = default;
  explicit ObservationGrid3D(Dims3 dims)
      : dims_(dims),
        voxels_(static_cast<std::size_t>(dims.w) * static_cast<std::size_t>(dims.h) *
                static_cast<std::size_t>(dims.d)) {}

  Dims3 dims() const noexcept { return dims_; }
  std::size_t size() const noexcept { return voxels_.size(); }
  std::size_t index(int i, int j, int k) const noexcept {
    return (static_cast<std::size_t>(k) * static_cast<std::size_t>(dims_.h) +
            static_cast<std::size_t>(j)) *
               static_cast<std::size_t>(dims_.w) +
           static_cast<std::size_t>(i);
  }
  const Voxel& at(int i, int j, int k) const { return voxels_[index(i, j, k)]; }
  Voxel& at(int i, int j, int k) { return voxels_[index(i, j, k)]; }
  std::span<const Voxel> voxels() const noexcept { return voxels_; }

  std::size_t core_count() const {
    std::size_t n = 0;
    for (const Voxel& v : voxels_) n += v.core ? 1 : 0;
    return n;
  }

  bool operator==(const ObservationGrid3D&) const = default;

 private:
  Dims3 dims_;
  std::vector<Voxel> voxels_;
};

// Level index of a height: cells are half-open (k, k+1] in z so that points
// lying on a top face belong to the voxel beneath them.
inline int level_of(double t) { return static_cast<int>(std::ceil(t - 1e-9)) - 1; }

// Voxelizes a top-down point cloud into a w x h x d grid anchored at
// `origin`. Occupied cells take OBJECT (any object-tagged point) or
// OTHER_OBJECT, the rest EMPTY; core flags come from classify_core; cells
// below the highest core cell of their column are not visible.
inline ObservationGrid3D voxelize(const PointCloud& pc, Vec3 origin, double cell_size, Dims3 dims) {
  if (!(cell_size > 0.0)) throw ConfigError("cell_size must be > 0");
  ObservationGrid3D grid(dims);
  const std::size_t n = grid.size();
  std::vector<unsigned> quadrants(n, 0);
  std::vector<std::uint8_t> occupied(n, 0), has_object(n, 0);

  for (const CloudPoint& p : pc.points) {
    const double tx = (p.position.x - origin.x) / cell_size;
    const double ty = (p.position.y - origin.y) / cell_size;
    const double tz = (p.position.z - origin.z) / cell_size;
    const int i = static_cast<int>(std::floor(tx));
    const int j = static_cast<int>(std::floor(ty));
    const int k = level_of(tz);
    if (i < 0 || j < 0 || k < 0 || i >= dims.w || j >= dims.h || k >= dims.d) continue;
    const std::size_t idx = grid.index(i, j, k);
    const CellBounds b{{origin.x + i * cell_size, origin.y + j * cell_size, origin.z + k * cell_size},
                       cell_size};
    quadrants[idx] |= 1u << quadrant(p.position, b);
    occupied[idx] = 1;
    if (p.source == PointSource::Object) has_object[idx] = 1;
  }

  for (int j = 0; j < dims.h; ++j) {
    for (int i = 0; i < dims.w; ++i) {
      int top_core = -1;
      for (int k = 0; k < dims.d; ++k) {
        const std::size_t idx = grid.index(i, j, k);
        Voxel& v = grid.at(i, j, k);
        if (occupied[idx]) v.value = has_object[idx] ? CellValue::Object : CellValue::OtherObject;
        v.core = quadrants[idx] == 0b1111u;
        if (v.core) top_core = k;
      }
      for (int k = 0; k < top_core; ++k) grid.at(i, j, k).visible = false;
    }
  }
  return grid;
}

// Observations are softly equal when they agree in value on every cell that
// is core in either of them. Reflexive and symmetric, not transitive.
inline bool soft_equal(const ObservationGrid3D& a, const ObservationGrid3D& b) {
  if (!(a.dims() == b.dims())) throw ComparisonError("soft_equal: observation dimensions differ");
  const auto va = a.voxels();
  const auto vb = b.voxels();
  for (std::size_t i = 0; i < va.size(); ++i) {
    if ((va[i].core || vb[i].core) && va[i].value != vb[i].value) return false;
  }
  return true;
}

}  // namespace avs::pose3d
