#pragma once

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "avs/core/errors.hpp"
#include "avs/core/random.hpp"
#include "avs/pose3d/model.hpp"
#include "avs/pose3d/pointcloud.hpp"
#include "avs/search2d/environment.hpp"
#include "avs/world/grid_map.hpp"
#include "avs/world/object_template.hpp"

namespace avs::pose3d {

// Both stages of one episode share the scene: the 2D truth holds the
// object's shadow, the 3D truth the full cube set.
struct Scene3D {
  search2d::Scene2D scene2d;
  GridMap3D truth;
  Shape3 object;
};

inline Placement shadow_of(const Shape3& shape) {
  std::set<Cell> cols;
  for (const Cell3& c : shape) cols.insert({c.x, c.y});
  return {cols.begin(), cols.end()};
}

// 3D truth over a 2D scene: BLOCKED columns are BLOCKED at every level,
// OTHER_OBJECT stays on the table, the object cells become OBJECT.
inline GridMap3D build_truth_3d(const GridMap2D& truth2d, const Shape3& object, int depth) {
  GridMap3D m(truth2d.width(), truth2d.height(), depth, CellValue::Empty);
  for (int y = 0; y < truth2d.height(); ++y) {
    for (int x = 0; x < truth2d.width(); ++x) {
      const CellValue v = truth2d.at({x, y});
      if (v == CellValue::Blocked) {
        for (int z = 0; z < depth; ++z) m.set({x, y, z}, CellValue::Blocked);
      } else if (v == CellValue::OtherObject) {
        m.set({x, y, 0}, CellValue::OtherObject);
      }
    }
  }
  for (const Cell3& c : object) {
    if (!m.contains(c)) throw ConfigError("3D object does not fit in the map");
    m.set(c, CellValue::Object);
  }
  return m;
}

// Open floor; object pose uniform over rotations x translations of the
// template, then agent uniform over free cells. Draw order: pose index,
// agent cell index.
inline Scene3D random_scene_3d(int width, int height, int depth, const ObjectTemplate& tmpl, Rng& rng) {
  if (tmpl.height() > depth) throw ConfigError("object is taller than the 3D map");
  std::vector<Shape3> poses;
  for (const Shape3& rot : rotations(tmpl.cells())) {
    int sx = 0, sy = 0;
    for (const Cell3& c : rot) {
      sx = std::max(sx, c.x);
      sy = std::max(sy, c.y);
    }
    for (int y = 0; y + sy < height; ++y) {
      for (int x = 0; x + sx < width; ++x) {
        Shape3 p;
        for (const Cell3& c : rot) p.push_back({c.x + x, c.y + y, c.z});
        poses.push_back(std::move(p));
      }
    }
  }
  if (poses.empty()) throw ConfigError("object does not fit on the map");
  Scene3D s;
  s.object = poses[uniform_index(rng, poses.size())];
  s.scene2d.truth = GridMap2D(width, height, CellValue::Empty);
  s.scene2d.object = shadow_of(s.object);
  for (const Cell& c : s.scene2d.object) s.scene2d.truth.set(c, CellValue::Object);
  s.scene2d.agent_start = search2d::random_free_cell(s.scene2d.truth, rng);
  s.truth = build_truth_3d(s.scene2d.truth, s.object, depth);
  return s;
}

struct EnvParams3D {
  int footprint_w = 3;
  int footprint_h = 3;
  PointCloudParams cloud;
};

// The real 3D world. Single writer.
class GroundTruthEnv3D {
 public:
  GroundTruthEnv3D(GridMap3D truth, Shape3 object, Cell agent, EnvParams3D params)
      : truth_(std::move(truth)), object_(std::move(object)), agent_(agent), params_(params) {
    search2d::require_odd_window(params_.footprint_w, params_.footprint_h);
    params_.cloud.validate();
    std::sort(object_.begin(), object_.end());
    if (!is_6_connected(object_)) throw ConfigError("true 3D object must be 6-connected");
    if (!truth_.contains_column(agent_) || truth_.at({agent_.x, agent_.y, 0}) == CellValue::Blocked) {
      throw ConfigError("agent start is off the map or blocked");
    }
  }

  const GridMap3D& truth() const noexcept { return truth_; }
  const Shape3& object() const noexcept { return object_; }
  const EnvParams3D& params() const noexcept { return params_; }
  Cell agent() const noexcept { return agent_; }
  int steps() const noexcept { return steps_; }

  PointCloud pointcloud(Rng& rng) const {
    return render_pointcloud(truth_, object_, agent_, params_.footprint_w, params_.footprint_h, params_.cloud, rng);
  }

  ObservationGrid3D observe(Rng& rng) const {
    return observe_window(pointcloud(rng), agent_, params_.footprint_w, params_.footprint_h, truth_.depth());
  }

  ObservationGrid3D step(Action a, Rng& rng) {
    const Cell next = moved(agent_, a);
    if (!truth_.contains_column(next) || truth_.at({next.x, next.y, 0}) == CellValue::Blocked) {
      throw LegalityError("real move leaves the map or hits a blocked cell");
    }
    agent_ = next;
    ++steps_;
    return observe(rng);
  }

 private:
  GridMap3D truth_;
  Shape3 object_;
  Cell agent_;
  EnvParams3D params_;
  int steps_ = 0;
};

}  // namespace avs::pose3d
