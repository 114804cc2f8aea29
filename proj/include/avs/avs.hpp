#pragma once

#include "avs/core/action.hpp"
#include "avs/core/errors.hpp"
#include "avs/core/pomdp.hpp"
#include "avs/core/random.hpp"
#include "avs/harness/config.hpp"
#include "avs/harness/episode.hpp"
#include "avs/harness/experiment.hpp"
#include "avs/pomcp/belief.hpp"
#include "avs/pomcp/solver.hpp"
#include "avs/pomcp/tree.hpp"
#include "avs/pose3d/environment.hpp"
#include "avs/pose3d/model.hpp"
#include "avs/pose3d/pointcloud.hpp"
#include "avs/search2d/environment.hpp"
#include "avs/search2d/model.hpp"
#include "avs/search2d/observation.hpp"
#include "avs/search2d/reward.hpp"
#include "avs/world/grid_map.hpp"
#include "avs/world/object_template.hpp"
