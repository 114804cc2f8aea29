#pragma once

#include "avs/core/errors.hpp"

namespace avs {

// Reward constants shared by both stages. Penalties are <= 0, bonuses >= 0.
struct RewardConfig {
  double p_action = -1.0;      // every step
  double p_reobserve = -2.0;   // step that leaves the map unchanged
  double r_terminal = 100.0;   // entering a terminal state
  double r_exploration = 1.0;  // per CANDIDATE cell resolved (2D)
  double r_discovery = 10.0;   // per cell newly marked OBJECT (2D)
  double r_refinement = 5.0;   // per OBJECT cell resolved EMPTY (3D)

  void validate() const {
    if (p_action > 0.0 || p_reobserve > 0.0) throw ConfigError("penalties must be <= 0");
    if (r_terminal < 0.0 || r_exploration < 0.0 || r_discovery < 0.0 || r_refinement < 0.0) {
      throw ConfigError("bonuses must be >= 0");
    }
  }
};

}  // namespace avs
