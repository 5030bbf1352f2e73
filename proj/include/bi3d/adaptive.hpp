#pragma once

#include "bi3d/depthops.hpp"

namespace bi3d {

/// Selective depth over a near range plus a binary geo-fence plane farther
/// out; crossing the fence extends the range out to the fence.
struct AdaptiveConfig {
  double range_lo = 0.0;     // d_a: far edge of the base range
  double range_hi = 0.0;     // d_b: near edge (d_a < d_b)
  double fence = 0.0;        // d_f < d_a, farther than the range
  double trigger_on = 0.02;  // fence FRONT fraction that arms the extension
  double trigger_off = 0.005;
  int release_frames = 5;    // quiet frames before reverting to the base range
  int planes_per_range = 25;
  // Optional rectangular region of interest for the fence statistic
  // (zero size = whole frame).
  int roi_x = 0, roi_y = 0, roi_width = 0, roi_height = 0;

  void validate() const;
};

struct AdaptiveState {
  bool extended = false;
  int quiet_frames = 0;
};

struct AdaptiveStep {
  SelectiveDepth depth;
  LabelMap fence_mask;
  double fence_fraction = 0.0;  // valid-pixel fraction labeled FRONT of the fence
  AdaptiveState state;
};

/// One frame of the adaptive strategy: binary depth at the fence plane, state
/// update (extension takes effect in the same step whose fraction crosses
/// trigger_on; reversion in the step completing release_frames quiet frames),
/// then selective depth over the active range.
AdaptiveStep adaptive_step(const AdaptiveState& state, const StereoPair& pair,
                           const AdaptiveConfig& cfg_a, const ClassifierConfig& cfg_c,
                           int smooth_radius = 0);

/// Ground-truth-driven variant: fence and volume come from oracle_classify.
AdaptiveStep adaptive_step_oracle(const AdaptiveState& state, const DisparityMap& gt,
                                  const AdaptiveConfig& cfg_a);

}  // namespace bi3d
