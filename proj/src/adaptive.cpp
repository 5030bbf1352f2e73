#include "bi3d/adaptive.hpp"

#include <cmath>

namespace bi3d {

namespace {

double front_fraction(const LabelMap& mask, const ConfidenceMap& conf,
                      const AdaptiveConfig& cfg) {
  int x0 = 0, y0 = 0, x1 = mask.width, y1 = mask.height;
  if (cfg.roi_width > 0 && cfg.roi_height > 0) {
    x0 = std::clamp(cfg.roi_x, 0, mask.width);
    y0 = std::clamp(cfg.roi_y, 0, mask.height);
    x1 = std::clamp(cfg.roi_x + cfg.roi_width, 0, mask.width);
    y1 = std::clamp(cfg.roi_y + cfg.roi_height, 0, mask.height);
  }
  long long front = 0, valid = 0;
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      const std::size_t px = static_cast<std::size_t>(y) * mask.width + x;
      if (!conf.valid[px]) continue;
      ++valid;
      if (mask.labels[px] == kLabelFront) ++front;
    }
  }
  return valid > 0 ? static_cast<double>(front) / static_cast<double>(valid) : 0.0;
}

AdaptiveState advance(const AdaptiveState& prev, double fraction, const AdaptiveConfig& cfg) {
  AdaptiveState next = prev;
  if (!next.extended && fraction >= cfg.trigger_on) {
    next.extended = true;
    next.quiet_frames = 0;
    return next;
  }
  if (next.extended) {
    if (fraction < cfg.trigger_off) {
      if (++next.quiet_frames >= cfg.release_frames) {
        next.extended = false;
        next.quiet_frames = 0;
      }
    } else {
      next.quiet_frames = 0;
    }
  }
  return next;
}

template <typename FenceFn, typename VolumeFn>
AdaptiveStep run_step(const AdaptiveState& state, const AdaptiveConfig& cfg,
                      FenceFn&& fence_conf, VolumeFn&& volume) {
  cfg.validate();
  AdaptiveStep out;
  const ConfidenceMap fence = fence_conf();
  out.fence_mask = binarize(fence);
  out.fence_fraction = front_fraction(out.fence_mask, fence, cfg);
  out.state = advance(state, out.fence_fraction, cfg);

  const double lo = out.state.extended ? cfg.fence : cfg.range_lo;
  out.depth = selective_disparity(volume(uniform_schedule(lo, cfg.range_hi, cfg.planes_per_range)));
  return out;
}

}  // namespace

void AdaptiveConfig::validate() const {
  if (!(range_lo < range_hi)) throw Error("AdaptiveConfig: needs range_lo < range_hi");
  if (!(fence < range_lo)) throw Error("AdaptiveConfig: fence must be farther than the range");
  if (fence < 0.0) throw Error("AdaptiveConfig: fence must be >= 0");
  if (!(trigger_on > 0.0 && trigger_on < 1.0))
    throw Error("AdaptiveConfig: trigger_on must be in (0,1)");
  if (!(trigger_off < trigger_on)) throw Error("AdaptiveConfig: trigger_off must be < trigger_on");
  if (release_frames < 1) throw Error("AdaptiveConfig: release_frames must be >= 1");
  if (planes_per_range < 2) throw Error("AdaptiveConfig: planes_per_range must be >= 2");
}

AdaptiveStep adaptive_step(const AdaptiveState& state, const StereoPair& pair,
                           const AdaptiveConfig& cfg_a, const ClassifierConfig& cfg_c,
                           int smooth_radius) {
  return run_step(
      state, cfg_a, [&] { return classify_plane(pair, cfg_a.fence, cfg_c); },
      [&](const PlaneSchedule& s) { return build_volume(pair, s, cfg_c, smooth_radius); });
}

AdaptiveStep adaptive_step_oracle(const AdaptiveState& state, const DisparityMap& gt,
                                  const AdaptiveConfig& cfg_a) {
  return run_step(
      state, cfg_a, [&] { return oracle_classify(gt, cfg_a.fence); },
      [&](const PlaneSchedule& s) { return build_oracle_volume(gt, s); });
}

}  // namespace bi3d
