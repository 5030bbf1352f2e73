#include "bi3d/depthops.hpp"

#include <cmath>

#include "bi3d/parallel.hpp"

namespace bi3d {

namespace {

void check_volume(const ConfidenceVolume& vol) {
  if (vol.slices.size() != static_cast<std::size_t>(vol.schedule.count()))
    throw Error("ConfidenceVolume: slice count does not match schedule");
  for (const auto& s : vol.slices)
    if (s.width != vol.width() || s.height != vol.height())
      throw Error("ConfidenceVolume: slice dimensions differ");
}

}  // namespace

ConfidenceVolume build_volume(const StereoPair& pair, const PlaneSchedule& schedule,
                              const ClassifierConfig& cfg, int smooth_radius) {
  if (smooth_radius < 0) throw Error("build_volume: smooth_radius must be >= 0");
  ConfidenceVolume vol;
  vol.schedule = schedule;
  vol.slices.resize(schedule.count());
  parallel_for(0, schedule.count(), [&](int i) {
    ConfidenceMap slice = classify_plane(pair, schedule.disparities[i], cfg);
    vol.slices[i] = smooth_radius > 0 ? smooth_confidence(slice, smooth_radius)
                                      : std::move(slice);
  });
  return vol;
}

ConfidenceVolume build_oracle_volume(const DisparityMap& gt, const PlaneSchedule& schedule) {
  ConfidenceVolume vol;
  vol.schedule = schedule;
  vol.slices.resize(schedule.count());
  parallel_for(0, schedule.count(), [&](int i) {
    vol.slices[i] = oracle_classify(gt, schedule.disparities[i]);
  });
  return vol;
}

DisparityMap auc_disparity(const ConfidenceVolume& vol, AucRule rule) {
  check_volume(vol);
  const int planes = vol.schedule.count();
  if (planes < 2) throw Error("auc_disparity: needs at least two planes");

  const int w = vol.width(), h = vol.height();
  DisparityMap out(w, h);
  const auto& d = vol.schedule.disparities;

  parallel_for(0, h, [&](int y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t px = static_cast<std::size_t>(y) * w + x;
      bool ok = true;
      for (int i = 0; i < planes; ++i)
        if (!vol.slices[i].valid[px]) {
          ok = false;
          break;
        }
      if (!ok) continue;

      // Fixed ascending accumulation keeps results schedule-independent.
      double area = 0.0;
      for (int i = 1; i < planes; ++i) {
        const double dx = d[i] - d[i - 1];
        const double c0 = vol.slices[i - 1].conf[px];
        const double c1 = vol.slices[i].conf[px];
        switch (rule) {
          case AucRule::Trapezoid: area += 0.5 * (c0 + c1) * dx; break;
          case AucRule::LeftRiemann: area += c0 * dx; break;
          case AucRule::RightRiemann: area += c1 * dx; break;
        }
      }
      out.values[px] = static_cast<float>(std::clamp(d.front() + area, d.front(), d.back()));
    }
  });
  return out;
}

QuantizedDepth quantized_disparity(const ConfidenceVolume& vol, double scene_max,
                                   bool isotonic) {
  check_volume(vol);
  const int planes = vol.schedule.count();
  if (!(std::isfinite(scene_max) && scene_max > vol.schedule.back()))
    throw Error("quantized_disparity: scene_max must be finite and beyond the last plane");

  const int w = vol.width(), h = vol.height();
  QuantizedDepth out;
  out.bins = LabelMap(w, h);
  out.centers = DisparityMap(w, h);
  out.edges.reserve(planes + 2);
  out.edges.push_back(0.0);
  out.edges.insert(out.edges.end(), vol.schedule.disparities.begin(),
                   vol.schedule.disparities.end());
  out.edges.push_back(scene_max);

  parallel_for(0, h, [&](int y) {
    std::vector<double> c(planes + 2);
    for (int x = 0; x < w; ++x) {
      const std::size_t px = static_cast<std::size_t>(y) * w + x;
      bool ok = true;
      c[0] = 1.0;  // everything is in front of the zero-disparity plane
      for (int i = 0; i < planes; ++i) {
        if (!vol.slices[i].valid[px]) {
          ok = false;
          break;
        }
        c[i + 1] = vol.slices[i].conf[px];
      }
      if (!ok) continue;
      c[planes + 1] = 0.0;  // nothing is in front of the plane at depth zero

      if (isotonic)
        for (int i = 1; i < planes + 2; ++i) c[i] = std::min(c[i], c[i - 1]);

      int best = 0;
      double best_p = -1.0;
      for (int k = 0; k <= planes; ++k) {
        const double p = std::max(0.0, c[k] - c[k + 1]);
        if (p > best_p) {  // strict: ties stay at the lower (farther) bin
          best_p = p;
          best = k;
        }
      }
      out.bins.labels[px] = static_cast<std::uint16_t>(best);
      out.centers.values[px] =
          static_cast<float>(0.5 * (out.edges[best] + out.edges[best + 1]));
    }
  });
  return out;
}

SelectiveDepth selective_disparity(const ConfidenceVolume& vol, AucRule rule) {
  check_volume(vol);
  const int planes = vol.schedule.count();
  if (planes < 2) throw Error("selective_disparity: needs at least two planes");

  const DisparityMap auc = auc_disparity(vol, rule);
  const int w = vol.width(), h = vol.height();
  SelectiveDepth out;
  out.disparity = DisparityMap(w, h);
  out.labels = LabelMap(w, h, kLabelBehind);

  const ConfidenceMap& farthest = vol.slices.front();
  const ConfidenceMap& nearest = vol.slices.back();
  for (std::size_t px = 0; px < auc.size(); ++px) {
    if (!disparity_valid(auc.values[px])) continue;  // stays BEHIND, invalid
    if (nearest.conf[px] > 0.5f) {
      out.labels.labels[px] = kLabelFront;
    } else if (farthest.conf[px] < 0.5f) {
      out.labels.labels[px] = kLabelBehind;
    } else {
      out.labels.labels[px] = kLabelInRange;
      out.disparity.values[px] = auc.values[px];
    }
  }
  return out;
}

DisparityMap full_disparity(const StereoPair& pair, const ClassifierConfig& cfg,
                            double d_max, int count) {
  if (!(d_max > 0.0)) throw Error("full_disparity: d_max must be > 0");
  return auc_disparity(build_volume(pair, uniform_schedule(0.0, d_max, count), cfg));
}

LabelMap bin_disparity(const DisparityMap& map, const std::vector<double>& edges) {
  if (edges.size() < 2) throw Error("bin_disparity: needs at least two edges");
  LabelMap out(map.width, map.height);
  const int last_bin = static_cast<int>(edges.size()) - 2;
  for (std::size_t px = 0; px < map.size(); ++px) {
    const float d = map.values[px];
    if (!disparity_valid(d)) continue;
    int k = 0;
    while (k < last_bin && d > edges[k + 1]) ++k;
    out.labels[px] = static_cast<std::uint16_t>(k);
  }
  return out;
}

}  // namespace bi3d
