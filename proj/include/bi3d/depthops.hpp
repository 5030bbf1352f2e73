#pragma once

#include "bi3d/classifier.hpp"
#include "bi3d/geometry.hpp"

namespace bi3d {

/// Per-plane confidence maps stacked in schedule order.
struct ConfidenceVolume {
  PlaneSchedule schedule;
  std::vector<ConfidenceMap> slices;

  int width() const { return slices.empty() ? 0 : slices.front().width; }
  int height() const { return slices.empty() ? 0 : slices.front().height; }
};

/// One classifier pass per plane, optionally box-smoothed. Slices are
/// independent, so planes may be evaluated concurrently; the result does not
/// depend on evaluation order.
ConfidenceVolume build_volume(const StereoPair& pair, const PlaneSchedule& schedule,
                              const ClassifierConfig& cfg, int smooth_radius = 0);

/// Ideal-step volume from ground truth (one oracle_classify per plane).
ConfidenceVolume build_oracle_volume(const DisparityMap& gt, const PlaneSchedule& schedule);

enum class AucRule { Trapezoid, LeftRiemann, RightRiemann };

/// Area-under-the-curve regression: the confidence profile over the plane
/// axis is integrated and offset by the first plane,
///   d(x,y) = d_0 + integral of C(x,y,.) over [d_0, d_N],
/// trapezoidal by default. Pixels with any invalid slice value are invalid.
/// Needs at least two planes.
DisparityMap auc_disparity(const ConfidenceVolume& vol, AucRule rule = AucRule::Trapezoid);

/// N planes split (0, scene_max] into N+1 bins delimited by the plane
/// disparities, with implicit confidence 1 at disparity 0 and 0 at infinity.
struct QuantizedDepth {
  LabelMap bins;         // bin indices 0..N (0 also where invalid; see centers)
  DisparityMap centers;  // bin-center disparity, invalid where confidence was
  std::vector<double> edges;  // 0, plane disparities..., scene_max (last bin open)
};

/// CDF-difference quantization: bin probability p_k = C(edge_k) - C(edge_k+1)
/// clamped at 0, bin = argmax (lowest index on ties), center = midpoint of the
/// bin's edges with the open last bin closed at scene_max for its center.
/// With isotonic set, confidences are first made non-increasing along the
/// plane axis by a running minimum.
QuantizedDepth quantized_disparity(const ConfidenceVolume& vol, double scene_max,
                                   bool isotonic = false);

/// Continuous depth restricted to the schedule range, with out-of-range
/// pixels labeled instead of estimated.
struct SelectiveDepth {
  DisparityMap disparity;  // valid only where labels == IN_RANGE
  LabelMap labels;         // FRONT / BEHIND / IN_RANGE
};

/// FRONT when the confidence at the nearest plane stays above 0.5, BEHIND
/// when the farthest plane's confidence is below 0.5, IN_RANGE otherwise with
/// the AUC estimate. Pixels with invalid confidence are labeled BEHIND with
/// invalid disparity.
SelectiveDepth selective_disparity(const ConfidenceVolume& vol,
                                   AucRule rule = AucRule::Trapezoid);

/// Whole-range continuous depth over [0, d_max]: exactly
/// auc_disparity(build_volume(pair, uniform_schedule(0, d_max, count), cfg)).
DisparityMap full_disparity(const StereoPair& pair, const ClassifierConfig& cfg,
                            double d_max, int count);

/// Direct binning of a disparity map by quantization edges (bin k holds
/// disparities in (edge_k, edge_k+1], with 0 falling into bin 0 and values
/// beyond the last finite edge into the last bin). Invalid pixels keep bin 0;
/// check validity against the source map.
LabelMap bin_disparity(const DisparityMap& map, const std::vector<double>& edges);

}  // namespace bi3d
