#pragma once

#include <filesystem>

#include "bi3d/image.hpp"
#include "bi3d/matchcost.hpp"

namespace bi3d {

/// Per-pixel probability that the scene point lies in front of a plane.
/// 1 means confidently in front (nearer), 0 confidently behind.
struct ConfidenceMap {
  int width = 0;
  int height = 0;
  std::vector<float> conf;
  std::vector<std::uint8_t> valid;

  ConfidenceMap() = default;
  ConfidenceMap(int w, int h)
      : width(w), height(h),
        conf(static_cast<std::size_t>(w) * h, 0.5f),
        valid(static_cast<std::size_t>(w) * h, 0) {}

  std::size_t size() const { return conf.size(); }
};

/// Classifies every pixel of the pair against the plane at disparity d_i.
///
/// The right image is warped by the plane; matching costs between the left
/// descriptor at (x,y) and the warped descriptor at (x+delta,y) are computed
/// for delta in -K..K, converted to softmax weights exp(-cost/tau), and the
/// confidence is the weight mass at leftward offsets plus half the mass at
/// zero. A point in front of the plane leaves a leftward residual, so mass at
/// delta < 0 votes "in front". Pixels with no usable offset are invalid.
ConfidenceMap classify_plane(const StereoPair& pair, double d_i,
                             const ClassifierConfig& cfg);

/// Ideal-step reference classifier: confidence 1 where d_i < gt, else 0.
/// Invalid ground-truth pixels yield invalid confidence.
ConfidenceMap oracle_classify(const DisparityMap& gt, double d_i);

/// Thresholds confidence at 0.5; exact 0.5 ties break to FRONT. Invalid
/// pixels are labeled BEHIND (validity stays with the source confidence map).
LabelMap binarize(const ConfidenceMap& c);

/// Box average over the valid pixels of the window; radius 0 is the identity.
/// Invalid pixels stay invalid and contribute nothing.
ConfidenceMap smooth_confidence(const ConfidenceMap& c, int radius);

/// Key = value text config (keys: cost, desc_radius, agg_radius,
/// search_extent, temperature; '#' comments). A cost key resets the
/// temperature default for that cost unless the file sets one explicitly.
ClassifierConfig parse_classifier_config(const std::filesystem::path& path);
void apply_config_entry(ClassifierConfig& cfg, const std::string& key,
                        const std::string& value, bool* temperature_set = nullptr);

}  // namespace bi3d
