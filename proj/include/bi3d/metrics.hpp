#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bi3d/image.hpp"

namespace bi3d {

/// Mean absolute disparity error over pixels valid in both maps and selected
/// by the mask (nonzero label = included; null mask = all pixels).
/// Throws when no pixel qualifies.
double epe(const DisparityMap& pred, const DisparityMap& gt, const LabelMap* mask = nullptr);

/// Fraction of selected pixels with |pred - gt| > threshold (default 3 px).
double bad_pixel_rate(const DisparityMap& pred, const DisparityMap& gt,
                      const LabelMap* mask = nullptr, double threshold = 3.0);

struct MiouResult {
  double miou = 0.0;
  std::vector<double> per_class;  // NaN for classes absent from both maps
};

/// Intersection-over-union per class, averaged over the classes present in
/// either map (absent classes are excluded, not scored). The optional mask
/// selects pixels the same way as epe. Throws when no class is present.
MiouResult miou(const LabelMap& pred, const LabelMap& gt, int classes,
                const LabelMap* mask = nullptr);

/// One evaluation row: disparity metrics plus (optionally) quantized-label mIOU.
struct MetricReport {
  double epe = 0.0;
  double bad_pixel_rate = 0.0;
  std::optional<MiouResult> miou;
  std::size_t valid_pixels = 0;

  static std::string csv_header();
  std::string csv_row() const;
  std::string to_text() const;
};

/// Multi-image mIOU aggregation. Records both protocols: the mean of
/// per-image mIOU values and the mIOU of globally pooled intersections and
/// unions.
class MiouAccumulator {
 public:
  explicit MiouAccumulator(int classes);
  void add(const LabelMap& pred, const LabelMap& gt, const LabelMap* mask = nullptr);

  double per_image_mean() const;
  double global() const;
  int images() const { return images_; }

 private:
  int classes_;
  int images_ = 0;
  double miou_sum_ = 0.0;
  std::vector<long long> inter_, uni_;
};

}  // namespace bi3d
