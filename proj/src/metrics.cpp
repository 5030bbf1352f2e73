#include "bi3d/metrics.hpp"

#include <cmath>
#include <sstream>

namespace bi3d {

namespace {

void check_dims(int pw, int ph, int gw, int gh, const char* op) {
  if (pw != gw || ph != gh) throw Error(std::string(op) + ": dimensions differ");
}

bool selected(const LabelMap* mask, std::size_t px) {
  return !mask || mask->labels[px] != 0;
}

struct ClassCounts {
  std::vector<long long> inter, uni;
};

ClassCounts class_counts(const LabelMap& pred, const LabelMap& gt, int classes,
                         const LabelMap* mask) {
  check_dims(pred.width, pred.height, gt.width, gt.height, "miou");
  if (mask) check_dims(mask->width, mask->height, gt.width, gt.height, "miou mask");
  ClassCounts c;
  c.inter.assign(classes, 0);
  c.uni.assign(classes, 0);
  for (std::size_t px = 0; px < gt.size(); ++px) {
    if (!selected(mask, px)) continue;
    const int p = pred.labels[px];
    const int g = gt.labels[px];
    if (p >= classes || g >= classes) throw Error("miou: label outside declared classes");
    if (p == g) {
      ++c.inter[p];
      ++c.uni[p];
    } else {
      ++c.uni[p];
      ++c.uni[g];
    }
  }
  return c;
}

double mean_present(const std::vector<long long>& inter, const std::vector<long long>& uni) {
  double sum = 0.0;
  int present = 0;
  for (std::size_t k = 0; k < uni.size(); ++k) {
    if (uni[k] == 0) continue;  // absent from both maps: excluded, not scored
    sum += static_cast<double>(inter[k]) / static_cast<double>(uni[k]);
    ++present;
  }
  if (present == 0) throw Error("miou: no class present");
  return sum / present;
}

}  // namespace

double epe(const DisparityMap& pred, const DisparityMap& gt, const LabelMap* mask) {
  check_dims(pred.width, pred.height, gt.width, gt.height, "epe");
  if (mask) check_dims(mask->width, mask->height, gt.width, gt.height, "epe mask");
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t px = 0; px < gt.size(); ++px) {
    if (!selected(mask, px)) continue;
    if (!disparity_valid(pred.values[px]) || !disparity_valid(gt.values[px])) continue;
    sum += std::abs(static_cast<double>(pred.values[px]) - gt.values[px]);
    ++count;
  }
  if (count == 0) throw Error("epe: no valid pixel selected");
  return sum / static_cast<double>(count);
}

double bad_pixel_rate(const DisparityMap& pred, const DisparityMap& gt,
                      const LabelMap* mask, double threshold) {
  if (!(threshold > 0.0)) throw Error("bad_pixel_rate: threshold must be > 0");
  check_dims(pred.width, pred.height, gt.width, gt.height, "bad_pixel_rate");
  if (mask) check_dims(mask->width, mask->height, gt.width, gt.height, "bad_pixel_rate mask");
  std::size_t bad = 0, count = 0;
  for (std::size_t px = 0; px < gt.size(); ++px) {
    if (!selected(mask, px)) continue;
    if (!disparity_valid(pred.values[px]) || !disparity_valid(gt.values[px])) continue;
    if (std::abs(static_cast<double>(pred.values[px]) - gt.values[px]) > threshold) ++bad;
    ++count;
  }
  if (count == 0) throw Error("bad_pixel_rate: no valid pixel selected");
  return static_cast<double>(bad) / static_cast<double>(count);
}

MiouResult miou(const LabelMap& pred, const LabelMap& gt, int classes, const LabelMap* mask) {
  if (classes < 1) throw Error("miou: classes must be >= 1");
  const ClassCounts c = class_counts(pred, gt, classes, mask);
  MiouResult r;
  r.per_class.assign(classes, std::numeric_limits<double>::quiet_NaN());
  for (int k = 0; k < classes; ++k)
    if (c.uni[k] > 0)
      r.per_class[k] = static_cast<double>(c.inter[k]) / static_cast<double>(c.uni[k]);
  r.miou = mean_present(c.inter, c.uni);
  return r;
}

MiouAccumulator::MiouAccumulator(int classes) : classes_(classes) {
  if (classes < 1) throw Error("MiouAccumulator: classes must be >= 1");
  inter_.assign(classes, 0);
  uni_.assign(classes, 0);
}

void MiouAccumulator::add(const LabelMap& pred, const LabelMap& gt, const LabelMap* mask) {
  const ClassCounts c = class_counts(pred, gt, classes_, mask);
  miou_sum_ += mean_present(c.inter, c.uni);
  ++images_;
  for (int k = 0; k < classes_; ++k) {
    inter_[k] += c.inter[k];
    uni_[k] += c.uni[k];
  }
}

double MiouAccumulator::per_image_mean() const {
  if (images_ == 0) throw Error("MiouAccumulator: no images");
  return miou_sum_ / images_;
}

double MiouAccumulator::global() const { return mean_present(inter_, uni_); }

std::string MetricReport::csv_header() {
  return "epe_px,bad_pixel_rate,miou,valid_pixels";
}

std::string MetricReport::csv_row() const {
  std::ostringstream out;
  out << epe << ',' << bad_pixel_rate << ',';
  if (miou)
    out << miou->miou;
  else
    out << "";
  out << ',' << valid_pixels;
  return out.str();
}

std::string MetricReport::to_text() const {
  std::ostringstream out;
  out << "EPE: " << epe << " px\n";
  out << "bad-pixel rate: " << bad_pixel_rate << "\n";
  if (miou) {
    out << "mIOU: " << miou->miou << " (per class:";
    for (double v : miou->per_class) {
      out << ' ';
      if (std::isnan(v))
        out << "-";
      else
        out << v;
    }
    out << ")\n";
  }
  out << "valid pixels: " << valid_pixels << "\n";
  return out.str();
}

}  // namespace bi3d
