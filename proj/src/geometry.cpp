#include "bi3d/geometry.hpp"

#include <cmath>

namespace bi3d {

PlaneSchedule::PlaneSchedule(std::vector<double> d) : disparities(std::move(d)) {
  if (disparities.empty()) throw Error("PlaneSchedule: needs at least one plane");
  double prev = -1.0;
  for (double v : disparities) {
    if (!std::isfinite(v) || v < 0.0)
      throw Error("PlaneSchedule: disparities must be finite and >= 0");
    if (v <= prev) throw Error("PlaneSchedule: disparities must be strictly increasing");
    prev = v;
  }
}

PlaneSchedule uniform_schedule(double d_min, double d_max, int count) {
  if (!std::isfinite(d_min) || !std::isfinite(d_max))
    throw Error("uniform_schedule: non-finite bounds");
  if (count < 1) throw Error("uniform_schedule: count must be >= 1");
  if (count == 1) {
    if (d_min != d_max) throw Error("uniform_schedule: count 1 requires d_min == d_max");
    return PlaneSchedule({d_min});
  }
  if (!(d_min < d_max)) throw Error("uniform_schedule: d_min must be < d_max");
  std::vector<double> planes(count);
  const double spacing = (d_max - d_min) / (count - 1);
  for (int i = 0; i < count; ++i) planes[i] = d_min + i * spacing;
  planes.back() = d_max;  // guard the inclusive endpoint against rounding
  return PlaneSchedule(std::move(planes));
}

PlaneSchedule levels_schedule(int levels, double d_max) {
  if (levels < 2) throw Error("levels_schedule: needs at least 2 levels");
  if (!(d_max > 0.0) || !std::isfinite(d_max))
    throw Error("levels_schedule: d_max must be positive and finite");
  std::vector<double> planes(levels - 1);
  for (int k = 1; k < levels; ++k) planes[k - 1] = d_max * k / levels;
  return PlaneSchedule(std::move(planes));
}

WarpedImage warp_right(const GrayImage& right, double d) {
  if (!std::isfinite(d) || d < 0.0)
    throw Error("warp_right: disparity must be finite and >= 0");

  WarpedImage out;
  if (d == 0.0) {
    out.image = right;
    out.valid.assign(right.size(), 1);
    return out;
  }

  out.image = GrayImage(right.width, right.height);
  out.valid.assign(right.size(), 0);
  const int x0_int = static_cast<int>(std::floor(d));
  const double frac = d - x0_int;
  for (int y = 0; y < right.height; ++y) {
    const std::size_t row = static_cast<std::size_t>(y) * right.width;
    for (int x = 0; x < right.width; ++x) {
      const double xs = x - d;
      if (xs < 0.0) continue;  // the leftmost ceil(d) columns stay invalid
      const int xi = x - x0_int;  // exact integer arithmetic for the base sample
      float v;
      if (frac == 0.0) {
        v = right.pixels[row + xi];
      } else {
        // xs sits between xi-1 and xi at distance (1-frac) from xi-1.
        v = static_cast<float>(frac * right.pixels[row + xi - 1] +
                               (1.0 - frac) * right.pixels[row + xi]);
      }
      out.image.pixels[row + x] = v;
      out.valid[row + x] = 1;
    }
  }
  return out;
}

}  // namespace bi3d
