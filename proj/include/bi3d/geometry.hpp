#pragma once

#include <vector>

#include "bi3d/image.hpp"

namespace bi3d {

/// Ordered disparity planes d_0 < d_1 < ... < d_N, all finite and >= 0.
struct PlaneSchedule {
  std::vector<double> disparities;

  PlaneSchedule() = default;
  explicit PlaneSchedule(std::vector<double> d);

  int count() const { return static_cast<int>(disparities.size()); }
  double front() const { return disparities.front(); }
  double back() const { return disparities.back(); }
};

/// count equally spaced planes from d_min to d_max inclusive.
/// count == 1 requires d_min == d_max.
PlaneSchedule uniform_schedule(double d_min, double d_max, int count);

/// levels-quantization accounting: levels-1 planes placed uniformly in the
/// open interval (0, d_max), yielding `levels` bins.
PlaneSchedule levels_schedule(int levels, double d_max);

/// Right image warped by the fronto-parallel plane at disparity d.
/// Invalid pixels (sampled left of the source) carry intensity 0 and must be
/// excluded from all costs downstream.
struct WarpedImage {
  GrayImage image;
  std::vector<std::uint8_t> valid;
};

/// warp(x,y) = right(x-d, y), linear interpolation in x for fractional d.
/// Pixels with x-d < 0 are marked invalid; d = 0 returns the input
/// bit-identically with an all-valid mask.
WarpedImage warp_right(const GrayImage& right, double d);

}  // namespace bi3d
