#pragma once

#include <cstdint>
#include <vector>

#include "bi3d/image.hpp"

namespace bi3d {

enum class CostKind { Census, Ncc };

/// Window matching parameters shared by the per-plane classifier and the
/// brute-force baseline matcher.
struct ClassifierConfig {
  CostKind cost = CostKind::Census;
  int descriptor_radius = 3;   // census window half-width / NCC patch radius
  int aggregation_radius = 2;  // census Hamming sums are pooled over this window
  int search_extent = 8;       // residual offsets tested: -K..+K
  double temperature = 4.0;    // softmax scale, in cost units

  static ClassifierConfig defaults_for(CostKind kind) {
    ClassifierConfig c;
    c.cost = kind;
    c.temperature = (kind == CostKind::Census) ? 4.0 : 0.1;
    return c;
  }

  void validate() const {
    if (descriptor_radius < 1 || aggregation_radius < 1)
      throw Error("ClassifierConfig: radii must be >= 1");
    if (search_extent < 1) throw Error("ClassifierConfig: search_extent must be >= 1");
    if (!(temperature > 0.0)) throw Error("ClassifierConfig: temperature must be > 0");
  }
};

/// Per-pixel census bit strings plus a per-bit mask flagging which neighbor
/// comparisons are defined (in bounds and, for warped inputs, valid).
struct CensusField {
  int width = 0;
  int height = 0;
  int words = 0;          // uint64 words per pixel
  int neighbor_bits = 0;  // (2r+1)^2 - 1
  std::vector<std::uint64_t> bits;
  std::vector<std::uint64_t> mask;
};

/// valid may be null (all pixels valid). Throws if the window exceeds the image.
CensusField census_transform(const GrayImage& img, int radius,
                             const std::uint8_t* valid = nullptr);

/// Matching costs between a reference image and a source image sampled at a
/// horizontal offset. The source is either a plane-warped right image (the
/// per-plane classifier) or the raw right image (the argmin baseline, where
/// offset = -d). Costs are scaled so that a full window with r% mismatching
/// census bits reads as r% of the nominal window bit count; offsets whose
/// window holds no valid comparison are reported invalid.
class MatchCostEngine {
 public:
  MatchCostEngine(const GrayImage& ref, const GrayImage& src,
                  const std::uint8_t* src_valid, const ClassifierConfig& cfg);

  struct Slice {
    std::vector<float> cost;
    std::vector<std::uint8_t> valid;
  };

  /// cost(x,y) of matching ref at (x,y) against src at (x+offset, y).
  Slice slice(int offset) const;

  int width() const { return width_; }
  int height() const { return height_; }

 private:
  Slice census_slice(int offset) const;
  Slice ncc_slice(int offset) const;

  ClassifierConfig cfg_;
  int width_ = 0;
  int height_ = 0;
  // census path
  CensusField ref_census_;
  CensusField src_census_;
  // ncc path (owned copies; engines outlive the warps they were built from)
  GrayImage ref_img_;
  GrayImage src_img_;
  std::vector<std::uint8_t> src_valid_;
};

}  // namespace bi3d
