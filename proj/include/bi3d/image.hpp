#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace bi3d {

/// Base error type for the whole library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input file. The message names the byte offset where parsing failed.
struct ParseError : Error {
  ParseError(const std::string& what, std::size_t byte_offset)
      : Error(what + " (byte offset " + std::to_string(byte_offset) + ")"),
        offset(byte_offset) {}
  std::size_t offset;
};

/// Sentinel for pixels with no disparity estimate.
inline constexpr float kInvalidDisparity = std::numeric_limits<float>::quiet_NaN();

inline bool disparity_valid(float d) { return std::isfinite(d); }

// Label values shared by binarize / selective / adaptive outputs.
// Quantized bin indices reuse the same LabelMap container with values 0..N.
inline constexpr std::uint16_t kLabelBehind = 0;
inline constexpr std::uint16_t kLabelFront = 1;
inline constexpr std::uint16_t kLabelInRange = 2;

/// Grayscale image, row-major, intensities normalized to [0,1].
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<float> pixels;

  GrayImage() = default;
  GrayImage(int w, int h) : width(w), height(h), pixels(check_dims(w, h), 0.0f) {}
  GrayImage(int w, int h, std::vector<float> data)
      : width(w), height(h), pixels(std::move(data)) {
    check_dims(w, h);
    if (pixels.size() != static_cast<std::size_t>(w) * h)
      throw Error("GrayImage: pixel count does not match dimensions");
    for (float v : pixels)
      if (!(v >= 0.0f && v <= 1.0f))
        throw Error("GrayImage: intensity outside [0,1]");
  }

  std::size_t size() const { return pixels.size(); }
  float at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  float& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }

 private:
  static std::size_t check_dims(int w, int h) {
    if (w < 0 || h < 0) throw Error("GrayImage: negative dimensions");
    return static_cast<std::size_t>(w) * h;
  }
};

/// Per-pixel disparity in pixels; NaN marks pixels with no estimate.
struct DisparityMap {
  int width = 0;
  int height = 0;
  std::vector<float> values;

  DisparityMap() = default;
  DisparityMap(int w, int h, float fill = kInvalidDisparity)
      : width(w), height(h), values(check_dims(w, h), fill) {}
  DisparityMap(int w, int h, std::vector<float> data)
      : width(w), height(h), values(std::move(data)) {
    check_dims(w, h);
    if (values.size() != static_cast<std::size_t>(w) * h)
      throw Error("DisparityMap: value count does not match dimensions");
    for (float v : values)
      if (std::isfinite(v) && v < 0.0f)
        throw Error("DisparityMap: negative disparity");
  }

  std::size_t size() const { return values.size(); }
  float at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
  float& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }

 private:
  static std::size_t check_dims(int w, int h) {
    if (w < 0 || h < 0) throw Error("DisparityMap: negative dimensions");
    return static_cast<std::size_t>(w) * h;
  }
};

/// Per-pixel discrete labels: either front/behind/in-range or quantization bins.
struct LabelMap {
  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> labels;

  LabelMap() = default;
  LabelMap(int w, int h, std::uint16_t fill = 0)
      : width(w), height(h), labels(static_cast<std::size_t>(w) * h, fill) {
    if (w < 0 || h < 0) throw Error("LabelMap: negative dimensions");
  }

  std::size_t size() const { return labels.size(); }
  std::uint16_t at(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }
  std::uint16_t& at(int x, int y) { return labels[static_cast<std::size_t>(y) * width + x]; }
};

/// Rectified stereo pair; the left image is the reference view.
struct StereoPair {
  GrayImage left;
  GrayImage right;

  StereoPair() = default;
  StereoPair(GrayImage l, GrayImage r) : left(std::move(l)), right(std::move(r)) {
    if (left.width != right.width || left.height != right.height)
      throw Error("StereoPair: left/right dimensions differ");
  }
};

}  // namespace bi3d
