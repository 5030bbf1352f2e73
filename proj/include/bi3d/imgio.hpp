#pragma once

#include <array>
#include <filesystem>

#include "bi3d/image.hpp"

namespace bi3d {

/// Reads a Netpbm grayscale image (binary P5 or ASCII P2, maxval <= 65535).
/// Intensities are scaled to [0,1] by the header maxval; 16-bit P5 payloads
/// are big-endian per the format.
GrayImage read_pgm(const std::filesystem::path& path);

/// Writes binary P5 with maxval 255; intensity i is stored as round(i*255).
void write_pgm(const GrayImage& img, const std::filesystem::path& path);

/// Reads a single-channel "Pf" PFM. Negative scale means little-endian
/// payload, positive big-endian; rows are stored bottom-to-top and get
/// flipped to top-to-bottom in memory. Non-finite stored values become the
/// invalid marker. Color "PF" files are rejected.
DisparityMap read_pfm(const std::filesystem::path& path);

/// Writes a "Pf" PFM with scale -1.0 (little-endian, bottom-to-top rows).
/// Invalid pixels are written as quiet NaN.
void write_pfm(const DisparityMap& map, const std::filesystem::path& path);

/// Raw label I/O on top of PGM: labels are stored verbatim with
/// maxval = max(1, largest label), 16-bit when any label exceeds 255.
void write_label_pgm(const LabelMap& labels, const std::filesystem::path& path);
LabelMap read_label_pgm(const std::filesystem::path& path);

/// Fixed perceptual color ramp, sampled at t in [0,1] (clamped).
std::array<float, 3> ramp_color(double t);

/// Renders a disparity map to a binary PPM (P6). Valid disparities are
/// affinely mapped from [d_lo, d_hi] onto the ramp and clamped; invalid
/// pixels are black. When an overlay is given, FRONT pixels render white and
/// BEHIND pixels black; other labels keep the ramp color.
void colorize(const DisparityMap& map, double d_lo, double d_hi,
              const std::filesystem::path& path, const LabelMap* overlay = nullptr);

}  // namespace bi3d
