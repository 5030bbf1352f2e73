#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "bi3d/image.hpp"

namespace testutil {

// Scratch directory removed when the fixture goes out of scope.
struct TempDir {
  std::filesystem::path path;

  explicit TempDir(const std::string& tag) {
    auto base = std::filesystem::temp_directory_path();
    std::mt19937_64 rng(std::random_device{}());
    path = base / ("bi3d_" + tag + "_" + std::to_string(rng()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::filesystem::path operator/(const std::string& name) const { return path / name; }
};

inline std::vector<unsigned char> slurp_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::vector<unsigned char>((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
}

inline void dump_bytes(const std::filesystem::path& p, const std::vector<unsigned char>& b) {
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
}

// Random image quantized to 8-bit levels (exactly representable through PGM).
inline bi3d::GrayImage random_quantized_image(int w, int h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> level(0, 255);
  std::vector<float> px(static_cast<std::size_t>(w) * h);
  for (auto& v : px) v = static_cast<float>(level(rng)) / 255.0f;
  return bi3d::GrayImage(w, h, std::move(px));
}

inline bi3d::DisparityMap random_disparity_map(int w, int h, std::uint64_t seed,
                                               double invalid_fraction = 0.1) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> uni(0.0f, 192.0f);
  std::uniform_real_distribution<double> gate(0.0, 1.0);
  bi3d::DisparityMap map(w, h);
  for (auto& v : map.values)
    v = gate(rng) < invalid_fraction ? bi3d::kInvalidDisparity : uni(rng);
  return map;
}

}  // namespace testutil
