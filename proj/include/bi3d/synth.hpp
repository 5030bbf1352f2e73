#pragma once

#include <filesystem>

#include "bi3d/image.hpp"
#include "bi3d/matchcost.hpp"

namespace bi3d {

/// Axis-aligned textured rectangle at a constant integer disparity,
/// positioned in left-image coordinates.
struct SceneLayer {
  int x0 = 0, y0 = 0;
  int width = 0, height = 0;
  int disparity = 0;
  std::uint32_t texture_seed = 0;
};

/// Random-dot scene description. Layers are listed back-to-front; integer
/// disparities guarantee exact left/right correspondence.
struct SceneSpec {
  int width = 0, height = 0;
  std::vector<SceneLayer> layers;
  int background_disparity = 0;
  double texture_density = 1.0;  // fraction of pixels carrying random texture
  double noise_sigma = 0.0;      // additive Gaussian, applied per view
  std::uint64_t seed = 0;
};

struct RenderedScene {
  StereoPair pair;
  DisparityMap gt;      // disparity of the front-most layer at each left pixel
  LabelMap occlusion;   // 1 where the right correspondence is hidden or out of frame
};

/// Paints the left image back-to-front, synthesizes the right image so that
/// R(x - gt(x,y), y) = L(x,y) for non-occluded pixels (front-most wins on
/// collisions), fills right-only regions with fresh texture, and finally adds
/// clamped Gaussian noise to both views. Deterministic for a fixed spec.
RenderedScene render_pair(const SceneSpec& spec);

/// Plain-text scene file: key = value lines (width, height,
/// background_disparity, texture_density, noise_sigma, seed) plus repeated
/// "layer = x0 y0 width height disparity texture_seed" lines, back-to-front.
SceneSpec parse_scene_spec(const std::filesystem::path& path);

/// Winner-takes-all baseline matcher: per pixel the integer d in
/// [d_lo, d_hi] minimizing the window cost between L(x,y) and R(x-d,y), ties
/// to the smallest d. Every output lies inside [d_lo, d_hi] by construction,
/// which deliberately exhibits the out-of-range pathology of argmin matching;
/// pixels with no computable candidate fall back to d_lo.
DisparityMap brute_force_match(const StereoPair& pair, int d_lo, int d_hi,
                               const ClassifierConfig& cfg);

}  // namespace bi3d
