#include "bi3d/synth.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "bi3d/parallel.hpp"

namespace bi3d {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 over seed ^ stream tag
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Stream tags for the independent random sources of one scene.
enum : std::uint64_t { kBackground = 1, kRightFill = 2, kNoiseLeft = 3, kNoiseRight = 4, kLayerBase = 100 };

class TextureStream {
 public:
  TextureStream(std::uint64_t seed, double density) : rng_(seed), density_(density) {}

  float next() {
    if (uni_(rng_) <= density_) return uni_(rng_);
    return 0.5f;  // untextured pixels share a flat base intensity
  }

 private:
  std::mt19937_64 rng_;
  std::uniform_real_distribution<float> uni_{0.0f, 1.0f};
  double density_;
};

void validate_spec(const SceneSpec& spec) {
  if (spec.width <= 0 || spec.height <= 0) throw Error("SceneSpec: empty frame");
  if (spec.background_disparity < 0) throw Error("SceneSpec: negative background disparity");
  if (!(spec.texture_density > 0.0 && spec.texture_density <= 1.0))
    throw Error("SceneSpec: texture_density must be in (0,1]");
  if (spec.noise_sigma < 0.0) throw Error("SceneSpec: negative noise sigma");
  int prev_disparity = 0;
  for (const auto& l : spec.layers) {
    if (l.width < 1 || l.height < 1 || l.x0 < 0 || l.y0 < 0 ||
        l.x0 + l.width > spec.width || l.y0 + l.height > spec.height)
      throw Error("SceneSpec: layer rectangle out of bounds");
    if (l.disparity < 0) throw Error("SceneSpec: negative layer disparity");
    if (l.disparity < prev_disparity)
      throw Error("SceneSpec: layers must be listed back-to-front");
    prev_disparity = l.disparity;
  }
}

void add_noise(GrayImage& img, std::uint64_t seed, double sigma) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, sigma);
  for (float& v : img.pixels)
    v = static_cast<float>(std::clamp(v + gauss(rng), 0.0, 1.0));
}

}  // namespace

RenderedScene render_pair(const SceneSpec& spec) {
  validate_spec(spec);
  const int w = spec.width, h = spec.height;
  const std::size_t n = static_cast<std::size_t>(w) * h;

  std::vector<float> left(n), right(n);
  std::vector<float> gt(n, static_cast<float>(spec.background_disparity));

  {
    TextureStream bg(mix_seed(spec.seed, kBackground), spec.texture_density);
    for (std::size_t i = 0; i < n; ++i) left[i] = bg.next();
  }
  for (std::size_t li = 0; li < spec.layers.size(); ++li) {
    const SceneLayer& l = spec.layers[li];
    TextureStream tex(mix_seed(spec.seed, kLayerBase + li + 0x10000ull * l.texture_seed),
                      spec.texture_density);
    for (int y = l.y0; y < l.y0 + l.height; ++y) {
      for (int x = l.x0; x < l.x0 + l.width; ++x) {
        const std::size_t px = static_cast<std::size_t>(y) * w + x;
        left[px] = tex.next();
        gt[px] = static_cast<float>(l.disparity);
      }
    }
  }

  // Right view: fresh texture everywhere, then scatter the left pixels onto
  // their correspondences with front-most (largest disparity) wins.
  {
    TextureStream fill(mix_seed(spec.seed, kRightFill), spec.texture_density);
    for (std::size_t i = 0; i < n; ++i) right[i] = fill.next();
  }
  std::vector<int> winner_d(n, -1);
  std::vector<int> winner_x(n, -1);
  for (int y = 0; y < h; ++y) {
    const std::size_t row = static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) {
      const int d = static_cast<int>(gt[row + x]);
      const int xr = x - d;
      if (xr < 0 || xr >= w) continue;
      if (d > winner_d[row + xr]) {
        winner_d[row + xr] = d;
        winner_x[row + xr] = x;
        right[row + xr] = left[row + x];
      }
    }
  }

  LabelMap occlusion(w, h, 1);
  for (int y = 0; y < h; ++y) {
    const std::size_t row = static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) {
      const int xr = x - static_cast<int>(gt[row + x]);
      if (xr >= 0 && xr < w && winner_x[row + xr] == x) occlusion.labels[row + x] = 0;
    }
  }

  RenderedScene out;
  out.pair = StereoPair(GrayImage(w, h, std::move(left)), GrayImage(w, h, std::move(right)));
  if (spec.noise_sigma > 0.0) {
    add_noise(out.pair.left, mix_seed(spec.seed, kNoiseLeft), spec.noise_sigma);
    add_noise(out.pair.right, mix_seed(spec.seed, kNoiseRight), spec.noise_sigma);
  }
  out.gt = DisparityMap(w, h, std::move(gt));
  out.occlusion = std::move(occlusion);
  return out;
}

SceneSpec parse_scene_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scene spec " + path.string());
  SceneSpec spec;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        throw Error("scene spec line " + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    std::istringstream key_in(line.substr(0, eq));
    std::string key;
    key_in >> key;
    std::istringstream val(line.substr(eq + 1));
    auto fail = [&](const std::string& why) {
      throw Error("scene spec line " + std::to_string(lineno) + ": " + why);
    };
    if (key == "width") {
      if (!(val >> spec.width)) fail("malformed width");
    } else if (key == "height") {
      if (!(val >> spec.height)) fail("malformed height");
    } else if (key == "background_disparity") {
      if (!(val >> spec.background_disparity)) fail("malformed background_disparity");
    } else if (key == "texture_density") {
      if (!(val >> spec.texture_density)) fail("malformed texture_density");
    } else if (key == "noise_sigma") {
      if (!(val >> spec.noise_sigma)) fail("malformed noise_sigma");
    } else if (key == "seed") {
      if (!(val >> spec.seed)) fail("malformed seed");
    } else if (key == "layer") {
      SceneLayer l;
      if (!(val >> l.x0 >> l.y0 >> l.width >> l.height >> l.disparity >> l.texture_seed))
        fail("layer needs: x0 y0 width height disparity texture_seed");
      spec.layers.push_back(l);
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  validate_spec(spec);
  return spec;
}

DisparityMap brute_force_match(const StereoPair& pair, int d_lo, int d_hi,
                               const ClassifierConfig& cfg) {
  if (d_lo > d_hi) throw Error("brute_force_match: d_lo must be <= d_hi");
  if (d_lo < 0) throw Error("brute_force_match: disparities must be >= 0");

  const MatchCostEngine engine(pair.left, pair.right, nullptr, cfg);
  const std::size_t n = pair.left.size();
  std::vector<float> best_cost(n, std::numeric_limits<float>::infinity());
  // Fallback d_lo: argmin over an interval always answers inside it.
  std::vector<float> best_d(n, static_cast<float>(d_lo));

  const int candidates = d_hi - d_lo + 1;
  constexpr int kChunk = 16;
  std::vector<MatchCostEngine::Slice> slices;
  for (int base = 0; base < candidates; base += kChunk) {
    const int count = std::min(kChunk, candidates - base);
    slices.assign(count, {});
    parallel_for(0, count, [&](int i) { slices[i] = engine.slice(-(d_lo + base + i)); });
    // Merge in ascending d: strict < keeps ties at the smaller candidate.
    for (int i = 0; i < count; ++i) {
      const auto& s = slices[i];
      for (std::size_t px = 0; px < n; ++px) {
        if (s.valid[px] && s.cost[px] < best_cost[px]) {
          best_cost[px] = s.cost[px];
          best_d[px] = static_cast<float>(d_lo + base + i);
        }
      }
    }
  }
  return DisparityMap(pair.left.width, pair.left.height, std::move(best_d));
}

}  // namespace bi3d
