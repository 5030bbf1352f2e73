#include "bi3d/classifier.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "bi3d/geometry.hpp"
#include "bi3d/parallel.hpp"

namespace bi3d {

ConfidenceMap classify_plane(const StereoPair& pair, double d_i,
                             const ClassifierConfig& cfg) {
  cfg.validate();
  if (!std::isfinite(d_i) || d_i < 0.0)
    throw Error("classify_plane: plane disparity must be finite and >= 0");

  const WarpedImage warped = warp_right(pair.right, d_i);
  const MatchCostEngine engine(pair.left, warped.image, warped.valid.data(), cfg);

  const int K = cfg.search_extent;
  const std::size_t n = pair.left.size();
  const double inv_tau = 1.0 / cfg.temperature;

  // Streaming softmax over offsets, one mirrored pair at a time. Accumulating
  // the -k/+k weights together keeps a symmetric cost profile at exactly 0.5
  // and bounds memory to two cost slices regardless of K.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr double kExpCutoff = 40.0;  // exp(-40) is negligible against a unit weight
  std::vector<double> min_cost(n, kInf);
  std::vector<double> num(n, 0.0), den(n, 0.0);

  {
    const auto zero = engine.slice(0);
    for (std::size_t px = 0; px < n; ++px) {
      if (!zero.valid[px]) continue;
      min_cost[px] = zero.cost[px];
      num[px] = 0.5;  // zero residual is the ambiguous case: split its mass
      den[px] = 1.0;
    }
  }
  for (int k = 1; k <= K; ++k) {
    MatchCostEngine::Slice neg, pos;
    parallel_for(0, 2, [&](int side) {
      (side == 0 ? neg : pos) = engine.slice(side == 0 ? -k : k);
    });
    for (std::size_t px = 0; px < n; ++px) {
      double fresh = kInf;
      if (neg.valid[px]) fresh = neg.cost[px];
      if (pos.valid[px] && pos.cost[px] < fresh) fresh = pos.cost[px];
      if (fresh == kInf) continue;

      if (fresh < min_cost[px]) {
        if (den[px] > 0.0) {
          const double rescale = std::exp(-(min_cost[px] - fresh) * inv_tau);
          num[px] *= rescale;
          den[px] *= rescale;
        }
        min_cost[px] = fresh;
      }
      auto weight = [&](const MatchCostEngine::Slice& s) {
        if (!s.valid[px]) return 0.0;
        const double arg = (s.cost[px] - min_cost[px]) * inv_tau;
        return arg > kExpCutoff ? 0.0 : std::exp(-arg);
      };
      const double wn = weight(neg);
      const double wp = weight(pos);
      num[px] += wn;        // leftward mass votes "in front"
      den[px] += wn + wp;
    }
  }

  ConfidenceMap out(pair.left.width, pair.left.height);
  for (std::size_t px = 0; px < n; ++px) {
    if (den[px] <= 0.0) continue;  // whole offset set invalid
    out.conf[px] = static_cast<float>(num[px] / den[px]);
    out.valid[px] = 1;
  }
  return out;
}

ConfidenceMap oracle_classify(const DisparityMap& gt, double d_i) {
  if (!std::isfinite(d_i)) throw Error("oracle_classify: non-finite plane");
  ConfidenceMap out(gt.width, gt.height);
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (!disparity_valid(gt.values[i])) continue;
    out.conf[i] = d_i < gt.values[i] ? 1.0f : 0.0f;
    out.valid[i] = 1;
  }
  return out;
}

LabelMap binarize(const ConfidenceMap& c) {
  LabelMap out(c.width, c.height, kLabelBehind);
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c.valid[i] && c.conf[i] >= 0.5f) out.labels[i] = kLabelFront;
  return out;
}

ConfidenceMap smooth_confidence(const ConfidenceMap& c, int radius) {
  if (radius < 0) throw Error("smooth_confidence: radius must be >= 0");
  if (radius == 0) return c;

  ConfidenceMap out(c.width, c.height);
  const int w = c.width, h = c.height;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t px = static_cast<std::size_t>(y) * w + x;
      if (!c.valid[px]) continue;
      double sum = 0.0;
      int count = 0;
      for (int dy = -radius; dy <= radius; ++dy) {
        const int ny = y + dy;
        if (ny < 0 || ny >= h) continue;
        for (int dx = -radius; dx <= radius; ++dx) {
          const int nx = x + dx;
          if (nx < 0 || nx >= w) continue;
          const std::size_t npx = static_cast<std::size_t>(ny) * w + nx;
          if (!c.valid[npx]) continue;
          sum += c.conf[npx];
          ++count;
        }
      }
      out.conf[px] = static_cast<float>(std::clamp(sum / count, 0.0, 1.0));
      out.valid[px] = 1;
    }
  }
  return out;
}

void apply_config_entry(ClassifierConfig& cfg, const std::string& key,
                        const std::string& value, bool* temperature_set) {
  auto parse_int = [&](const std::string& v) {
    std::size_t used = 0;
    int r = std::stoi(v, &used);
    if (used != v.size()) throw Error("config: malformed integer for key '" + key + "'");
    return r;
  };
  if (key == "cost") {
    if (value == "census")
      cfg.cost = CostKind::Census;
    else if (value == "ncc")
      cfg.cost = CostKind::Ncc;
    else
      throw Error("config: unknown cost '" + value + "' (census|ncc)");
    if (!temperature_set || !*temperature_set)
      cfg.temperature = ClassifierConfig::defaults_for(cfg.cost).temperature;
  } else if (key == "desc_radius") {
    cfg.descriptor_radius = parse_int(value);
  } else if (key == "agg_radius") {
    cfg.aggregation_radius = parse_int(value);
  } else if (key == "search_extent") {
    cfg.search_extent = parse_int(value);
  } else if (key == "temperature") {
    std::size_t used = 0;
    cfg.temperature = std::stod(value, &used);
    if (used != value.size()) throw Error("config: malformed number for key 'temperature'");
    if (temperature_set) *temperature_set = true;
  } else {
    throw Error("config: unknown key '" + key + "'");
  }
}

ClassifierConfig parse_classifier_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  ClassifierConfig cfg;
  bool temperature_set = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    if (eq == std::string::npos) {
      if (!trim(line).empty())
        throw Error("config line " + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw Error("config line " + std::to_string(lineno) + ": empty key or value");
    apply_config_entry(cfg, key, value, &temperature_set);
  }
  cfg.validate();
  return cfg;
}

}  // namespace bi3d
