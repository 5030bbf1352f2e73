#include "bi3d/matchcost.hpp"

#include <bit>
#include <cmath>

namespace bi3d {

namespace {

// Inclusive-box sums via summed-area tables, truncated at the borders.
// The accumulator type A is widened relative to the source where whole-image
// totals could overflow it.
template <typename A, typename S>
std::vector<A> integral_image(const std::vector<S>& src, int w, int h) {
  std::vector<A> ii(static_cast<std::size_t>(w + 1) * (h + 1), A(0));
  for (int y = 0; y < h; ++y) {
    A row = A(0);
    const std::size_t src_row = static_cast<std::size_t>(y) * w;
    const std::size_t ii_row = static_cast<std::size_t>(y + 1) * (w + 1);
    const std::size_t ii_prev = static_cast<std::size_t>(y) * (w + 1);
    for (int x = 0; x < w; ++x) {
      row += src[src_row + x];
      ii[ii_row + x + 1] = ii[ii_prev + x + 1] + row;
    }
  }
  return ii;
}

template <typename T>
inline T box_sum(const std::vector<T>& ii, int w, int h, int x, int y, int radius) {
  const int x0 = std::max(0, x - radius);
  const int y0 = std::max(0, y - radius);
  const int x1 = std::min(w - 1, x + radius) + 1;
  const int y1 = std::min(h - 1, y + radius) + 1;
  const std::size_t stride = w + 1;
  return ii[y1 * stride + x1] - ii[y0 * stride + x1] - ii[y1 * stride + x0] +
         ii[y0 * stride + x0];
}

constexpr double kNccVarEps = 1e-10;

}  // namespace

CensusField census_transform(const GrayImage& img, int radius, const std::uint8_t* valid) {
  if (radius < 1) throw Error("census_transform: radius must be >= 1");
  const int win = 2 * radius + 1;
  if (win > img.width || win > img.height)
    throw Error("census_transform: window larger than image");

  CensusField f;
  f.width = img.width;
  f.height = img.height;
  f.neighbor_bits = win * win - 1;
  f.words = (f.neighbor_bits + 63) / 64;
  f.bits.assign(img.size() * f.words, 0);
  f.mask.assign(img.size() * f.words, 0);

  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const std::size_t px = static_cast<std::size_t>(y) * img.width + x;
      if (valid && !valid[px]) continue;  // descriptor undefined, mask stays 0
      const float center = img.pixels[px];
      std::uint64_t* bits = &f.bits[px * f.words];
      std::uint64_t* mask = &f.mask[px * f.words];
      int k = 0;
      for (int dy = -radius; dy <= radius; ++dy) {
        const int ny = y + dy;
        for (int dx = -radius; dx <= radius; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const int nx = x + dx;
          if (ny >= 0 && ny < img.height && nx >= 0 && nx < img.width) {
            const std::size_t npx = static_cast<std::size_t>(ny) * img.width + nx;
            if (!valid || valid[npx]) {
              mask[k >> 6] |= 1ull << (k & 63);
              if (img.pixels[npx] < center) bits[k >> 6] |= 1ull << (k & 63);
            }
          }
          ++k;
        }
      }
    }
  }
  return f;
}

MatchCostEngine::MatchCostEngine(const GrayImage& ref, const GrayImage& src,
                                 const std::uint8_t* src_valid,
                                 const ClassifierConfig& cfg)
    : cfg_(cfg), width_(ref.width), height_(ref.height) {
  cfg_.validate();
  if (ref.width != src.width || ref.height != src.height)
    throw Error("MatchCostEngine: image dimensions differ");
  const int win = 2 * cfg_.descriptor_radius + 1;
  if (win > width_ || win > height_)
    throw Error("MatchCostEngine: window larger than image");

  if (cfg_.cost == CostKind::Census) {
    ref_census_ = census_transform(ref, cfg_.descriptor_radius);
    src_census_ = census_transform(src, cfg_.descriptor_radius, src_valid);
  } else {
    ref_img_ = ref;
    src_img_ = src;
    if (src_valid)
      src_valid_.assign(src_valid, src_valid + src.size());
    else
      src_valid_.assign(src.size(), 1);
  }
}

MatchCostEngine::Slice MatchCostEngine::slice(int offset) const {
  return cfg_.cost == CostKind::Census ? census_slice(offset) : ncc_slice(offset);
}

MatchCostEngine::Slice MatchCostEngine::census_slice(int offset) const {
  const int w = width_, h = height_;
  const std::size_t n = static_cast<std::size_t>(w) * h;
  const int words = ref_census_.words;

  // Window sums stay far below 2^31 (bits per pixel times window area).
  std::vector<std::int32_t> mismatch(n, 0), defined(n, 0);
  for (int y = 0; y < h; ++y) {
    const std::size_t row = static_cast<std::size_t>(y) * w;
    const int x_begin = std::max(0, -offset);
    const int x_end = std::min(w, w - offset);
    if (words == 1) {  // common case: descriptor radius <= 3 fits one word
      const std::uint64_t* rb = &ref_census_.bits[row];
      const std::uint64_t* rm = &ref_census_.mask[row];
      const std::uint64_t* sb = &src_census_.bits[row + offset];
      const std::uint64_t* sm = &src_census_.mask[row + offset];
      for (int x = x_begin; x < x_end; ++x) {
        const std::uint64_t both = rm[x] & sm[x];
        mismatch[row + x] = std::popcount((rb[x] ^ sb[x]) & both);
        defined[row + x] = std::popcount(both);
      }
    } else {
      for (int x = x_begin; x < x_end; ++x) {
        const int sx = x + offset;
        const std::uint64_t* rb = &ref_census_.bits[(row + x) * words];
        const std::uint64_t* rm = &ref_census_.mask[(row + x) * words];
        const std::uint64_t* sb = &src_census_.bits[(row + sx) * words];
        const std::uint64_t* sm = &src_census_.mask[(row + sx) * words];
        std::int32_t mis = 0, def = 0;
        for (int k = 0; k < words; ++k) {
          const std::uint64_t both = rm[k] & sm[k];
          mis += std::popcount((rb[k] ^ sb[k]) & both);
          def += std::popcount(both);
        }
        mismatch[row + x] = mis;
        defined[row + x] = def;
      }
    }
  }

  const auto ii_mis = integral_image<std::int64_t>(mismatch, w, h);
  const auto ii_def = integral_image<std::int64_t>(defined, w, h);
  const int ar = cfg_.aggregation_radius;
  const double nominal =
      static_cast<double>(ref_census_.neighbor_bits) * (2 * ar + 1) * (2 * ar + 1);

  Slice out;
  out.cost.assign(n, 0.0f);
  out.valid.assign(n, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::int64_t def = box_sum(ii_def, w, h, x, y, ar);
      if (def <= 0) continue;
      const std::int64_t mis = box_sum(ii_mis, w, h, x, y, ar);
      const std::size_t px = static_cast<std::size_t>(y) * w + x;
      // Scale partial windows to the nominal full-window bit count so that
      // offsets near borders or the warp's invalid band compare fairly.
      out.cost[px] = static_cast<float>(static_cast<double>(mis) / def * nominal);
      out.valid[px] = 1;
    }
  }
  return out;
}

MatchCostEngine::Slice MatchCostEngine::ncc_slice(int offset) const {
  const int w = width_, h = height_;
  const std::size_t n = static_cast<std::size_t>(w) * h;

  // Per-pixel moment maps over the joint support, then window sums.
  std::vector<double> cnt(n, 0.0), sa(n, 0.0), sb(n, 0.0), saa(n, 0.0), sbb(n, 0.0),
      sab(n, 0.0);
  for (int y = 0; y < h; ++y) {
    const std::size_t row = static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) {
      const int sx = x + offset;
      if (sx < 0 || sx >= w) continue;
      if (!src_valid_[row + sx]) continue;
      const double a = ref_img_.pixels[row + x];
      const double b = src_img_.pixels[row + sx];
      cnt[row + x] = 1.0;
      sa[row + x] = a;
      sb[row + x] = b;
      saa[row + x] = a * a;
      sbb[row + x] = b * b;
      sab[row + x] = a * b;
    }
  }

  const auto ii_cnt = integral_image<double>(cnt, w, h);
  const auto ii_sa = integral_image<double>(sa, w, h);
  const auto ii_sb = integral_image<double>(sb, w, h);
  const auto ii_saa = integral_image<double>(saa, w, h);
  const auto ii_sbb = integral_image<double>(sbb, w, h);
  const auto ii_sab = integral_image<double>(sab, w, h);

  const int r = cfg_.descriptor_radius;
  Slice out;
  out.cost.assign(n, 0.0f);
  out.valid.assign(n, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double m = box_sum(ii_cnt, w, h, x, y, r);
      if (m < 2.0) continue;  // correlation needs at least two samples
      const double ra = box_sum(ii_sa, w, h, x, y, r);
      const double rb = box_sum(ii_sb, w, h, x, y, r);
      const double var_a = m * box_sum(ii_saa, w, h, x, y, r) - ra * ra;
      const double var_b = m * box_sum(ii_sbb, w, h, x, y, r) - rb * rb;
      if (var_a <= kNccVarEps || var_b <= kNccVarEps) continue;  // flat patch
      const double cov = m * box_sum(ii_sab, w, h, x, y, r) - ra * rb;
      const double corr = cov / std::sqrt(var_a * var_b);
      const std::size_t px = static_cast<std::size_t>(y) * w + x;
      out.cost[px] = static_cast<float>(1.0 - corr);
      out.valid[px] = 1;
    }
  }
  return out;
}

}  // namespace bi3d
