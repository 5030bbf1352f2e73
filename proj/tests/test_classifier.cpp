#include <doctest.h>

#include <random>

#include "bi3d/classifier.hpp"
#include "bi3d/synth.hpp"
#include "helpers.hpp"

using namespace bi3d;

namespace {

StereoPair constant_scene(int width, int height, int disparity, std::uint64_t seed,
                          DisparityMap* gt_out = nullptr) {
  SceneSpec spec;
  spec.width = width;
  spec.height = height;
  spec.layers = {{0, 0, width, height, disparity, 1}};
  spec.seed = seed;
  RenderedScene scene = render_pair(spec);
  if (gt_out) *gt_out = scene.gt;
  return scene.pair;
}

double mean_valid_confidence(const ConfidenceMap& c) {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c.valid[i]) {
      sum += c.conf[i];
      ++n;
    }
  REQUIRE(n > 0);
  return sum / static_cast<double>(n);
}

}  // namespace

TEST_CASE("oracle_classify: hard step at the ground-truth disparity") {
  DisparityMap gt(1, 1);
  gt.values[0] = 7.0f;
  CHECK(oracle_classify(gt, 0.0).conf[0] == 1.0f);   // plane at infinity
  CHECK(oracle_classify(gt, 7.0).conf[0] == 0.0f);   // 0 for d >= gt
  CHECK(oracle_classify(gt, 6.5).conf[0] == 1.0f);   // strict inequality
  CHECK(oracle_classify(gt, 7.5).conf[0] == 0.0f);

  DisparityMap invalid(1, 1);
  CHECK(oracle_classify(invalid, 3.0).valid[0] == 0);
}

TEST_CASE("oracle_classify: CDF identity holds exactly") {
  const DisparityMap gt = testutil::random_disparity_map(31, 17, 42, 0.15);
  for (double plane : {0.0, 10.0, 55.5, 191.0}) {
    const ConfidenceMap c = oracle_classify(gt, plane);
    std::size_t below = 0, valid = 0;
    double one_minus_sum = 0.0;
    for (std::size_t i = 0; i < gt.size(); ++i) {
      if (!c.valid[i]) continue;
      ++valid;
      if (gt.values[i] <= plane) ++below;
      one_minus_sum += 1.0 - c.conf[i];
    }
    REQUIRE(valid > 0);
    // fraction of gt <= plane equals the mean of (1 - confidence), exactly
    CHECK(static_cast<double>(below) / valid == one_minus_sum / valid);
  }
}

TEST_CASE("oracle_classify: monotone in the plane disparity") {
  const DisparityMap gt = testutil::random_disparity_map(23, 11, 5, 0.0);
  const ConfidenceMap lo = oracle_classify(gt, 20.0);
  const ConfidenceMap hi = oracle_classify(gt, 90.0);
  for (std::size_t i = 0; i < gt.size(); ++i) CHECK(lo.conf[i] >= hi.conf[i]);
}

TEST_CASE("binarize: threshold at 0.5, ties and invalids to documented labels") {
  ConfidenceMap c(4, 1);
  c.conf = {0.7f, 0.2f, 0.5f, 0.9f};
  c.valid = {1, 1, 1, 0};
  const LabelMap labels = binarize(c);
  CHECK(labels.labels[0] == kLabelFront);
  CHECK(labels.labels[1] == kLabelBehind);
  CHECK(labels.labels[2] == kLabelFront);   // tie breaks to FRONT
  CHECK(labels.labels[3] == kLabelBehind);  // invalid pixels label BEHIND
}

TEST_CASE("smooth_confidence: box average over valid neighbors") {
  ConfidenceMap c(3, 1);
  c.conf = {0.0f, 1.0f, 1.0f};
  c.valid = {1, 1, 1};

  SUBCASE("radius 0 is the identity") {
    const ConfidenceMap s = smooth_confidence(c, 0);
    CHECK(s.conf == c.conf);
  }
  SUBCASE("border-truncated averages") {
    const ConfidenceMap s = smooth_confidence(c, 1);
    CHECK(s.conf[0] == doctest::Approx(0.5));
    CHECK(s.conf[1] == doctest::Approx(2.0 / 3.0));
    CHECK(s.conf[2] == doctest::Approx(1.0));
  }
  SUBCASE("constant maps are unchanged") {
    ConfidenceMap flat(5, 4);
    std::fill(flat.conf.begin(), flat.conf.end(), 0.25f);
    std::fill(flat.valid.begin(), flat.valid.end(), 1);
    const ConfidenceMap s = smooth_confidence(flat, 2);
    for (float v : s.conf) CHECK(v == doctest::Approx(0.25));
  }
  SUBCASE("invalid pixels stay invalid and contribute nothing") {
    ConfidenceMap holes(3, 1);
    holes.conf = {0.25f, 0.5f, 1.0f};
    holes.valid = {1, 0, 1};
    const ConfidenceMap s = smooth_confidence(holes, 1);
    CHECK(s.valid[1] == 0);
    CHECK(s.conf[0] == doctest::Approx(0.25));  // the hole leaves only the pixel itself
    CHECK(s.conf[2] == doctest::Approx(1.0));
  }
}

TEST_CASE("classify_plane: votes front below the true disparity, behind above") {
  const StereoPair pair = constant_scene(96, 48, 10, 123);
  for (CostKind kind : {CostKind::Census, CostKind::Ncc}) {
    const ClassifierConfig cfg = ClassifierConfig::defaults_for(kind);
    const double below = mean_valid_confidence(classify_plane(pair, 5.0, cfg));
    const double above = mean_valid_confidence(classify_plane(pair, 15.0, cfg));
    CHECK(below > 0.5);
    CHECK(above < 0.5);
  }
}

TEST_CASE("classify_plane: symmetric costs give exactly 0.5") {
  // Both views identical and mirror-symmetric about the center column; at the
  // zero-disparity plane the cost profile at the center is symmetric in the
  // offset, so the vote must split exactly.
  const int w = 33, h = 17;
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> level(0, 255);
  std::vector<float> px(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x <= w / 2; ++x) {
      const float v = static_cast<float>(level(rng)) / 255.0f;
      px[y * w + x] = v;
      px[y * w + (w - 1 - x)] = v;
    }
  const GrayImage img(w, h, std::move(px));
  const StereoPair pair(img, img);
  for (CostKind kind : {CostKind::Census, CostKind::Ncc}) {
    ClassifierConfig cfg = ClassifierConfig::defaults_for(kind);
    cfg.search_extent = 4;
    const ConfidenceMap c = classify_plane(pair, 0.0, cfg);
    REQUIRE(c.valid[(h / 2) * w + w / 2] == 1);
    CHECK(c.conf[(h / 2) * w + w / 2] == 0.5f);
  }
}

TEST_CASE("classify_plane: census confidence is invariant to affine intensity change") {
  DisparityMap gt;
  const StereoPair pair = constant_scene(64, 32, 6, 321, &gt);
  auto remap = [](const GrayImage& img) {
    std::vector<float> px(img.pixels);
    for (float& v : px) v = 0.5f * v + 0.2f;
    return GrayImage(img.width, img.height, std::move(px));
  };
  const StereoPair scaled(remap(pair.left), remap(pair.right));
  const ClassifierConfig cfg;
  for (double plane : {3.0, 6.0, 9.0}) {
    const ConfidenceMap a = classify_plane(pair, plane, cfg);
    const ConfidenceMap b = classify_plane(scaled, plane, cfg);
    CHECK(a.conf == b.conf);
    CHECK(a.valid == b.valid);
  }
}

TEST_CASE("classify_plane: error paths") {
  SUBCASE("window larger than image") {
    const StereoPair tiny(GrayImage(5, 5), GrayImage(5, 5));
    CHECK_THROWS_WITH_AS(classify_plane(tiny, 1.0, ClassifierConfig{}),
                         doctest::Contains("window"), Error);
  }
  SUBCASE("flat NCC patches leave every offset excluded") {
    GrayImage flat(32, 16);
    for (float& v : flat.pixels) v = 0.5f;
    const StereoPair pair(flat, flat);
    const ConfidenceMap c =
        classify_plane(pair, 2.0, ClassifierConfig::defaults_for(CostKind::Ncc));
    for (auto v : c.valid) CHECK(v == 0);
  }
}

TEST_CASE("classifier config file: keys, defaults, overrides") {
  testutil::TempDir dir("cfg");
  SUBCASE("ncc cost picks its temperature default") {
    const auto f = dir / "ncc.cfg";
    testutil::dump_bytes(f, {});
    std::ofstream(f.string()) << "# comment\ncost = ncc\nsearch_extent = 12\n";
    const ClassifierConfig cfg = parse_classifier_config(f);
    CHECK(cfg.cost == CostKind::Ncc);
    CHECK(cfg.temperature == doctest::Approx(0.1));
    CHECK(cfg.search_extent == 12);
  }
  SUBCASE("explicit temperature wins regardless of key order") {
    const auto f = dir / "temp.cfg";
    std::ofstream(f.string()) << "temperature = 2.5\ncost = ncc\n";
    CHECK(parse_classifier_config(f).temperature == doctest::Approx(2.5));
  }
  SUBCASE("unknown keys are named") {
    const auto f = dir / "bad.cfg";
    std::ofstream(f.string()) << "coost = census\n";
    CHECK_THROWS_WITH_AS(parse_classifier_config(f), doctest::Contains("coost"), Error);
  }
}
