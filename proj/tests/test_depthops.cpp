#include <doctest.h>

#include <random>

#include "bi3d/depthops.hpp"
#include "bi3d/parallel.hpp"
#include "bi3d/synth.hpp"
#include "helpers.hpp"

using namespace bi3d;

namespace {

ConfidenceMap slice_of(int w, int h, const std::vector<float>& conf) {
  ConfidenceMap c(w, h);
  c.conf = conf;
  std::fill(c.valid.begin(), c.valid.end(), 1);
  return c;
}

// One-pixel volume from a confidence profile over the given planes.
ConfidenceVolume profile_volume(const std::vector<double>& planes,
                                const std::vector<float>& profile) {
  ConfidenceVolume vol;
  vol.schedule = PlaneSchedule(planes);
  for (float v : profile) vol.slices.push_back(slice_of(1, 1, {v}));
  return vol;
}

}  // namespace

TEST_CASE("auc_disparity: frozen profiles") {
  SUBCASE("symmetric ramp integrates to the true disparity exactly") {
    const auto vol = profile_volume({0, 1, 2, 3, 4}, {1.0f, 0.75f, 0.5f, 0.25f, 0.0f});
    CHECK(auc_disparity(vol).values[0] == 2.0f);
  }
  SUBCASE("all-ones and all-zeros hit the range endpoints") {
    CHECK(auc_disparity(profile_volume({3, 4, 5}, {1, 1, 1})).values[0] == 5.0f);
    CHECK(auc_disparity(profile_volume({3, 4, 5}, {0, 0, 0})).values[0] == 3.0f);
  }
  SUBCASE("ideal step lands half a spacing below the truth") {
    // gt = 3: confidence 1 on planes 0..2, 0 from plane 3 on
    const auto vol = profile_volume({0, 1, 2, 3, 4}, {1, 1, 1, 0, 0});
    CHECK(auc_disparity(vol).values[0] == 2.5f);
  }
  SUBCASE("riemann rules are selectable") {
    const auto vol = profile_volume({0, 1, 2, 3, 4}, {1, 1, 1, 0, 0});
    CHECK(auc_disparity(vol, AucRule::RightRiemann).values[0] == 2.0f);
    CHECK(auc_disparity(vol, AucRule::LeftRiemann).values[0] == 3.0f);
  }
  SUBCASE("single-plane volumes are rejected") {
    const auto vol = profile_volume({5}, {1});
    CHECK_THROWS_AS(auc_disparity(vol), Error);
  }
  SUBCASE("any invalid slice invalidates the pixel") {
    auto vol = profile_volume({0, 1, 2}, {1, 1, 0});
    vol.slices[1].valid[0] = 0;
    CHECK(!disparity_valid(auc_disparity(vol).values[0]));
  }
}

TEST_CASE("auc_disparity: bounds, monotonicity, flip tolerance") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<float> uni(0.0f, 1.0f);

  SUBCASE("result stays within the schedule range") {
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<float> profile(7);
      for (auto& v : profile) v = uni(rng);
      const auto vol = profile_volume({2, 3.5, 5, 6, 8, 9.25, 12}, profile);
      const float d = auc_disparity(vol).values[0];
      CHECK(d >= 2.0f);
      CHECK(d <= 12.0f);
    }
  }
  SUBCASE("pointwise-larger volumes give pointwise-larger disparity") {
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<float> lo(6), hi(6);
      for (int i = 0; i < 6; ++i) {
        lo[i] = uni(rng) * 0.6f;
        hi[i] = lo[i] + uni(rng) * (1.0f - lo[i]);
      }
      const auto a = auc_disparity(profile_volume({0, 1, 2, 3, 4, 5}, hi)).values[0];
      const auto b = auc_disparity(profile_volume({0, 1, 2, 3, 4, 5}, lo)).values[0];
      CHECK(a >= b - 1e-6f);
    }
  }
  SUBCASE("flipping k interior slices moves the estimate at most k spacings") {
    const int planes = 21, gt = 10;
    std::vector<float> step(planes);
    for (int i = 0; i < planes; ++i) step[i] = i < gt ? 1.0f : 0.0f;
    std::vector<double> sched(planes);
    for (int i = 0; i < planes; ++i) sched[i] = i;
    const float base = auc_disparity(profile_volume(sched, step)).values[0];
    std::uniform_int_distribution<int> pick(1, planes - 2);
    for (int trial = 0; trial < 30; ++trial) {
      auto flipped = step;
      const int k = 1 + trial % 4;
      for (int j = 0; j < k; ++j) {
        const int at = pick(rng);
        flipped[at] = 1.0f - flipped[at];
      }
      const float moved = auc_disparity(profile_volume(sched, flipped)).values[0];
      CHECK(std::abs(moved - base) <= static_cast<float>(k) + 1e-6f);
    }
  }
}

TEST_CASE("quantized_disparity: CDF differences with implicit endpoints") {
  SUBCASE("step between the planes selects the middle bin") {
    const auto vol = profile_volume({64, 128}, {1.0f, 0.0f});
    const QuantizedDepth q = quantized_disparity(vol, 192.0);
    CHECK(q.bins.labels[0] == 1);
    CHECK(q.centers.values[0] == 96.0f);
    CHECK(q.edges == std::vector<double>{0.0, 64.0, 128.0, 192.0});
  }
  SUBCASE("closer than every plane selects the open last bin") {
    const auto vol = profile_volume({64, 128}, {1.0f, 1.0f});
    const QuantizedDepth q = quantized_disparity(vol, 192.0);
    CHECK(q.bins.labels[0] == 2);
    CHECK(q.centers.values[0] == 160.0f);  // (128 + 192) / 2
  }
  SUBCASE("ties go to the lower (farther) bin") {
    const auto vol = profile_volume({10}, {0.5f});
    const QuantizedDepth q = quantized_disparity(vol, 20.0);
    CHECK(q.bins.labels[0] == 0);
    CHECK(q.centers.values[0] == 5.0f);
  }
  SUBCASE("negative differences are clamped; isotonic pass is available") {
    const auto vol = profile_volume({10, 20}, {0.4f, 0.8f});
    CHECK(quantized_disparity(vol, 30.0).bins.labels[0] == 2);           // raw: 0.8 wins
    CHECK(quantized_disparity(vol, 30.0, true).bins.labels[0] == 0);     // isotonic: 0.6 wins
  }
  SUBCASE("scene_max must clear the last plane") {
    const auto vol = profile_volume({10, 20}, {1.0f, 0.0f});
    CHECK_THROWS_AS(quantized_disparity(vol, 20.0), Error);
  }
  SUBCASE("pre-clamp bin masses telescope to one") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<float> uni(0.0f, 1.0f);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> c = {1.0};
      for (int i = 0; i < 9; ++i) c.push_back(uni(rng));
      c.push_back(0.0);
      double sum = 0.0;
      for (std::size_t i = 0; i + 1 < c.size(); ++i) sum += c[i] - c[i + 1];
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("quantized_disparity: oracle volume matches direct binning exactly") {
  const DisparityMap gt = testutil::random_disparity_map(40, 30, 99, 0.05);
  DisparityMap clipped(40, 30);
  for (std::size_t i = 0; i < gt.size(); ++i)
    clipped.values[i] = disparity_valid(gt.values[i])
                            ? std::min(gt.values[i], 59.9f)
                            : kInvalidDisparity;
  const PlaneSchedule planes = levels_schedule(4, 60.0);
  const QuantizedDepth q = quantized_disparity(build_oracle_volume(clipped, planes), 60.0);

  // independent binning oracle: find the (edge_k, edge_k+1] interval
  const std::vector<double> edges = {0.0, 15.0, 30.0, 45.0, 60.0};
  for (std::size_t i = 0; i < clipped.size(); ++i) {
    if (!disparity_valid(clipped.values[i])) {
      CHECK(!disparity_valid(q.centers.values[i]));
      continue;
    }
    int expect = 0;
    while (expect < 3 && clipped.values[i] > edges[expect + 1]) ++expect;
    CHECK(q.bins.labels[i] == expect);
  }
}

TEST_CASE("selective_disparity: out-of-range labels and in-range regression") {
  DisparityMap gt(3, 1);
  gt.values = {50.0f, 30.0f, 10.0f};  // beyond, inside, before the range
  const PlaneSchedule planes = uniform_schedule(18, 42, 25);
  const SelectiveDepth sel = selective_disparity(build_oracle_volume(gt, planes));

  CHECK(sel.labels.labels[0] == kLabelFront);
  CHECK(!disparity_valid(sel.disparity.values[0]));
  CHECK(sel.labels.labels[1] == kLabelInRange);
  CHECK(std::abs(sel.disparity.values[1] - 30.0f) <= 0.5f);
  CHECK(sel.labels.labels[2] == kLabelBehind);
  CHECK(!disparity_valid(sel.disparity.values[2]));

  SUBCASE("boundary pixels follow the strict/inclusive split") {
    DisparityMap edge(2, 1);
    edge.values = {18.0f, 42.0f};  // d <= d_0 is BEHIND, d = d_N is IN_RANGE
    const SelectiveDepth s = selective_disparity(build_oracle_volume(edge, planes));
    CHECK(s.labels.labels[0] == kLabelBehind);
    CHECK(s.labels.labels[1] == kLabelInRange);
  }
  SUBCASE("invalid confidence labels BEHIND with invalid disparity") {
    DisparityMap holes(1, 1);  // invalid gt -> invalid oracle slices
    const SelectiveDepth s = selective_disparity(build_oracle_volume(holes, planes));
    CHECK(s.labels.labels[0] == kLabelBehind);
    CHECK(!disparity_valid(s.disparity.values[0]));
  }
}

TEST_CASE("build_volume: oracle slices are nonincreasing along the plane axis") {
  const DisparityMap gt = testutil::random_disparity_map(20, 12, 4, 0.0);
  const ConfidenceVolume vol = build_oracle_volume(gt, uniform_schedule(0, 60, 13));
  for (int i = 1; i < vol.schedule.count(); ++i)
    for (std::size_t px = 0; px < gt.size(); ++px)
      CHECK(vol.slices[i].conf[px] <= vol.slices[i - 1].conf[px]);
}

TEST_CASE("build_volume: a full 193-plane sweep assembles and regresses") {
  const DisparityMap gt = testutil::random_disparity_map(16, 8, 21, 0.0);
  const ConfidenceVolume vol = build_oracle_volume(gt, uniform_schedule(0, 192, 193));
  REQUIRE(vol.schedule.count() == 193);
  const DisparityMap est = auc_disparity(vol);
  for (std::size_t i = 0; i < gt.size(); ++i)
    CHECK(std::abs(est.values[i] - gt.values[i]) <= 0.5f + 1e-5f);
}

TEST_CASE("build_volume: results are bitwise independent of the worker count") {
  SceneSpec spec;
  spec.width = 48;
  spec.height = 24;
  spec.layers = {{8, 4, 24, 12, 9, 3}};
  spec.background_disparity = 2;
  spec.seed = 11;
  const StereoPair pair = render_pair(spec).pair;
  const PlaneSchedule planes = uniform_schedule(0, 12, 5);

  set_thread_override(1);
  const ConfidenceVolume serial = build_volume(pair, planes, ClassifierConfig{});
  set_thread_override(3);
  const ConfidenceVolume threaded = build_volume(pair, planes, ClassifierConfig{});
  set_thread_override(-1);

  for (int i = 0; i < planes.count(); ++i) {
    CHECK(serial.slices[i].conf == threaded.slices[i].conf);
    CHECK(serial.slices[i].valid == threaded.slices[i].valid);
  }
}

TEST_CASE("thread_count: BI3D_THREADS caps parallelism unless overridden") {
  setenv("BI3D_THREADS", "2", 1);
  set_thread_override(-1);
  CHECK(thread_count() == 2);
  set_thread_override(5);
  CHECK(thread_count() == 5);
  set_thread_override(-1);
  unsetenv("BI3D_THREADS");
  CHECK(thread_count() >= 1);
}

TEST_CASE("full_disparity: equals the explicit three-call pipeline bitwise") {
  SceneSpec spec;
  spec.width = 40;
  spec.height = 20;
  spec.layers = {{0, 0, 40, 20, 4, 1}};
  spec.seed = 5;
  const StereoPair pair = render_pair(spec).pair;
  const ClassifierConfig cfg;
  const DisparityMap composed = full_disparity(pair, cfg, 8.0, 9);
  const DisparityMap explicit_path =
      auc_disparity(build_volume(pair, uniform_schedule(0.0, 8.0, 9), cfg));
  for (std::size_t i = 0; i < composed.size(); ++i) {
    if (disparity_valid(composed.values[i]))
      CHECK(composed.values[i] == explicit_path.values[i]);
    else
      CHECK(!disparity_valid(explicit_path.values[i]));
  }
}

TEST_CASE("bin_disparity: interval conventions") {
  DisparityMap d(5, 1);
  d.values = {0.0f, 15.0f, 15.5f, 70.0f, kInvalidDisparity};
  const LabelMap bins = bin_disparity(d, {0.0, 15.0, 30.0, 45.0, 60.0});
  CHECK(bins.labels[0] == 0);  // zero falls into the first bin
  CHECK(bins.labels[1] == 0);  // edges close their lower bin
  CHECK(bins.labels[2] == 1);
  CHECK(bins.labels[3] == 3);  // beyond the last edge -> last bin
}
