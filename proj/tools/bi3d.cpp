// Command-line surface for the stereo depth toolkit: binary / quantized /
// selective / full depth, the adaptive geo-fence loop, synthetic scene
// rendering, the latency benchmark, and metric evaluation.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "bi3d/adaptive.hpp"
#include "bi3d/bench.hpp"
#include "bi3d/imgio.hpp"
#include "bi3d/metrics.hpp"
#include "bi3d/synth.hpp"

namespace fs = std::filesystem;
using namespace bi3d;

namespace {

struct ClassifierOpts {
  std::string cost;
  std::string config_file;
  int desc_radius = -1;
  int agg_radius = -1;
  int search_extent = -1;
  double temperature = 0.0;
  int smooth = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_file, "key = value classifier config file");
    cmd->add_option("--cost", cost, "matching cost: census|ncc");
    cmd->add_option("--desc-radius", desc_radius, "descriptor window half-width");
    cmd->add_option("--agg-radius", agg_radius, "cost aggregation half-width");
    cmd->add_option("--search-extent", search_extent, "residual search extent K");
    cmd->add_option("--temperature", temperature, "softmax temperature");
    cmd->add_option("--smooth", smooth, "box smoothing radius for confidence maps");
  }

  // defaults < config file < explicit flags
  ClassifierConfig resolve() const {
    ClassifierConfig cfg;
    bool temp_set = false;
    if (!config_file.empty()) cfg = parse_classifier_config(config_file);
    if (!cost.empty()) apply_config_entry(cfg, "cost", cost, &temp_set);
    if (desc_radius >= 0) cfg.descriptor_radius = desc_radius;
    if (agg_radius >= 0) cfg.aggregation_radius = agg_radius;
    if (search_extent >= 0) cfg.search_extent = search_extent;
    if (temperature > 0.0) cfg.temperature = temperature;
    cfg.validate();
    return cfg;
  }
};

struct PairOpts {
  std::string left, right, gt;
  bool oracle = false;

  void attach(CLI::App* cmd, bool gt_optional = true) {
    cmd->add_option("--left", left, "left image (PGM)");
    cmd->add_option("--right", right, "right image (PGM)");
    cmd->add_option("--gt", gt, "ground-truth disparity (PFM)")
        ->required(!gt_optional);
    cmd->add_flag("--oracle", oracle, "classify from ground truth instead of images");
  }

  StereoPair load_pair() const {
    if (left.empty() || right.empty())
      throw Error("--left and --right are required unless --oracle is given");
    return StereoPair(read_pgm(left), read_pgm(right));
  }

  DisparityMap load_gt() const {
    if (gt.empty()) throw Error("--oracle requires --gt");
    return read_pfm(gt);
  }
};

std::pair<double, double> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw Error("--range expects a:b, got '" + text + "'");
  std::size_t used = 0;
  const double a = std::stod(text.substr(0, colon), &used);
  if (used != colon) throw Error("--range: malformed lower bound");
  const std::string hi = text.substr(colon + 1);
  const double b = std::stod(hi, &used);
  if (used != hi.size()) throw Error("--range: malformed upper bound");
  return {a, b};
}

GrayImage labels_to_mask(const LabelMap& labels) {
  GrayImage img(labels.width, labels.height);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    switch (labels.labels[i]) {
      case kLabelFront: img.pixels[i] = 1.0f; break;
      case kLabelInRange: img.pixels[i] = 0.5f; break;
      default: img.pixels[i] = 0.0f; break;
    }
  }
  return img;
}

ConfidenceVolume make_volume(const PairOpts& io, const PlaneSchedule& schedule,
                             const ClassifierConfig& cfg, int smooth) {
  if (io.oracle) return build_oracle_volume(io.load_gt(), schedule);
  return build_volume(io.load_pair(), schedule, cfg, smooth);
}

LabelMap invert_mask(const LabelMap& m) {
  LabelMap out(m.width, m.height);
  for (std::size_t i = 0; i < m.size(); ++i) out.labels[i] = m.labels[i] ? 0 : 1;
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bi3d - stereo depth via per-plane front/behind classification"};
  app.require_subcommand(1);
  app.footer("Environment: BI3D_THREADS caps internal parallelism (0 = auto).");

  std::string out_dir = ".";
  app.add_option("--out", out_dir, "output directory")->capture_default_str();

  ClassifierOpts cls;
  PairOpts io;

  // binary
  auto* binary = app.add_subcommand("binary", "front/behind mask for one plane");
  double plane = 0.0;
  binary->add_option("--plane", plane, "plane disparity")->required();
  io.attach(binary);
  cls.attach(binary);

  // quantized
  auto* quantized = app.add_subcommand("quantized", "depth quantized into N levels");
  int levels = 4;
  double max_disparity = 192.0;
  quantized->add_option("--levels", levels, "quantization levels (uses levels-1 planes)")
      ->capture_default_str();
  quantized->add_option("--max-disparity", max_disparity, "scene maximum disparity")
      ->capture_default_str();
  io.attach(quantized);
  cls.attach(quantized);

  // selective
  auto* selective = app.add_subcommand("selective", "continuous depth in a range");
  std::string range_text;
  int count = 25;
  selective->add_option("--range", range_text, "disparity range a:b")->required();
  selective->add_option("--count", count, "planes in the range")->capture_default_str();
  io.attach(selective);
  cls.attach(selective);

  // full
  auto* full = app.add_subcommand("full", "continuous depth over [0, max]");
  double full_max = 192.0;
  int full_count = 0;
  full->add_option("--max-disparity", full_max, "maximum disparity")->capture_default_str();
  full->add_option("--count", full_count, "plane count (default max+1, unit spacing)");
  io.attach(full);
  cls.attach(full);

  // adaptive
  auto* adaptive = app.add_subcommand("adaptive", "selective range + geo-fence over a sequence");
  std::string frames_file, adaptive_range;
  double fence = 0.0, tau_on = 0.02, tau_off = 0.005;
  int release_frames = 5, adaptive_count = 25;
  bool adaptive_oracle = false;
  adaptive->add_option("--frames", frames_file,
                       "text file: one 'left right [gt]' line per frame")->required();
  adaptive->add_option("--range", adaptive_range, "base disparity range a:b")->required();
  adaptive->add_option("--fence", fence, "fence plane disparity (< range lower bound)")
      ->required();
  adaptive->add_option("--count", adaptive_count, "planes per range")->capture_default_str();
  adaptive->add_option("--tau-on", tau_on, "fence fraction arming the extension")
      ->capture_default_str();
  adaptive->add_option("--tau-off", tau_off, "fence fraction counted as quiet")
      ->capture_default_str();
  adaptive->add_option("--release-frames", release_frames, "quiet frames before reverting")
      ->capture_default_str();
  adaptive->add_flag("--oracle", adaptive_oracle, "drive fence and volume from gt");
  cls.attach(adaptive);

  // synth
  auto* synth = app.add_subcommand("synth", "render a scene spec to PGM/PFM");
  std::string scene_file;
  std::uint64_t seed = 0;
  bool seed_given = false;
  synth->add_option("--scene", scene_file, "scene spec file")->required();
  synth->add_option("--seed", seed, "override the scene file's seed")
      ->each([&](const std::string&) { seed_given = true; });

  // bench
  auto* bench = app.add_subcommand("bench", "time build_volume across plane counts");
  std::string bench_scene, bench_counts = "2,4,8,16,32";
  int repeats = 5;
  double bench_max = 64.0;
  bench->add_option("--scene", bench_scene, "render this scene spec as the fixed input");
  bench->add_option("--counts", bench_counts, "comma-separated plane counts")
      ->capture_default_str();
  bench->add_option("--repeats", repeats, "timed repetitions per count")->capture_default_str();
  bench->add_option("--max-disparity", bench_max, "schedule upper bound")->capture_default_str();
  io.attach(bench);
  cls.attach(bench);

  // eval
  auto* eval = app.add_subcommand("eval", "compare a prediction against ground truth");
  std::string pred_file, eval_gt, occlusion_file;
  double threshold = 3.0;
  int eval_levels = 0;
  double eval_max = 192.0;
  eval->add_option("--pred", pred_file, "predicted disparity (PFM)")->required();
  eval->add_option("--gt", eval_gt, "ground-truth disparity (PFM)")->required();
  eval->add_option("--occlusion", occlusion_file,
                   "occlusion mask (PGM); nonzero pixels are excluded");
  eval->add_option("--threshold", threshold, "bad-pixel threshold, px")->capture_default_str();
  eval->add_option("--levels", eval_levels, "also report mIOU at this quantization");
  eval->add_option("--max-disparity", eval_max, "quantization range upper bound")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    const fs::path out(out_dir);
    fs::create_directories(out);

    if (*binary) {
      const ConfidenceMap conf = io.oracle
                                     ? oracle_classify(io.load_gt(), plane)
                                     : classify_plane(io.load_pair(), plane, cls.resolve());
      const ConfidenceMap used = cls.smooth > 0 ? smooth_confidence(conf, cls.smooth) : conf;
      write_pgm(labels_to_mask(binarize(used)), out / "binary.pgm");
      std::cout << "wrote " << (out / "binary.pgm").string() << "\n";
    } else if (*quantized) {
      const PlaneSchedule schedule = levels_schedule(levels, max_disparity);
      const ConfidenceVolume vol = make_volume(io, schedule, cls.resolve(), cls.smooth);
      const QuantizedDepth q = quantized_disparity(vol, max_disparity);
      write_label_pgm(q.bins, out / "quantized_bins.pgm");
      write_pfm(q.centers, out / "quantized_centers.pfm");
      colorize(q.centers, 0.0, max_disparity, out / "quantized_centers.ppm");
      std::cout << "wrote quantized_bins.pgm, quantized_centers.pfm, quantized_centers.ppm in "
                << out.string() << "\n";
    } else if (*selective) {
      const auto [lo, hi] = parse_range(range_text);
      const PlaneSchedule schedule = uniform_schedule(lo, hi, count);
      const ConfidenceVolume vol = make_volume(io, schedule, cls.resolve(), cls.smooth);
      const SelectiveDepth sel = selective_disparity(vol);
      write_pfm(sel.disparity, out / "selective_disp.pfm");
      write_pgm(labels_to_mask(sel.labels), out / "selective_labels.pgm");
      colorize(sel.disparity, lo, hi, out / "selective.ppm", &sel.labels);
      std::cout << "wrote selective_disp.pfm, selective_labels.pgm, selective.ppm in "
                << out.string() << "\n";
    } else if (*full) {
      if (full_count == 0) full_count = static_cast<int>(full_max) + 1;
      DisparityMap disp;
      if (io.oracle) {
        const PlaneSchedule schedule = uniform_schedule(0.0, full_max, full_count);
        disp = auc_disparity(build_oracle_volume(io.load_gt(), schedule));
      } else {
        disp = full_disparity(io.load_pair(), cls.resolve(), full_max, full_count);
      }
      write_pfm(disp, out / "full_disp.pfm");
      colorize(disp, 0.0, full_max, out / "full_disp.ppm");
      std::cout << "wrote full_disp.pfm, full_disp.ppm in " << out.string() << "\n";
    } else if (*adaptive) {
      const auto [lo, hi] = parse_range(adaptive_range);
      AdaptiveConfig acfg;
      acfg.range_lo = lo;
      acfg.range_hi = hi;
      acfg.fence = fence;
      acfg.trigger_on = tau_on;
      acfg.trigger_off = tau_off;
      acfg.release_frames = release_frames;
      acfg.planes_per_range = adaptive_count;
      acfg.validate();

      std::ifstream frames(frames_file);
      if (!frames) throw Error("cannot open frames file " + frames_file);
      const ClassifierConfig ccfg = cls.resolve();
      std::ostringstream log;
      log << "frame,fence_fraction,extended\n";
      AdaptiveState state;
      std::string line;
      int frame = 0;
      while (std::getline(frames, line)) {
        std::istringstream ls(line);
        std::string left_path, right_path, gt_path;
        if (!(ls >> left_path >> right_path)) continue;  // blank line
        ls >> gt_path;
        AdaptiveStep step;
        if (adaptive_oracle) {
          if (gt_path.empty())
            throw Error("--oracle frames need a gt column (left right gt)");
          step = adaptive_step_oracle(state, read_pfm(gt_path), acfg);
        } else {
          step = adaptive_step(state, StereoPair(read_pgm(left_path), read_pgm(right_path)),
                               acfg, ccfg, cls.smooth);
        }
        state = step.state;
        char name[64];
        std::snprintf(name, sizeof name, "frame_%04d", frame);
        write_pgm(labels_to_mask(step.depth.labels), out / (std::string(name) + "_labels.pgm"));
        write_pfm(step.depth.disparity, out / (std::string(name) + "_disp.pfm"));
        write_pgm(labels_to_mask(step.fence_mask), out / (std::string(name) + "_fence.pgm"));
        log << frame << ',' << step.fence_fraction << ',' << (state.extended ? 1 : 0) << '\n';
        ++frame;
      }
      write_text(out / "adaptive_log.csv", log.str());
      std::cout << "processed " << frame << " frames; wrote adaptive_log.csv in "
                << out.string() << "\n";
    } else if (*synth) {
      SceneSpec spec = parse_scene_spec(scene_file);
      if (seed_given) spec.seed = seed;
      const RenderedScene scene = render_pair(spec);
      write_pgm(scene.pair.left, out / "left.pgm");
      write_pgm(scene.pair.right, out / "right.pgm");
      write_pfm(scene.gt, out / "gt.pfm");
      write_label_pgm(scene.occlusion, out / "occlusion.pgm");
      std::cout << "wrote left.pgm, right.pgm, gt.pfm, occlusion.pgm in " << out.string()
                << "\n";
    } else if (*bench) {
      StereoPair pair;
      if (!bench_scene.empty())
        pair = render_pair(parse_scene_spec(bench_scene)).pair;
      else
        pair = io.load_pair();
      std::vector<int> counts;
      std::stringstream cs(bench_counts);
      std::string tok;
      while (std::getline(cs, tok, ',')) counts.push_back(std::stoi(tok));
      const auto rows = bench_volume(pair, cls.resolve(), counts, repeats, bench_max);
      const std::string csv = bench_csv(rows);
      write_text(out / "bench.csv", csv);
      std::cout << csv << "linear fit R^2: " << bench_linear_fit_r2(rows) << "\n";
    } else if (*eval) {
      const DisparityMap pred = read_pfm(pred_file);
      const DisparityMap gt_map = read_pfm(eval_gt);
      std::optional<LabelMap> include;
      if (!occlusion_file.empty()) include = invert_mask(read_label_pgm(occlusion_file));
      const LabelMap* mask = include ? &*include : nullptr;

      MetricReport report;
      report.epe = epe(pred, gt_map, mask);
      report.bad_pixel_rate = bad_pixel_rate(pred, gt_map, mask, threshold);
      std::size_t valid = 0;
      for (std::size_t i = 0; i < pred.size(); ++i)
        if (disparity_valid(pred.values[i]) && disparity_valid(gt_map.values[i]) &&
            (!mask || mask->labels[i]))
          ++valid;
      report.valid_pixels = valid;
      if (eval_levels > 1) {
        const PlaneSchedule schedule = levels_schedule(eval_levels, eval_max);
        std::vector<double> edges;
        edges.push_back(0.0);
        edges.insert(edges.end(), schedule.disparities.begin(), schedule.disparities.end());
        edges.push_back(eval_max);
        report.miou = miou(bin_disparity(pred, edges), bin_disparity(gt_map, edges),
                           eval_levels, mask);
      }
      write_text(out / "report.csv",
                 MetricReport::csv_header() + "\n" + report.csv_row() + "\n");
      std::cout << report.to_text();
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
