// Python bindings for the core operations. Images cross the boundary as
// numpy arrays (float32 for intensities/disparities, uint16 for labels,
// uint8 for validity masks).

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "bi3d/adaptive.hpp"
#include "bi3d/bench.hpp"
#include "bi3d/imgio.hpp"
#include "bi3d/metrics.hpp"
#include "bi3d/synth.hpp"

namespace py = pybind11;
using namespace bi3d;

namespace {

template <typename T>
py::array_t<T> plane_array(int width, int height, const std::vector<T>& data) {
  py::array_t<T> out({height, width});
  std::memcpy(out.mutable_data(), data.data(), data.size() * sizeof(T));
  return out;
}

template <typename T>
std::vector<T> plane_vector(const py::array_t<T, py::array::c_style | py::array::forcecast>& a,
                            int& width, int& height) {
  if (a.ndim() != 2) throw Error("expected a 2-D array");
  height = static_cast<int>(a.shape(0));
  width = static_cast<int>(a.shape(1));
  const T* p = a.data();
  return std::vector<T>(p, p + static_cast<std::size_t>(width) * height);
}

GrayImage gray_from_array(const py::array_t<float, py::array::c_style | py::array::forcecast>& a) {
  int w, h;
  auto data = plane_vector(a, w, h);
  return GrayImage(w, h, std::move(data));
}

DisparityMap disp_from_array(const py::array_t<float, py::array::c_style | py::array::forcecast>& a) {
  int w, h;
  auto data = plane_vector(a, w, h);
  return DisparityMap(w, h, std::move(data));
}

LabelMap labels_from_array(const py::array_t<std::uint16_t, py::array::c_style | py::array::forcecast>& a) {
  int w, h;
  auto data = plane_vector(a, w, h);
  LabelMap out(w, h);
  out.labels = std::move(data);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Stereo depth via per-plane front/behind classification";

  py::register_exception<Error>(m, "Bi3dError");

  py::enum_<CostKind>(m, "CostKind")
      .value("CENSUS", CostKind::Census)
      .value("NCC", CostKind::Ncc);

  py::enum_<AucRule>(m, "AucRule")
      .value("TRAPEZOID", AucRule::Trapezoid)
      .value("LEFT_RIEMANN", AucRule::LeftRiemann)
      .value("RIGHT_RIEMANN", AucRule::RightRiemann);

  py::class_<GrayImage>(m, "GrayImage")
      .def(py::init(&gray_from_array), py::arg("pixels"))
      .def_readonly("width", &GrayImage::width)
      .def_readonly("height", &GrayImage::height)
      .def("numpy", [](const GrayImage& g) { return plane_array(g.width, g.height, g.pixels); });

  py::class_<DisparityMap>(m, "DisparityMap")
      .def(py::init(&disp_from_array), py::arg("values"))
      .def_readonly("width", &DisparityMap::width)
      .def_readonly("height", &DisparityMap::height)
      .def("numpy",
           [](const DisparityMap& d) { return plane_array(d.width, d.height, d.values); });

  py::class_<LabelMap>(m, "LabelMap")
      .def(py::init(&labels_from_array), py::arg("labels"))
      .def_readonly("width", &LabelMap::width)
      .def_readonly("height", &LabelMap::height)
      .def("numpy", [](const LabelMap& l) { return plane_array(l.width, l.height, l.labels); });

  py::class_<StereoPair>(m, "StereoPair")
      .def(py::init<GrayImage, GrayImage>(), py::arg("left"), py::arg("right"))
      .def_readonly("left", &StereoPair::left)
      .def_readonly("right", &StereoPair::right);

  py::class_<PlaneSchedule>(m, "PlaneSchedule")
      .def(py::init<std::vector<double>>(), py::arg("disparities"))
      .def_readonly("disparities", &PlaneSchedule::disparities);

  py::class_<ClassifierConfig>(m, "ClassifierConfig")
      .def(py::init<>())
      .def_static("defaults_for", &ClassifierConfig::defaults_for)
      .def_readwrite("cost", &ClassifierConfig::cost)
      .def_readwrite("descriptor_radius", &ClassifierConfig::descriptor_radius)
      .def_readwrite("aggregation_radius", &ClassifierConfig::aggregation_radius)
      .def_readwrite("search_extent", &ClassifierConfig::search_extent)
      .def_readwrite("temperature", &ClassifierConfig::temperature);

  py::class_<ConfidenceMap>(m, "ConfidenceMap")
      .def_readonly("width", &ConfidenceMap::width)
      .def_readonly("height", &ConfidenceMap::height)
      .def("confidence",
           [](const ConfidenceMap& c) { return plane_array(c.width, c.height, c.conf); })
      .def("validity",
           [](const ConfidenceMap& c) { return plane_array(c.width, c.height, c.valid); });

  py::class_<WarpedImage>(m, "WarpedImage")
      .def_readonly("image", &WarpedImage::image)
      .def("validity", [](const WarpedImage& w) {
        return plane_array(w.image.width, w.image.height, w.valid);
      });

  py::class_<ConfidenceVolume>(m, "ConfidenceVolume")
      .def_readonly("schedule", &ConfidenceVolume::schedule)
      .def_readonly("slices", &ConfidenceVolume::slices)
      .def("numpy", [](const ConfidenceVolume& v) {
        const int planes = v.schedule.count();
        py::array_t<float> out({planes, v.height(), v.width()});
        float* p = out.mutable_data();
        for (int i = 0; i < planes; ++i) {
          std::memcpy(p, v.slices[i].conf.data(), v.slices[i].conf.size() * sizeof(float));
          p += v.slices[i].conf.size();
        }
        return out;
      });

  py::class_<QuantizedDepth>(m, "QuantizedDepth")
      .def_readonly("bins", &QuantizedDepth::bins)
      .def_readonly("centers", &QuantizedDepth::centers)
      .def_readonly("edges", &QuantizedDepth::edges);

  py::class_<SelectiveDepth>(m, "SelectiveDepth")
      .def_readonly("disparity", &SelectiveDepth::disparity)
      .def_readonly("labels", &SelectiveDepth::labels);

  py::class_<SceneLayer>(m, "SceneLayer")
      .def(py::init<>())
      .def_readwrite("x0", &SceneLayer::x0)
      .def_readwrite("y0", &SceneLayer::y0)
      .def_readwrite("width", &SceneLayer::width)
      .def_readwrite("height", &SceneLayer::height)
      .def_readwrite("disparity", &SceneLayer::disparity)
      .def_readwrite("texture_seed", &SceneLayer::texture_seed);

  py::class_<SceneSpec>(m, "SceneSpec")
      .def(py::init<>())
      .def_readwrite("width", &SceneSpec::width)
      .def_readwrite("height", &SceneSpec::height)
      .def_readwrite("layers", &SceneSpec::layers)
      .def_readwrite("background_disparity", &SceneSpec::background_disparity)
      .def_readwrite("texture_density", &SceneSpec::texture_density)
      .def_readwrite("noise_sigma", &SceneSpec::noise_sigma)
      .def_readwrite("seed", &SceneSpec::seed);

  py::class_<RenderedScene>(m, "RenderedScene")
      .def_readonly("pair", &RenderedScene::pair)
      .def_readonly("gt", &RenderedScene::gt)
      .def_readonly("occlusion", &RenderedScene::occlusion);

  py::class_<AdaptiveConfig>(m, "AdaptiveConfig")
      .def(py::init<>())
      .def_readwrite("range_lo", &AdaptiveConfig::range_lo)
      .def_readwrite("range_hi", &AdaptiveConfig::range_hi)
      .def_readwrite("fence", &AdaptiveConfig::fence)
      .def_readwrite("trigger_on", &AdaptiveConfig::trigger_on)
      .def_readwrite("trigger_off", &AdaptiveConfig::trigger_off)
      .def_readwrite("release_frames", &AdaptiveConfig::release_frames)
      .def_readwrite("planes_per_range", &AdaptiveConfig::planes_per_range);

  py::class_<AdaptiveState>(m, "AdaptiveState")
      .def(py::init<>())
      .def_readwrite("extended", &AdaptiveState::extended)
      .def_readwrite("quiet_frames", &AdaptiveState::quiet_frames);

  py::class_<AdaptiveStep>(m, "AdaptiveStep")
      .def_readonly("depth", &AdaptiveStep::depth)
      .def_readonly("fence_mask", &AdaptiveStep::fence_mask)
      .def_readonly("fence_fraction", &AdaptiveStep::fence_fraction)
      .def_readonly("state", &AdaptiveStep::state);

  py::class_<MiouResult>(m, "MiouResult")
      .def_readonly("miou", &MiouResult::miou)
      .def_readonly("per_class", &MiouResult::per_class);

  py::class_<BenchRow>(m, "BenchRow")
      .def_readonly("plane_count", &BenchRow::plane_count)
      .def_readonly("mean_ms", &BenchRow::mean_ms)
      .def_readonly("std_ms", &BenchRow::std_ms);

  // imgio
  m.def("read_pgm", &read_pgm, py::arg("path"));
  m.def("write_pgm", &write_pgm, py::arg("image"), py::arg("path"));
  m.def("read_pfm", &read_pfm, py::arg("path"));
  m.def("write_pfm", &write_pfm, py::arg("map"), py::arg("path"));
  m.def("write_label_pgm", &write_label_pgm, py::arg("labels"), py::arg("path"));
  m.def("read_label_pgm", &read_label_pgm, py::arg("path"));
  m.def("colorize", &colorize, py::arg("map"), py::arg("d_lo"), py::arg("d_hi"),
        py::arg("path"), py::arg("overlay") = nullptr);
  m.def("ramp_color", &ramp_color, py::arg("t"));

  // geometry
  m.def("uniform_schedule", &uniform_schedule, py::arg("d_min"), py::arg("d_max"),
        py::arg("count"));
  m.def("levels_schedule", &levels_schedule, py::arg("levels"), py::arg("d_max"));
  m.def("warp_right", &warp_right, py::arg("right"), py::arg("d"));

  // classifier
  m.def("classify_plane", &classify_plane, py::arg("pair"), py::arg("d_i"), py::arg("cfg"));
  m.def("oracle_classify", &oracle_classify, py::arg("gt"), py::arg("d_i"));
  m.def("binarize", &binarize, py::arg("confidence"));
  m.def("smooth_confidence", &smooth_confidence, py::arg("confidence"), py::arg("radius"));

  // depthops
  m.def("build_volume", &build_volume, py::arg("pair"), py::arg("schedule"), py::arg("cfg"),
        py::arg("smooth_radius") = 0);
  m.def("build_oracle_volume", &build_oracle_volume, py::arg("gt"), py::arg("schedule"));
  m.def("auc_disparity", &auc_disparity, py::arg("volume"),
        py::arg("rule") = AucRule::Trapezoid);
  m.def("quantized_disparity", &quantized_disparity, py::arg("volume"), py::arg("scene_max"),
        py::arg("isotonic") = false);
  m.def("selective_disparity", &selective_disparity, py::arg("volume"),
        py::arg("rule") = AucRule::Trapezoid);
  m.def("full_disparity", &full_disparity, py::arg("pair"), py::arg("cfg"), py::arg("d_max"),
        py::arg("count"));
  m.def("bin_disparity", &bin_disparity, py::arg("map"), py::arg("edges"));

  // synth
  m.def("render_pair", &render_pair, py::arg("spec"));
  m.def("parse_scene_spec", &parse_scene_spec, py::arg("path"));
  m.def("brute_force_match", &brute_force_match, py::arg("pair"), py::arg("d_lo"),
        py::arg("d_hi"), py::arg("cfg"));

  // metrics
  m.def("epe", &epe, py::arg("pred"), py::arg("gt"), py::arg("mask") = nullptr);
  m.def("bad_pixel_rate", &bad_pixel_rate, py::arg("pred"), py::arg("gt"),
        py::arg("mask") = nullptr, py::arg("threshold") = 3.0);
  m.def("miou", &miou, py::arg("pred"), py::arg("gt"), py::arg("classes"),
        py::arg("mask") = nullptr);

  // adaptive
  m.def("adaptive_step", &adaptive_step, py::arg("state"), py::arg("pair"), py::arg("cfg_a"),
        py::arg("cfg_c"), py::arg("smooth_radius") = 0);
  m.def("adaptive_step_oracle", &adaptive_step_oracle, py::arg("state"), py::arg("gt"),
        py::arg("cfg_a"));

  // bench
  m.def("bench_volume", &bench_volume, py::arg("pair"), py::arg("cfg"), py::arg("counts"),
        py::arg("repeats"), py::arg("d_max"));
}
