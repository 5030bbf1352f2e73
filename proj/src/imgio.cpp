#include "bi3d/imgio.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

namespace bi3d {

namespace {

std::vector<unsigned char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return bytes;
}

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Cursor over a loaded file, tracking the byte offset for error reporting.
struct Cursor {
  const std::vector<unsigned char>& buf;
  std::size_t pos = 0;

  bool eof() const { return pos >= buf.size(); }

  // Skips whitespace and '#' comments (Netpbm); PFM headers carry no comments
  // but tolerate the same skipping on read.
  void skip_space_and_comments(bool comments) {
    while (!eof()) {
      if (is_space(buf[pos])) {
        ++pos;
      } else if (comments && buf[pos] == '#') {
        while (!eof() && buf[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
  }

  long parse_int(const char* what, bool comments) {
    skip_space_and_comments(comments);
    std::size_t start = pos;
    bool any = false;
    long value = 0;
    while (!eof() && buf[pos] >= '0' && buf[pos] <= '9') {
      value = value * 10 + (buf[pos] - '0');
      if (value > 1'000'000'000L) throw ParseError(std::string(what) + " out of range", start);
      ++pos;
      any = true;
    }
    if (!any) throw ParseError(std::string("expected ") + what, start);
    return value;
  }

  double parse_float(const char* what) {
    skip_space_and_comments(false);
    std::size_t start = pos;
    std::size_t end = pos;
    while (end < buf.size() && !is_space(buf[end])) ++end;
    if (end == start) throw ParseError(std::string("expected ") + what, start);
    std::string tok(buf.begin() + start, buf.begin() + end);
    char* last = nullptr;
    double v = std::strtod(tok.c_str(), &last);
    if (last != tok.c_str() + tok.size())
      throw ParseError(std::string("malformed ") + what + " '" + tok + "'", start);
    pos = end;
    return v;
  }

  // Consumes the single whitespace byte that separates header from payload.
  void expect_payload_separator() {
    if (eof() || !is_space(buf[pos]))
      throw ParseError("expected whitespace before payload", pos);
    ++pos;
  }
};

struct PnmRaw {
  int width = 0, height = 0;
  long maxval = 0;
  std::vector<std::uint32_t> samples;  // row-major, top-to-bottom
};

PnmRaw parse_pgm_raw(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  Cursor c{bytes};
  if (bytes.size() < 2 || bytes[0] != 'P')
    throw ParseError("not a PGM file (bad magic)", 0);
  const char kind = static_cast<char>(bytes[1]);
  if (kind != '5' && kind != '2')
    throw ParseError(std::string("unsupported PGM magic 'P") + kind + "'", 0);
  c.pos = 2;

  PnmRaw out;
  out.width = static_cast<int>(c.parse_int("width", true));
  out.height = static_cast<int>(c.parse_int("height", true));
  out.maxval = c.parse_int("maxval", true);
  if (out.width <= 0 || out.height <= 0)
    throw ParseError("non-positive image dimensions", c.pos);
  if (out.maxval < 1 || out.maxval > 65535)
    throw ParseError("maxval out of range [1,65535]", c.pos);

  const std::size_t count = static_cast<std::size_t>(out.width) * out.height;
  out.samples.resize(count);
  if (kind == '5') {
    c.expect_payload_separator();
    const int bytes_per = out.maxval > 255 ? 2 : 1;
    if (bytes.size() - c.pos < count * bytes_per)
      throw ParseError("truncated P5 payload", bytes.size());
    for (std::size_t i = 0; i < count; ++i) {
      if (bytes_per == 1) {
        out.samples[i] = bytes[c.pos++];
      } else {
        // 16-bit samples are big-endian per the format.
        std::uint32_t hi = bytes[c.pos++];
        std::uint32_t lo = bytes[c.pos++];
        out.samples[i] = (hi << 8) | lo;
      }
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      long v = c.parse_int("P2 sample", true);
      if (v > out.maxval) throw ParseError("sample exceeds maxval", c.pos);
      out.samples[i] = static_cast<std::uint32_t>(v);
    }
  }
  return out;
}

void append_u16_be(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v >> 8));
  out.push_back(static_cast<unsigned char>(v & 0xff));
}

void write_bytes(const std::filesystem::path& path, const std::string& header,
                 const std::vector<unsigned char>& payload) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size()));
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
  PnmRaw raw = parse_pgm_raw(path);
  std::vector<float> pixels(raw.samples.size());
  const float maxval = static_cast<float>(raw.maxval);
  for (std::size_t i = 0; i < raw.samples.size(); ++i)
    pixels[i] = static_cast<float>(raw.samples[i]) / maxval;
  return GrayImage(raw.width, raw.height, std::move(pixels));
}

void write_pgm(const GrayImage& img, const std::filesystem::path& path) {
  if (img.width <= 0 || img.height <= 0) throw Error("write_pgm: empty image");
  std::string header = "P5\n" + std::to_string(img.width) + " " +
                       std::to_string(img.height) + "\n255\n";
  std::vector<unsigned char> payload;
  payload.reserve(img.size());
  for (float v : img.pixels)
    payload.push_back(static_cast<unsigned char>(std::lround(v * 255.0f)));
  write_bytes(path, header, payload);
}

void write_label_pgm(const LabelMap& labels, const std::filesystem::path& path) {
  if (labels.width <= 0 || labels.height <= 0) throw Error("write_label_pgm: empty map");
  std::uint16_t maxval = 1;
  for (std::uint16_t v : labels.labels) maxval = std::max(maxval, v);
  std::string header = "P5\n" + std::to_string(labels.width) + " " +
                       std::to_string(labels.height) + "\n" + std::to_string(maxval) + "\n";
  std::vector<unsigned char> payload;
  payload.reserve(labels.size() * (maxval > 255 ? 2 : 1));
  for (std::uint16_t v : labels.labels) {
    if (maxval > 255)
      append_u16_be(payload, v);
    else
      payload.push_back(static_cast<unsigned char>(v));
  }
  write_bytes(path, header, payload);
}

LabelMap read_label_pgm(const std::filesystem::path& path) {
  PnmRaw raw = parse_pgm_raw(path);
  LabelMap out(raw.width, raw.height);
  for (std::size_t i = 0; i < raw.samples.size(); ++i)
    out.labels[i] = static_cast<std::uint16_t>(raw.samples[i]);
  return out;
}

DisparityMap read_pfm(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  Cursor c{bytes};
  if (bytes.size() < 2 || bytes[0] != 'P')
    throw ParseError("not a PFM file (bad magic)", 0);
  if (bytes[1] == 'F')
    throw ParseError("color PFM (PF) unsupported; single-channel Pf required", 0);
  if (bytes[1] != 'f')
    throw ParseError("unsupported PFM magic", 0);
  c.pos = 2;

  const int width = static_cast<int>(c.parse_int("width", false));
  const int height = static_cast<int>(c.parse_int("height", false));
  if (width <= 0 || height <= 0)
    throw ParseError("non-positive PFM dimensions", c.pos);
  const std::size_t scale_at = c.pos;
  const double scale = c.parse_float("scale");
  if (scale == 0.0 || !std::isfinite(scale))
    throw ParseError("PFM scale must be finite and nonzero", scale_at);
  c.expect_payload_separator();

  const bool little = scale < 0.0;
  const std::size_t count = static_cast<std::size_t>(width) * height;
  if (bytes.size() - c.pos < count * 4)
    throw ParseError("truncated PFM payload", bytes.size());

  DisparityMap out(width, height);
  for (int file_row = 0; file_row < height; ++file_row) {
    // Rows are stored bottom-to-top.
    const int y = height - 1 - file_row;
    for (int x = 0; x < width; ++x) {
      std::uint32_t u;
      const unsigned char* p = bytes.data() + c.pos;
      if (little)
        u = std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 |
            std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
      else
        u = std::uint32_t(p[3]) | std::uint32_t(p[2]) << 8 |
            std::uint32_t(p[1]) << 16 | std::uint32_t(p[0]) << 24;
      c.pos += 4;
      float v = std::bit_cast<float>(u);
      out.at(x, y) = std::isfinite(v) ? v : kInvalidDisparity;
    }
  }
  // Construction above bypassed the value check; enforce it here.
  for (float v : out.values)
    if (std::isfinite(v) && v < 0.0f)
      throw Error("read_pfm: negative disparity in " + path.string());
  return out;
}

void write_pfm(const DisparityMap& map, const std::filesystem::path& path) {
  if (map.width <= 0 || map.height <= 0) throw Error("write_pfm: empty map");
  std::string header = "Pf\n" + std::to_string(map.width) + " " +
                       std::to_string(map.height) + "\n-1.0\n";
  std::vector<unsigned char> payload;
  payload.reserve(map.size() * 4);
  for (int file_row = 0; file_row < map.height; ++file_row) {
    const int y = map.height - 1 - file_row;
    for (int x = 0; x < map.width; ++x) {
      float v = map.at(x, y);
      if (!std::isfinite(v)) v = std::numeric_limits<float>::quiet_NaN();
      std::uint32_t u = std::bit_cast<std::uint32_t>(v);
      payload.push_back(static_cast<unsigned char>(u & 0xff));
      payload.push_back(static_cast<unsigned char>((u >> 8) & 0xff));
      payload.push_back(static_cast<unsigned char>((u >> 16) & 0xff));
      payload.push_back(static_cast<unsigned char>((u >> 24) & 0xff));
    }
  }
  write_bytes(path, header, payload);
}

std::array<float, 3> ramp_color(double t) {
  static constexpr std::array<std::array<float, 3>, 5> anchors = {{
      {0.267f, 0.005f, 0.329f},
      {0.229f, 0.322f, 0.546f},
      {0.128f, 0.567f, 0.551f},
      {0.369f, 0.789f, 0.383f},
      {0.993f, 0.906f, 0.144f},
  }};
  t = std::clamp(t, 0.0, 1.0);
  const double s = t * (anchors.size() - 1);
  const int lo = std::min(static_cast<int>(s), static_cast<int>(anchors.size()) - 2);
  const float f = static_cast<float>(s - lo);
  std::array<float, 3> out;
  for (int k = 0; k < 3; ++k)
    out[k] = anchors[lo][k] * (1.0f - f) + anchors[lo + 1][k] * f;
  return out;
}

void colorize(const DisparityMap& map, double d_lo, double d_hi,
              const std::filesystem::path& path, const LabelMap* overlay) {
  if (!(d_lo < d_hi)) throw Error("colorize: degenerate range");
  if (map.width <= 0 || map.height <= 0) throw Error("colorize: empty map");
  if (overlay && (overlay->width != map.width || overlay->height != map.height))
    throw Error("colorize: overlay dimensions differ");

  std::string header = "P6\n" + std::to_string(map.width) + " " +
                       std::to_string(map.height) + "\n255\n";
  std::vector<unsigned char> payload;
  payload.reserve(map.size() * 3);
  const double inv = 1.0 / (d_hi - d_lo);
  for (std::size_t i = 0; i < map.size(); ++i) {
    unsigned char rgb[3] = {0, 0, 0};
    const std::uint16_t label = overlay ? overlay->labels[i] : kLabelInRange;
    if (overlay && label == kLabelFront) {
      rgb[0] = rgb[1] = rgb[2] = 255;
    } else if (overlay && label == kLabelBehind) {
      // stays black
    } else if (disparity_valid(map.values[i])) {
      const auto c = ramp_color((map.values[i] - d_lo) * inv);
      for (int k = 0; k < 3; ++k)
        rgb[k] = static_cast<unsigned char>(std::lround(c[k] * 255.0f));
    }
    payload.insert(payload.end(), rgb, rgb + 3);
  }
  write_bytes(path, header, payload);
}

}  // namespace bi3d
