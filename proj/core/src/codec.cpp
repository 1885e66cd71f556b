#include "lcc/codec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <numbers>
#include <optional>

#include "lcc/color.hpp"
#include "lcc/error.hpp"

namespace lcc {
namespace {

constexpr char kMagic[4] = {'C', 'S', 'P', 'C'};

class ByteWriter {
 public:
  explicit ByteWriter(std::size_t reserve) { bytes_.reserve(reserve); }

  template <typename T>
  void put(T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    std::uint8_t raw[sizeof(T)];
    std::memcpy(raw, &value, sizeof(T));
    // Host order is little-endian on every supported target; assert it.
    static_assert(std::endian::native == std::endian::little);
    bytes_.insert(bytes_.end(), raw, raw + sizeof(T));
  }
  void put_bytes(const char* p, std::size_t n) { bytes_.insert(bytes_.end(), p, p + n); }

  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    if (pos_ + sizeof(T) > bytes_.size()) throw Error(Errc::malformed, "malformed file: truncated");
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  const std::uint8_t* cursor() const { return bytes_.data() + pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const std::string& require(const Metadata& meta, const std::string& key) {
  auto it = meta.find(key);
  if (it == meta.end()) throw Error(Errc::not_invertible, "image metadata lacks '" + key + "'");
  return it->second;
}

std::uint64_t require_u64(const Metadata& meta, const std::string& key) {
  const std::string& v = require(meta, key);
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    throw Error(Errc::malformed, "bad metadata value for '" + key + "'");
  }
}

double require_double(const Metadata& meta, const std::string& key) {
  const std::string& v = require(meta, key);
  try {
    return std::stod(v);
  } catch (const std::exception&) {
    throw Error(Errc::malformed, "bad metadata value for '" + key + "'");
  }
}

}  // namespace

FrameSpec CspecFile::frame_spec() const {
  return FrameSpec{fft_size, hop, window};
}

void CspecFile::validate() const {
  if (version != kVersion) {
    throw Error(Errc::malformed, "malformed file: unsupported version " + std::to_string(version));
  }
  if (sample_rate == 0) throw Error(Errc::malformed, "malformed file: zero sample rate");
  try {
    frame_spec().validate();
  } catch (const Error& e) {
    throw Error(Errc::malformed, std::string("malformed file: ") + e.what());
  }
  if (!(a_ref > 0.0f) || !std::isfinite(a_ref)) {
    throw Error(Errc::malformed, "malformed file: a_ref must be positive");
  }
  if (frame_count != lcc::frame_count(original_length, frame_spec())) {
    throw Error(Errc::malformed, "malformed file: frame count " + std::to_string(frame_count) +
                                     " inconsistent with original length " +
                                     std::to_string(original_length));
  }
  const std::size_t bins = fft_size / 2 + 1;
  if (payload.size() != static_cast<std::size_t>(frame_count) * bins) {
    throw Error(Errc::malformed, "malformed file: payload size does not match header");
  }
}

std::vector<std::uint8_t> serialize_cspec(const CspecFile& file) {
  file.validate();
  ByteWriter w(CspecFile::kHeaderSize + file.payload.size() * 8);
  w.put_bytes(kMagic, 4);
  w.put(file.version);
  w.put(file.sample_rate);
  w.put(file.fft_size);
  w.put(file.hop);
  w.put(static_cast<std::uint8_t>(file.window));
  w.put(file.original_length);
  w.put(file.a_ref);
  w.put(file.frame_count);
  for (const auto& c : file.payload) {
    w.put(c.real());
    w.put(c.imag());
  }
  return w.take();
}

CspecFile parse_cspec(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < CspecFile::kHeaderSize || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(Errc::malformed, "malformed file: bad magic or short header");
  }
  ByteReader r(bytes.subspan(4));
  CspecFile file;
  file.version = r.get<std::uint16_t>();
  file.sample_rate = r.get<std::uint32_t>();
  file.fft_size = r.get<std::uint32_t>();
  file.hop = r.get<std::uint32_t>();
  const auto window = r.get<std::uint8_t>();
  if (window > static_cast<std::uint8_t>(Window::hann)) {
    throw Error(Errc::malformed, "malformed file: unknown window id");
  }
  file.window = static_cast<Window>(window);
  file.original_length = r.get<std::uint64_t>();
  file.a_ref = r.get<float>();
  file.frame_count = r.get<std::uint32_t>();

  if (file.fft_size < 2 || !is_power_of_two(file.fft_size)) {
    throw Error(Errc::malformed, "malformed file: bad fft size");
  }
  const std::size_t bins = file.fft_size / 2 + 1;
  const std::size_t expected = static_cast<std::size_t>(file.frame_count) * bins * 8;
  if (r.remaining() != expected) {
    throw Error(Errc::malformed, "malformed file: payload is " + std::to_string(r.remaining()) +
                                     " bytes, header implies " + std::to_string(expected));
  }
  file.payload.resize(static_cast<std::size_t>(file.frame_count) * bins);
  for (auto& c : file.payload) {
    const float re = r.get<float>();
    const float im = r.get<float>();
    c = {re, im};
  }
  file.validate();
  return file;
}

void write_cspec(const CspecFile& file, const std::filesystem::path& path) {
  write_file_bytes(path, serialize_cspec(file));
}

CspecFile read_cspec(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return parse_cspec(bytes);
}

CspecFile to_cspec(const ComplexSpectrogram& spec) {
  spec.validate();
  CspecFile file;
  file.sample_rate = spec.sample_rate;
  file.fft_size = static_cast<std::uint32_t>(spec.frame_spec.fft_size);
  file.hop = static_cast<std::uint32_t>(spec.frame_spec.hop);
  file.window = spec.frame_spec.window;
  file.original_length = spec.original_length;
  file.a_ref = static_cast<float>(spec.a_ref);
  file.frame_count = static_cast<std::uint32_t>(spec.columns.size());
  file.payload.reserve(spec.columns.size() * spec.bins());
  for (const auto& col : spec.columns) {
    for (const auto& c : col) {
      file.payload.emplace_back(static_cast<float>(c.real()), static_cast<float>(c.imag()));
    }
  }
  file.validate();
  return file;
}

ComplexSpectrogram from_cspec(const CspecFile& file) {
  file.validate();
  ComplexSpectrogram spec;
  spec.frame_spec = file.frame_spec();
  spec.sample_rate = file.sample_rate;
  spec.a_ref = file.a_ref;
  spec.original_length = file.original_length;
  const std::size_t bins = spec.bins();
  spec.columns.resize(file.frame_count);
  for (std::size_t f = 0; f < file.frame_count; ++f) {
    auto& col = spec.columns[f];
    col.resize(bins);
    for (std::size_t k = 0; k < bins; ++k) {
      const auto& c = file.payload[f * bins + k];
      col[k] = {c.real(), c.imag()};
    }
  }
  return spec;
}

EncodeResult encode(const AudioBuffer& audio, const FrameSpec& spec, double a_ref) {
  const double stored_ref = static_cast<float>(a_ref);
  EncodeResult out;
  out.spectrogram = analyze(audio, spec, stored_ref);
  out.file = to_cspec(out.spectrogram);
  return out;
}

AudioBuffer decode(const CspecFile& file) {
  file.validate();
  if (!file.frame_spec().invertible()) {
    throw Error(Errc::not_invertible,
                "non-invertible framing: decode needs a rectangular window and hop == fft size");
  }
  const ComplexSpectrogram spec = from_cspec(file);
  AudioBuffer out;
  out.sample_rate = file.sample_rate;
  out.samples.reserve(spec.columns.size() * file.fft_size);
  for (const auto& col : spec.columns) {
    const auto frame = inverse_transform(col, spec.a_ref);
    out.samples.insert(out.samples.end(), frame.begin(), frame.end());
  }
  out.samples.resize(file.original_length);
  return out;
}

std::vector<Rgb8> render_spectrogram_column(std::span<const Complex> column, std::size_t index,
                                            const FrameSpec& spec, const RenderOptions& opts,
                                            const LogAxisSpec* axis) {
  const ComplexColumn referenced = time_referenced(column, index, spec);
  if (opts.axis == AxisKind::linear) return render_column(referenced);
  if (axis == nullptr) throw Error(Errc::invalid_argument, "log render needs an axis");
  return render_column(warp_column(referenced, *axis, opts.mode));
}

ColorImage render_image(const ComplexSpectrogram& spec, const RenderOptions& opts) {
  spec.validate();
  if (spec.columns.empty()) throw Error(Errc::invalid_argument, "spectrogram has no columns");

  std::optional<LogAxisSpec> axis;
  std::size_t height = spec.bins();
  if (opts.axis == AxisKind::log) {
    axis = build_log_axis(opts.f_min, opts.f_max, opts.rows, spec.frame_spec, spec.sample_rate);
    height = opts.rows;
  }

  ColorImage img(spec.columns.size(), height);
  for (std::size_t x = 0; x < spec.columns.size(); ++x) {
    const auto col = render_spectrogram_column(spec.columns[x], x, spec.frame_spec, opts,
                                               axis ? &*axis : nullptr);
    img.set_column(x, col);
  }

  Metadata& m = img.metadata;
  m["a_ref"] = format_double(spec.a_ref);
  m["axis"] = opts.axis == AxisKind::linear ? "linear" : "log";
  m["fft_size"] = std::to_string(spec.frame_spec.fft_size);
  m["frame_count"] = std::to_string(spec.columns.size());
  m["hop"] = std::to_string(spec.frame_spec.hop);
  m["original_length"] = std::to_string(spec.original_length);
  m["sample_rate"] = std::to_string(spec.sample_rate);
  m["window"] = window_name(spec.frame_spec.window);
  if (opts.axis == AxisKind::log) {
    m["fmax"] = format_double(opts.f_max);
    m["fmin"] = format_double(opts.f_min);
    m["mode"] = mode_name(opts.mode);
    m["rows"] = std::to_string(opts.rows);
  }
  return img;
}

ImageDecodeResult decode_image(const ColorImage& img) {
  if (img.unknown_provenance) throw Error(Errc::not_invertible, "unknown provenance");
  const Metadata& m = img.metadata;
  if (require(m, "axis") != "linear") {
    throw Error(Errc::not_invertible, "log-frequency images cannot be decoded");
  }
  FrameSpec spec;
  spec.fft_size = require_u64(m, "fft_size");
  spec.hop = require_u64(m, "hop");
  spec.window = parse_window(require(m, "window"));
  spec.validate();
  if (!spec.invertible()) {
    throw Error(Errc::not_invertible,
                "non-invertible framing: decode needs a rectangular window and hop == fft size");
  }
  const auto sample_rate = static_cast<std::uint32_t>(require_u64(m, "sample_rate"));
  const std::uint64_t original_length = require_u64(m, "original_length");
  const double a_ref = require_double(m, "a_ref");
  if (img.height != spec.bins() || img.width != frame_count(original_length, spec)) {
    throw Error(Errc::malformed, "image size does not match its metadata");
  }

  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  constexpr double kLevelVar = 1.0 / (255.0 * 255.0 * 12.0);  // uniform rounding, one level

  ImageDecodeResult result;
  result.audio.sample_rate = sample_rate;
  result.audio.samples.reserve(img.width * spec.fft_size);
  double signal = 0.0, noise = 0.0;
  const std::size_t last = spec.bins() - 1;

  for (std::size_t x = 0; x < img.width; ++x) {
    const auto pixels = img.column(x);
    ComplexColumn col(pixels.size());
    for (std::size_t k = 0; k < pixels.size(); ++k) {
      const Rgb8 q = pixels[k];
      Hsb p = rgb_to_hsb(q);
      if (p.brightness == 0.0) continue;
      if (p.saturation < 1.0 && p.brightness < 1.0) {
        p.saturation = 1.0;
        ++result.unreachable_pixels;
      }
      if (p.saturation == 0.0) {
        p.saturation = 0.5 / 255.0;
        ++result.unreachable_pixels;
      }
      Complex c = hsb_to_complex(p);
      if (k == 0 || k == last) c = {c.real(), 0.0};
      col[k] = c;

      // Quantization model: amplitude error from the brightness or saturation
      // level, phase error from the hue step 1 / (6 * chroma).
      const double a = std::abs(c);
      const int hi = std::max({q.r, q.g, q.b});
      const int chroma = hi - std::min({q.r, q.g, q.b});
      double amp_var;
      if (p.brightness < 1.0) {
        const double d = a / (p.brightness * p.brightness);
        amp_var = d * d * kLevelVar;
      } else {
        const double d = a / (p.saturation * p.saturation);
        amp_var = d * d * kLevelVar;
      }
      const double hue_step = chroma > 0 ? 1.0 / (6.0 * chroma) : 1.0;
      const double phase_var = kTwoPi * kTwoPi * hue_step * hue_step / 12.0;
      const double weight = (k == 0 || k == last) ? 1.0 : 0.5;
      signal += weight * a * a;
      noise += weight * (amp_var + a * a * phase_var);
    }
    const auto frame = inverse_transform(col, a_ref);
    result.audio.samples.insert(result.audio.samples.end(), frame.begin(), frame.end());
  }
  result.audio.samples.resize(original_length);
  result.estimated_snr_db = noise > 0.0 ? 10.0 * std::log10(signal / noise)
                                        : std::numeric_limits<double>::infinity();
  return result;
}

}  // namespace lcc
