#include "lcc/stream.hpp"

#include <algorithm>
#include <cstring>

#include <json.hpp>

#include "lcc/error.hpp"
#include "lcc/image.hpp"
#include "lcc/phase.hpp"

namespace lcc {
namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::vector<std::uint8_t> text_bytes(const std::string& s) { return {s.begin(), s.end()}; }

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<std::uint8_t> serialize_frame(const StreamFrame& frame) {
  std::vector<std::uint8_t> out;
  out.reserve(kFrameHeaderSize + frame.payload.size());
  put_u32(out, static_cast<std::uint32_t>(5 + frame.payload.size()));
  out.push_back(static_cast<std::uint8_t>(frame.type));
  put_u32(out, frame.seq);
  out.insert(out.end(), frame.payload.begin(), frame.payload.end());
  return out;
}

std::optional<StreamFrame> parse_frame(std::span<const std::uint8_t> bytes, std::size_t& consumed) {
  consumed = 0;
  if (bytes.size() < 4) return std::nullopt;
  const std::uint32_t length = get_u32(bytes.data());
  if (length < 5) throw Error(Errc::malformed, "stream frame shorter than its header");
  if (bytes.size() < 4 + static_cast<std::size_t>(length)) return std::nullopt;
  const std::uint8_t type = bytes[4];
  if (type < 1 || type > 4) throw Error(Errc::malformed, "unknown stream frame type");

  StreamFrame frame;
  frame.type = static_cast<FrameType>(type);
  frame.seq = get_u32(bytes.data() + 5);
  frame.payload.assign(bytes.begin() + kFrameHeaderSize, bytes.begin() + 4 + length);
  consumed = 4 + length;
  return frame;
}

std::vector<std::uint8_t> column_payload(std::span<const Rgb8> column) {
  if (column.size() > 0xFFFF) throw Error(Errc::invalid_argument, "column too tall for the stream");
  std::vector<std::uint8_t> out;
  out.reserve(2 + 3 * column.size());
  put_u16(out, static_cast<std::uint16_t>(column.size()));
  for (const Rgb8& px : column) {
    out.push_back(px.r);
    out.push_back(px.g);
    out.push_back(px.b);
  }
  return out;
}

std::vector<Rgb8> parse_column_payload(std::span<const std::uint8_t> payload) {
  if (payload.size() < 2) throw Error(Errc::malformed, "column payload too short");
  const std::size_t rows = payload[0] | (payload[1] << 8);
  if (payload.size() != 2 + 3 * rows) throw Error(Errc::malformed, "column payload size mismatch");
  std::vector<Rgb8> out(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    out[i] = {payload[2 + 3 * i], payload[3 + 3 * i], payload[4 + 3 * i]};
  }
  return out;
}

std::vector<std::uint8_t> pcm_chunk(std::span<const std::int16_t> samples) {
  std::vector<std::uint8_t> out;
  out.reserve(4 + 2 * samples.size());
  put_u32(out, static_cast<std::uint32_t>(2 * samples.size()));
  for (std::int16_t s : samples) put_u16(out, static_cast<std::uint16_t>(s));
  return out;
}

SessionConfig SessionConfig::from_json(const std::string& line, const SessionConfig& base) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::malformed, std::string("malformed handshake: ") + e.what());
  }
  if (!j.is_object()) throw Error(Errc::malformed, "malformed handshake: expected a JSON object");

  SessionConfig c = base;
  try {
    if (j.contains("sample_rate")) c.sample_rate = j.at("sample_rate").get<std::uint32_t>();
    if (j.contains("fft_size")) {
      c.frame_spec.fft_size = j.at("fft_size").get<std::size_t>();
      if (!j.contains("hop")) c.frame_spec.hop = c.frame_spec.fft_size;
    }
    if (j.contains("hop")) c.frame_spec.hop = j.at("hop").get<std::size_t>();
    if (j.contains("window")) c.frame_spec.window = parse_window(j.at("window").get<std::string>());
    if (j.contains("a_ref")) c.a_ref = j.at("a_ref").get<double>();
    if (j.contains("axis")) {
      const auto axis = j.at("axis").get<std::string>();
      if (axis != "linear" && axis != "log") throw Error(Errc::invalid_argument, "unknown axis '" + axis + "'");
      c.render.axis = axis == "log" ? AxisKind::log : AxisKind::linear;
    }
    if (j.contains("mode")) c.render.mode = parse_mode(j.at("mode").get<std::string>());
    if (j.contains("fmin")) c.render.f_min = j.at("fmin").get<double>();
    if (j.contains("fmax")) c.render.f_max = j.at("fmax").get<double>();
    if (j.contains("rows")) c.render.rows = j.at("rows").get<std::size_t>();
    if (j.contains("a4")) c.a4_hz = j.at("a4").get<double>();
    if (j.contains("tuner")) c.tuner = j.at("tuner").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::malformed, std::string("malformed handshake: ") + e.what());
  }
  c.validate();
  return c;
}

SessionConfig SessionConfig::from_json(const std::string& line) {
  return from_json(line, SessionConfig{});
}

void SessionConfig::validate() const {
  if (sample_rate == 0) throw Error(Errc::invalid_argument, "sample rate must be positive");
  if (frame_spec.fft_size < kMinStreamFft || frame_spec.fft_size > kMaxStreamFft ||
      !is_power_of_two(frame_spec.fft_size)) {
    throw Error(Errc::invalid_argument,
                "unsupported fft_size " + std::to_string(frame_spec.fft_size) +
                    " (power of two in [32, 16384])");
  }
  frame_spec.validate();
  if (!(a_ref > 0.0)) throw Error(Errc::invalid_argument, "a_ref must be positive");
  if (!(a4_hz > 0.0)) throw Error(Errc::invalid_argument, "a4 must be positive");
  if (tuner != "auto") parse_note(tuner);
  if (render.axis == AxisKind::log) {
    build_log_axis(render.f_min, render.f_max, render.rows, frame_spec, sample_rate);
  }
}

std::string SessionConfig::to_text() const {
  Metadata m;
  m["a4"] = format_double(a4_hz);
  m["a_ref"] = format_double(a_ref);
  m["axis"] = render.axis == AxisKind::log ? "log" : "linear";
  m["fft_size"] = std::to_string(frame_spec.fft_size);
  m["hop"] = std::to_string(frame_spec.hop);
  m["sample_rate"] = std::to_string(sample_rate);
  m["tuner"] = tuner;
  m["window"] = window_name(frame_spec.window);
  if (render.axis == AxisKind::log) {
    m["fmax"] = format_double(render.f_max);
    m["fmin"] = format_double(render.f_min);
    m["mode"] = mode_name(render.mode);
    m["rows"] = std::to_string(render.rows);
  }
  return format_metadata(m);
}

StreamSession::StreamSession(SessionConfig base) : config_(std::move(base)) {}

StreamFrame StreamSession::make_frame(FrameType type, std::vector<std::uint8_t> payload) {
  return StreamFrame{type, seq_++, std::move(payload)};
}

std::vector<StreamFrame> StreamSession::open(const std::string& handshake_line) {
  std::vector<StreamFrame> out;
  if (open_ || closed_) {
    out.push_back(make_frame(FrameType::error, text_bytes("session already configured")));
    closed_ = true;
    return out;
  }
  try {
    config_ = SessionConfig::from_json(handshake_line, config_);
    if (config_.render.axis == AxisKind::log) {
      axis_ = build_log_axis(config_.render.f_min, config_.render.f_max, config_.render.rows,
                             config_.frame_spec, config_.sample_rate);
    }
  } catch (const Error& e) {
    out.push_back(make_frame(FrameType::error, text_bytes(e.what())));
    closed_ = true;
    return out;
  }
  open_ = true;
  out.push_back(make_frame(FrameType::config_ack, text_bytes(config_.to_text())));
  return out;
}

void StreamSession::emit_column(std::size_t index, std::vector<StreamFrame>& out) {
  const FrameSpec& spec = config_.frame_spec;
  const std::size_t start = index * spec.hop;
  std::vector<double> frame(spec.fft_size, 0.0);
  const std::size_t end = std::min(start + spec.fft_size, received_);
  if (end > start) {
    std::copy(samples_.begin() + static_cast<std::ptrdiff_t>(start - base_),
              samples_.begin() + static_cast<std::ptrdiff_t>(end - base_), frame.begin());
  }
  apply_window(frame, spec.window);
  const ComplexColumn coeffs = forward_transform(frame, static_cast<float>(config_.a_ref));
  const auto pixels = render_spectrogram_column(coeffs, index, spec, config_.render,
                                                axis_ ? &*axis_ : nullptr);
  out.push_back(make_frame(FrameType::column, column_payload(pixels)));
}

void StreamSession::emit_analysis(std::vector<StreamFrame>& out) {
  const std::size_t end = (next_analysis_ + 1) * config_.sample_rate;
  const std::size_t begin = end - config_.sample_rate;
  AudioBuffer window;
  window.sample_rate = config_.sample_rate;
  window.samples.assign(samples_.begin() + static_cast<std::ptrdiff_t>(begin - base_),
                        samples_.begin() + static_cast<std::ptrdiff_t>(end - base_));
  const TuningReport report = tuning_report(window, config_.a4_hz, {config_.tuner});
  const std::string text = "analysis end_sample=" + std::to_string(end) + "\n" + report.to_text();
  out.push_back(make_frame(FrameType::analysis, text_bytes(text)));
}

std::vector<StreamFrame> StreamSession::push(std::span<const std::int16_t> pcm) {
  std::vector<StreamFrame> out;
  if (!open_ || closed_) {
    out.push_back(make_frame(FrameType::error, text_bytes("session is not open")));
    closed_ = true;
    return out;
  }
  samples_.reserve(samples_.size() + pcm.size());
  for (std::int16_t s : pcm) samples_.push_back(pcm16_to_double(s));
  received_ += pcm.size();

  const FrameSpec& spec = config_.frame_spec;
  while (next_column_ * spec.hop + spec.fft_size <= received_) emit_column(next_column_++, out);
  while ((next_analysis_ + 1) * config_.sample_rate <= received_) {
    emit_analysis(out);
    ++next_analysis_;
  }

  const std::size_t keep_from =
      std::min(next_column_ * spec.hop, next_analysis_ * config_.sample_rate);
  if (keep_from > base_) {
    samples_.erase(samples_.begin(), samples_.begin() + static_cast<std::ptrdiff_t>(keep_from - base_));
    base_ = keep_from;
  }
  return out;
}

std::vector<StreamFrame> StreamSession::finish() {
  std::vector<StreamFrame> out;
  if (!open_ || closed_) {
    out.push_back(make_frame(FrameType::error, text_bytes("session is not open")));
    closed_ = true;
    return out;
  }
  while (next_column_ * config_.frame_spec.hop < received_) emit_column(next_column_++, out);
  closed_ = true;
  return out;
}

std::vector<StreamFrame> StreamSession::fail(const std::string& message) {
  std::vector<StreamFrame> out;
  out.push_back(make_frame(FrameType::error, text_bytes(message)));
  closed_ = true;
  return out;
}

}  // namespace lcc
