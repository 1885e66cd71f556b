#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lcc/codec.hpp"
#include "lcc/color.hpp"
#include "lcc/dsp.hpp"
#include "lcc/log_warp.hpp"

namespace lcc {

// Server -> client framing, all integers little-endian:
//   length u32 (bytes that follow) | type u8 | seq u32 | payload
// Column payload:   rows u16 | rows * (r, g, b), bottom to top
// Analysis payload: tuning report text (key=value)
// Ack payload:      canonical session config text (key=value)
// Error payload:    UTF-8 message
enum class FrameType : std::uint8_t { column = 1, analysis = 2, config_ack = 3, error = 4 };

struct StreamFrame {
  FrameType type = FrameType::error;
  std::uint32_t seq = 0;
  std::vector<std::uint8_t> payload;

  std::string text() const { return {payload.begin(), payload.end()}; }
};

inline constexpr std::size_t kFrameHeaderSize = 9;  // length + type + seq

std::vector<std::uint8_t> serialize_frame(const StreamFrame& frame);

/// Parses one frame from the front of `bytes`; nullopt if incomplete.
std::optional<StreamFrame> parse_frame(std::span<const std::uint8_t> bytes, std::size_t& consumed);

std::vector<std::uint8_t> column_payload(std::span<const Rgb8> column);
std::vector<Rgb8> parse_column_payload(std::span<const std::uint8_t> payload);

// Client -> server: one JSON handshake line, then PCM chunks
//   length u32 (bytes) | s16le samples
// A zero-length chunk ends the stream.
std::vector<std::uint8_t> pcm_chunk(std::span<const std::int16_t> samples);

struct SessionConfig {
  std::uint32_t sample_rate = 44100;
  FrameSpec frame_spec;
  double a_ref = 1.0;
  RenderOptions render;
  double a4_hz = 440.0;
  std::string tuner = "auto";  // note name or "auto"

  /// Keys: sample_rate, fft_size, hop, window, a_ref, axis, mode, fmin, fmax,
  /// rows, a4, tuner. Unknown keys are ignored; missing keys keep the defaults of `base`.
  static SessionConfig from_json(const std::string& line, const SessionConfig& base);
  static SessionConfig from_json(const std::string& line);
  void validate() const;
  std::string to_text() const;
};

inline constexpr std::size_t kMinStreamFft = 32;
inline constexpr std::size_t kMaxStreamFft = 16384;

// One client session: ordered ingestion of PCM and emission of frames with a
// strictly increasing sequence number. Columns match `render_image` for the
// same samples and config; an analysis frame follows every sample_rate samples.
class StreamSession {
 public:
  explicit StreamSession(SessionConfig base = {});

  /// Returns a config ack, or an error frame (after which the session is closed).
  std::vector<StreamFrame> open(const std::string& handshake_line);
  std::vector<StreamFrame> push(std::span<const std::int16_t> pcm);
  /// Emits the zero-padded tail columns, like the offline encoder does.
  std::vector<StreamFrame> finish();
  /// Error frame for a protocol violation; closes the session.
  std::vector<StreamFrame> fail(const std::string& message);

  bool is_open() const { return open_; }
  bool is_closed() const { return closed_; }
  const SessionConfig& config() const { return config_; }
  std::size_t columns_emitted() const { return next_column_; }
  std::size_t samples_received() const { return received_; }

 private:
  StreamFrame make_frame(FrameType type, std::vector<std::uint8_t> payload);
  void emit_column(std::size_t index, std::vector<StreamFrame>& out);
  void emit_analysis(std::vector<StreamFrame>& out);

  SessionConfig config_;
  std::optional<LogAxisSpec> axis_;
  bool open_ = false;
  bool closed_ = false;
  std::uint32_t seq_ = 0;
  std::vector<double> samples_;  // samples_[0] is absolute sample `base_`
  std::size_t base_ = 0;
  std::size_t received_ = 0;
  std::size_t next_column_ = 0;
  std::size_t next_analysis_ = 0;
};

}  // namespace lcc
