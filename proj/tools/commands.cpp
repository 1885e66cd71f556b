#include "commands.hpp"

#include <signal.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "lcc/audio.hpp"
#include "lcc/codec.hpp"
#include "lcc/error.hpp"
#include "lcc/phase.hpp"
#include "lcc/server.hpp"
#include "lcc/stream.hpp"
#include "lcc/synth.hpp"

namespace lcc::cli {
namespace {

using Clock = std::chrono::steady_clock;

struct FramingFlags {
  std::size_t fft_size = 2048;
  std::size_t hop = 0;  // 0 = fft size
  std::string window = "rect";
  double a_ref = 1.0;

  FrameSpec spec() const {
    try {
      FrameSpec s;
      s.fft_size = fft_size;
      s.hop = hop == 0 ? fft_size : hop;
      s.window = parse_window(window);
      s.validate();
      return s;
    } catch (const Error& e) {
      throw CLI::ValidationError("framing", e.what());
    }
  }
};

struct RenderFlags {
  std::string axis = "linear";
  std::string mode = "rect";
  double f_min = 27.5;
  double f_max = 4186.0;
  std::size_t rows = 512;

  RenderOptions options() const {
    RenderOptions o;
    if (axis != "linear" && axis != "log") {
      throw CLI::ValidationError("--axis", "must be linear or log");
    }
    o.axis = axis == "log" ? AxisKind::log : AxisKind::linear;
    try {
      o.mode = parse_mode(mode);
    } catch (const Error& e) {
      throw CLI::ValidationError("--mode", e.what());
    }
    o.f_min = f_min;
    o.f_max = f_max;
    o.rows = rows;
    return o;
  }
};

void add_framing(CLI::App* cmd, FramingFlags& f) {
  cmd->add_option("--fft-size", f.fft_size, "samples per slice (power of two >= 32)");
  cmd->add_option("--hop", f.hop, "samples between slices (default: fft size)");
  cmd->add_option("--window", f.window, "rect or hann (hann is display-only)");
  cmd->add_option("--aref", f.a_ref, "amplitude mapped to the A = 1 color breakpoint");
}

void add_render(CLI::App* cmd, RenderFlags& r) {
  cmd->add_option("--axis", r.axis, "linear or log frequency axis");
  cmd->add_option("--mode", r.mode, "log-axis interpolation: rect or polar");
  cmd->add_option("--fmin", r.f_min, "log axis lower frequency (Hz)");
  cmd->add_option("--fmax", r.f_max, "log axis upper frequency (Hz)");
  cmd->add_option("--rows", r.rows, "log axis rows");
}

bool has_magic(const std::vector<std::uint8_t>& bytes, const char* magic, std::size_t n) {
  return bytes.size() >= n && std::memcmp(bytes.data(), magic, n) == 0;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct EncodeCmd {
  std::string input, cspec, png;
  FramingFlags framing;
  RenderFlags render;

  int operator()(std::ostream& out, std::ostream& err) const {
    const FrameSpec spec = framing.spec();
    const RenderOptions opts = render.options();
    WavReadInfo info;
    const AudioBuffer audio = read_wav(input, &info);
    if (info.mixed_down) {
      err << "warning: " << info.channels << "-channel input mixed down to mono\n";
    }

    const auto start = Clock::now();
    const EncodeResult enc = encode(audio, spec, framing.a_ref);
    write_cspec(enc.file, cspec);
    if (!png.empty()) export_png(render_image(enc.spectrogram, opts), png);
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();

    const double audio_seconds = audio.duration_seconds();
    char line[256];
    std::snprintf(line, sizeof line,
                  "encoded %zu samples (%.3f s audio) into %zu columns x %zu bins in %.3f s: "
                  "%.0f samples/s, %.1fx real time\n",
                  audio.samples.size(), audio_seconds, enc.spectrogram.columns.size(),
                  spec.bins(), seconds, audio.samples.size() / std::max(seconds, 1e-9),
                  audio_seconds / std::max(seconds, 1e-9));
    out << line;
    if (!spec.invertible()) {
      err << "warning: framing is display-only; decode needs a rectangular window and hop == fft size\n";
    }
    return kOk;
  }
};

struct DecodeCmd {
  std::string input, output;

  int operator()(std::ostream& out, std::ostream& err) const {
    const auto bytes = read_file_bytes(input);
    AudioBuffer audio;
    if (has_magic(bytes, "CSPC", 4)) {
      audio = decode(parse_cspec(bytes));
      out << "decoded " << audio.samples.size() << " samples from CSPEC (lossless)\n";
    } else if (has_magic(bytes, "\x89PNG", 4)) {
      const ColorImage img = decode_png(bytes);
      const ImageDecodeResult r = decode_image(img);
      audio = r.audio;
      err << "warning: lossy path, 8-bit PNG colors only approximate the coefficients\n";
      char line[160];
      std::snprintf(line, sizeof line,
                    "decoded %zu samples from PNG; estimated SNR %.1f dB (%zu pixels snapped)\n",
                    audio.samples.size(), r.estimated_snr_db, r.unreachable_pixels);
      out << line;
    } else {
      throw Error(Errc::malformed, "malformed file: neither CSPEC nor PNG");
    }
    write_wav(audio, output);
    return kOk;
  }
};

struct AnalyzeCmd {
  std::string input;
  double a4 = 440.0;
  std::string notes = "auto";
  std::size_t segments = 0;
  std::size_t fft_size = 2048;
  std::size_t hop = 512;
  double in_tune_cents = 2.0;

  int operator()(std::ostream& out, std::ostream& err) const {
    WavReadInfo info;
    const AudioBuffer audio = read_wav(input, &info);
    if (info.mixed_down) err << "warning: multichannel input mixed down to mono\n";

    std::vector<std::string> list;
    if (notes == "auto") {
      list.assign(segments == 0 ? 1 : segments, "auto");
    } else {
      list = split_list(notes);
      if (segments != 0 && segments != list.size()) {
        throw CLI::ValidationError("--segments", "must match the number of listed notes");
      }
    }
    TuningOptions opts;
    opts.fft_size = fft_size;
    opts.hop = hop;
    opts.in_tune_cents = in_tune_cents;
    out << tuning_report(audio, a4, list, opts).to_text();
    return kOk;
  }
};

struct SchematicCmd {
  BeatSchematicOptions opts;
  std::string output;

  int operator()(std::ostream& out, std::ostream&) const {
    const BeatSchematic s = render_beat_schematic(opts);
    export_png(s.image, output);
    out << "beat schematic " << s.image.width << "x" << s.image.height << " seed " << opts.seed
        << " -> " << output << "\n";
    return kOk;
  }
};

struct ServeCmd {
  std::string host = "127.0.0.1";
  std::uint16_t port = 8765;
  FramingFlags framing;
  RenderFlags render;
  double a4 = 440.0;

  int operator()(std::ostream& out, std::ostream&) const {
    ServerOptions opts;
    opts.host = host;
    opts.port = port;
    opts.defaults.frame_spec = framing.spec();
    opts.defaults.a_ref = framing.a_ref;
    opts.defaults.render = render.options();
    opts.defaults.a4_hz = a4;

    // Block the stop signals before the worker threads exist, then wait for one.
    sigset_t stop_signals;
    sigemptyset(&stop_signals);
    sigaddset(&stop_signals, SIGINT);
    sigaddset(&stop_signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

    StreamServer server(opts);
    const std::uint16_t bound = server.listen();
    out << "listening on " << host << ":" << bound << "\n" << std::flush;
    std::thread loop([&] { server.serve(); });
    int sig = 0;
    sigwait(&stop_signals, &sig);
    server.stop();
    loop.join();
    out << "stopped\n";
    return kOk;
  }
};

struct SynthCmd {
  std::string kind = "tone";
  std::string output;
  std::string format = "float";
  SynthParams params;
  std::string first_note = "C3";
  std::string detunes;
  bool seconds_given = false;

  int operator()(std::ostream& out, std::ostream&) const {
    SynthParams p = params;
    p.scale.first_midi = parse_note(first_note);
    // A chromatic run defaults to a 12 s sweep unless a duration is given.
    p.scale.total_seconds = seconds_given ? p.seconds : 12.0;
    p.scale.a4_hz = 440.0;
    p.scale.amplitude = p.amplitude;
    if (!detunes.empty()) {
      for (const auto& d : split_list(detunes)) p.scale.detune_cents.push_back(std::stod(d));
    }
    const AudioBuffer audio = synthesize(parse_synth_kind(kind), p);
    if (format != "float" && format != "pcm16") {
      throw CLI::ValidationError("--format", "must be float or pcm16");
    }
    write_wav(audio, output, format == "pcm16" ? SampleFormat::pcm16 : SampleFormat::float32);
    out << "wrote " << audio.samples.size() << " samples to " << output << "\n";
    return kOk;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"lcc: log complex color spectrograms", "lcc"};
  app.require_subcommand(1);

  EncodeCmd encode_cmd;
  auto* enc = app.add_subcommand("encode", "WAV -> CSPEC (+ optional PNG)");
  enc->add_option("input", encode_cmd.input, "input WAV")->required();
  enc->add_option("cspec", encode_cmd.cspec, "output CSPEC container")->required();
  enc->add_option("png", encode_cmd.png, "output PNG image");
  add_framing(enc, encode_cmd.framing);
  add_render(enc, encode_cmd.render);

  DecodeCmd decode_cmd;
  auto* dec = app.add_subcommand("decode", "CSPEC or PNG -> 32-bit float WAV");
  dec->add_option("input", decode_cmd.input, "input .cspec or .png")->required();
  dec->add_option("output", decode_cmd.output, "output WAV")->required();

  AnalyzeCmd analyze_cmd;
  auto* ana = app.add_subcommand("analyze", "per-note tuning report");
  ana->add_option("input", analyze_cmd.input, "input WAV")->required();
  ana->add_option("--a4", analyze_cmd.a4, "tuning standard for A4 (Hz)");
  ana->add_option("--notes", analyze_cmd.notes, "'auto' or a comma-separated note list");
  ana->add_option("--segments", analyze_cmd.segments, "number of equal segments");
  ana->add_option("--fft-size", analyze_cmd.fft_size, "projection length");
  ana->add_option("--hop", analyze_cmd.hop, "samples between projections");
  ana->add_option("--in-tune-cents", analyze_cmd.in_tune_cents, "in-tune threshold");

  SchematicCmd schematic_cmd;
  auto* sch = app.add_subcommand("schematic", "render the phase/amplitude beat schematic");
  sch->add_option("--seed", schematic_cmd.opts.seed, "random seed (default 1)");
  sch->add_option("--out", schematic_cmd.output, "output PNG")->required();
  sch->add_option("--slices", schematic_cmd.opts.slices, "time slices (default 128)");
  sch->add_option("--spans", schematic_cmd.opts.coeff_spans, "coefficient spans (default 4)");
  sch->add_option("--lines", schematic_cmd.opts.lines_per_coeff, "lines per span (default 25)");

  ServeCmd serve_cmd;
  auto* srv = app.add_subcommand("serve", "stream columns for live PCM over TCP");
  srv->add_option("--host", serve_cmd.host, "bind address (default 127.0.0.1)");
  srv->add_option("--port", serve_cmd.port, "TCP port (0 = ephemeral)");
  srv->add_option("--a4", serve_cmd.a4, "tuning standard for analysis frames");
  add_framing(srv, serve_cmd.framing);
  add_render(srv, serve_cmd.render);

  SynthCmd synth_cmd;
  auto* syn = app.add_subcommand("synth", "write a test signal");
  syn->add_option("--kind", synth_cmd.kind, "tone, fm_tone, chromatic_scale or chirp");
  syn->add_option("--out", synth_cmd.output, "output WAV")->required();
  syn->add_option("--format", synth_cmd.format, "float or pcm16");
  syn->add_option("--rate", synth_cmd.params.sample_rate, "sample rate");
  auto* seconds_opt = syn->add_option("--seconds", synth_cmd.params.seconds,
                                      "duration (chromatic_scale default: 12)");
  syn->add_option("--amp", synth_cmd.params.amplitude, "peak amplitude");
  syn->add_option("--freq", synth_cmd.params.freq_hz, "tone / FM center / chirp start (Hz)");
  syn->add_option("--freq2", synth_cmd.params.freq2_hz, "chirp end (Hz)");
  syn->add_option("--phase", synth_cmd.params.phase, "tone initial phase (rad)");
  syn->add_option("--depth", synth_cmd.params.depth, "FM depth (fraction)");
  syn->add_option("--mod-rate", synth_cmd.params.mod_rate_hz, "FM rate (Hz)");
  syn->add_option("--first-note", synth_cmd.first_note, "chromatic scale start");
  syn->add_option("--notes", synth_cmd.params.scale.note_count, "chromatic scale length");
  syn->add_option("--detunes", synth_cmd.detunes, "comma-separated per-note detunes (cents)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*enc) return encode_cmd(out, err);
    if (*dec) return decode_cmd(out, err);
    if (*ana) return analyze_cmd(out, err);
    if (*sch) return schematic_cmd(out, err);
    if (*srv) return serve_cmd(out, err);
    if (*syn) {
      synth_cmd.seconds_given = seconds_opt->count() > 0;
      return synth_cmd(out, err);
    }
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsage;
}

}  // namespace lcc::cli
