#include "lcc/synth.hpp"

#include <cmath>
#include <numbers>

#include "lcc/error.hpp"

namespace lcc {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t sample_count(double seconds, std::uint32_t sample_rate) {
  if (!(seconds > 0.0)) throw Error(Errc::invalid_argument, "duration must be positive");
  if (sample_rate == 0) throw Error(Errc::invalid_argument, "sample rate must be positive");
  return static_cast<std::size_t>(std::llround(seconds * sample_rate));
}

void check_frequency(double f, std::uint32_t sample_rate) {
  if (!(f > 0.0)) throw Error(Errc::invalid_argument, "frequency must be positive");
  if (f >= 0.5 * sample_rate) throw Error(Errc::invalid_argument, "frequency at or above Nyquist");
}

}  // namespace

AudioBuffer tone(double freq_hz, double seconds, std::uint32_t sample_rate, double amplitude,
                 double phase) {
  const std::size_t n = sample_count(seconds, sample_rate);
  check_frequency(freq_hz, sample_rate);
  AudioBuffer out;
  out.sample_rate = sample_rate;
  out.samples.resize(n);
  const double w = kTwoPi * freq_hz / sample_rate;
  for (std::size_t i = 0; i < n; ++i) {
    out.samples[i] = amplitude * std::sin(w * static_cast<double>(i) + phase);
  }
  return out;
}

AudioBuffer fm_tone(double center_hz, double depth, double mod_rate_hz, double seconds,
                    std::uint32_t sample_rate, double amplitude) {
  const std::size_t n = sample_count(seconds, sample_rate);
  if (!(depth >= 0.0 && depth < 1.0)) throw Error(Errc::invalid_argument, "depth must be in [0, 1)");
  if (!(mod_rate_hz > 0.0)) throw Error(Errc::invalid_argument, "modulation rate must be positive");
  check_frequency(center_hz * (1.0 + depth), sample_rate);

  AudioBuffer out;
  out.sample_rate = sample_rate;
  out.samples.resize(n);
  // Phase is the integral of 2*pi*fc*(1 + d*sin(2*pi*fm*t)).
  const double beta = center_hz * depth / mod_rate_hz;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    const double phase =
        kTwoPi * center_hz * t + beta * (1.0 - std::cos(kTwoPi * mod_rate_hz * t));
    out.samples[i] = amplitude * std::sin(phase);
  }
  return out;
}

AudioBuffer chirp(double f0_hz, double f1_hz, double seconds, std::uint32_t sample_rate,
                  double amplitude) {
  const std::size_t n = sample_count(seconds, sample_rate);
  check_frequency(f0_hz, sample_rate);
  check_frequency(f1_hz, sample_rate);
  AudioBuffer out;
  out.sample_rate = sample_rate;
  out.samples.resize(n);
  const double rate = (f1_hz - f0_hz) / seconds;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    out.samples[i] = amplitude * std::sin(kTwoPi * (f0_hz * t + 0.5 * rate * t * t));
  }
  return out;
}

AudioBuffer chromatic_scale(const ChromaticScale& params, std::uint32_t sample_rate) {
  if (params.note_count <= 0) throw Error(Errc::invalid_argument, "note count must be positive");
  if (!params.detune_cents.empty() &&
      params.detune_cents.size() != static_cast<std::size_t>(params.note_count)) {
    throw Error(Errc::invalid_argument, "one detune value per note required");
  }
  const std::size_t total = sample_count(params.total_seconds, sample_rate);
  const std::size_t segment = total / static_cast<std::size_t>(params.note_count);
  if (segment == 0) throw Error(Errc::invalid_argument, "scale too short for its note count");

  AudioBuffer out;
  out.sample_rate = sample_rate;
  out.samples.resize(segment * static_cast<std::size_t>(params.note_count));
  for (int note = 0; note < params.note_count; ++note) {
    const int midi = params.first_midi + note;
    const double detune = params.detune_cents.empty() ? 0.0 : params.detune_cents[note];
    const double f = params.a4_hz * std::pow(2.0, (midi - 69) / 12.0 + detune / 1200.0);
    check_frequency(f, sample_rate);
    const double w = kTwoPi * f / sample_rate;
    double* dst = out.samples.data() + static_cast<std::size_t>(note) * segment;
    for (std::size_t i = 0; i < segment; ++i) {
      dst[i] = params.amplitude * std::sin(w * static_cast<double>(i));
    }
  }
  return out;
}

SynthKind parse_synth_kind(const std::string& name) {
  if (name == "tone") return SynthKind::tone;
  if (name == "fm_tone" || name == "fm") return SynthKind::fm_tone;
  if (name == "chromatic_scale" || name == "scale") return SynthKind::chromatic_scale;
  if (name == "chirp") return SynthKind::chirp;
  throw Error(Errc::invalid_argument, "unknown signal kind '" + name + "'");
}

AudioBuffer synthesize(SynthKind kind, const SynthParams& p) {
  switch (kind) {
    case SynthKind::tone:
      return tone(p.freq_hz, p.seconds, p.sample_rate, p.amplitude, p.phase);
    case SynthKind::fm_tone:
      return fm_tone(p.freq_hz, p.depth, p.mod_rate_hz, p.seconds, p.sample_rate, p.amplitude);
    case SynthKind::chromatic_scale:
      return chromatic_scale(p.scale, p.sample_rate);
    case SynthKind::chirp:
      return chirp(p.freq_hz, p.freq2_hz, p.seconds, p.sample_rate, p.amplitude);
  }
  throw Error(Errc::invalid_argument, "unknown signal kind");
}

}  // namespace lcc
