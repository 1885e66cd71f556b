#pragma once

#include <cstdint>
#include <vector>

#include "lcc/audio.hpp"

namespace lcc {

// Deterministic test signals. All generators throw Errc::invalid_argument for a
// non-positive duration or any frequency at or above Nyquist.

/// amplitude * sin(2*pi*f*t + phase)
AudioBuffer tone(double freq_hz, double seconds, std::uint32_t sample_rate,
                 double amplitude = 1.0, double phase = 0.0);

/// Instantaneous frequency center * (1 + depth * sin(2*pi*mod_rate*t)).
AudioBuffer fm_tone(double center_hz, double depth, double mod_rate_hz, double seconds,
                    std::uint32_t sample_rate, double amplitude = 1.0);

/// Linear sweep from f0 to f1.
AudioBuffer chirp(double f0_hz, double f1_hz, double seconds, std::uint32_t sample_rate,
                  double amplitude = 1.0);

struct ChromaticScale {
  int first_midi = 48;  // C3
  int note_count = 36;
  double total_seconds = 12.0;
  double a4_hz = 440.0;
  double amplitude = 0.8;
  std::vector<double> detune_cents;  // per note, empty = in tune
};

/// Equal-length segments, one sine per semitone, each starting at phase 0.
AudioBuffer chromatic_scale(const ChromaticScale& params, std::uint32_t sample_rate);

enum class SynthKind { tone, fm_tone, chromatic_scale, chirp };

struct SynthParams {
  std::uint32_t sample_rate = 44100;
  double seconds = 1.0;
  double amplitude = 1.0;
  double freq_hz = 256.0;     // tone / fm center / chirp start
  double freq2_hz = 4096.0;   // chirp end
  double depth = 0.10;        // fm
  double mod_rate_hz = 2.0;   // fm
  double phase = 0.0;         // tone
  ChromaticScale scale;       // chromatic_scale (seconds taken from scale)
};

SynthKind parse_synth_kind(const std::string& name);
AudioBuffer synthesize(SynthKind kind, const SynthParams& params);

}  // namespace lcc
