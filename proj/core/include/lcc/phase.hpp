#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lcc/dsp.hpp"
#include "lcc/image.hpp"

namespace lcc {

// Hue cycling direction of a bin: RGB when the tone sits above the bin center,
// RBG below, constant when centered.
enum class BeatDirection { rgb, rbg, constant };

const char* direction_name(BeatDirection d);

struct BeatMeasurement {
  std::size_t bin = 0;
  double offset_hz = 0.0;
  double cycles_per_second = 0.0;
  BeatDirection direction = BeatDirection::constant;
};

/// |offset| below this is reported as a constant hue.
inline constexpr double kConstantHueHz = 0.05;
inline constexpr double kMinBinMagnitude = 1e-3;
inline constexpr double kMinDurationSeconds = 0.25;

// Sum of per-slice phase advances in excess of `expected_advance`, each wrapped
// to (-pi, pi], divided by 2*pi*duration. Valid while the true offset stays below
// 1 / (2 * slice_seconds).
double phase_drift_hz(std::span<const Complex> series, double expected_advance,
                      double slice_seconds);

BeatDirection direction_for(double offset_hz);

/// Beat frequency of one bin over the full columns of a spectrogram.
/// Errors: "bin not excited", "window too short".
BeatMeasurement estimate_offset(const ComplexSpectrogram& spec, std::size_t bin);

// Equal temperament helpers; MIDI 69 = A4.
double note_frequency(int midi, double a4_hz);
std::string note_name(int midi);
int parse_note(const std::string& name);
int nearest_note(double freq_hz, double a4_hz);
double cents_between(double freq_hz, double reference_hz);

enum class Verdict { in_tune, sharp, flat, unmeasurable };
const char* verdict_name(Verdict v);

struct NoteReading {
  std::string name;
  double target_hz = 0.0;
  double measured_offset_hz = 0.0;
  double cents = 0.0;
  Verdict verdict = Verdict::unmeasurable;
  std::string reason;  // why a note is unmeasurable
};

struct TuningReport {
  double standard_a4 = 440.0;
  std::vector<NoteReading> notes;

  /// Canonical text: a header line, then one line of key=value pairs per note.
  std::string to_text() const;
};

struct TuningOptions {
  std::size_t fft_size = 2048;
  std::size_t hop = 512;
  Window window = Window::hann;
  double in_tune_cents = 2.0;
  /// Segment start sample indices; empty = equal segments, one per note entry.
  std::vector<std::size_t> onsets;
};

// One segment per entry of `notes`. An entry is a note name ("A4", "C#5") or
// "auto" to pick the nearest equal-tempered note to the segment's spectral peak.
// Each segment is projected onto its target frequency slice by slice and the
// projection's phase drift gives the offset.
TuningReport tuning_report(const AudioBuffer& audio, double standard_a4,
                           const std::vector<std::string>& notes,
                           const TuningOptions& opts = {});

struct BeatSchematicOptions {
  std::size_t slices = 128;
  std::size_t coeff_spans = 4;
  std::size_t lines_per_coeff = 25;
  std::uint64_t seed = 1;
  double spacing_hz = 44100.0 / 2048.0;
};

struct SchematicLine {
  std::size_t row = 0;       // image row, 0 = top
  double offset_hz = 0.0;    // from the nearest coefficient center
  double phase = 0.0;        // random initial phase
  bool color = true;         // phase beat (color) or amplitude beat (gray)
  bool at_center = false;
};

struct BeatSchematic {
  ColorImage image;
  std::vector<SchematicLine> lines;  // one per row
  std::size_t center_row = 0;        // dashed coefficient-center line
};

// Width = slices spanning a nominal second; height = coeff_spans *
// lines_per_coeff. Each span between coefficient centers is divided into lines
// at seeded-uniform frequencies (the first at the center itself) with seeded
// random phases. The top 5/8 of rows draw hue beats against the nearest center,
// the bottom 3/8 draw gray amplitude beats against a center-frequency reference.
BeatSchematic render_beat_schematic(const BeatSchematicOptions& opts = {});

}  // namespace lcc
