#include "lcc/phase.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

#include "lcc/error.hpp"

namespace lcc {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr const char* kPitchClasses[12] = {"C",  "C#", "D",  "D#", "E",  "F",
                                           "F#", "G",  "G#", "A",  "A#", "B"};

/// Wraps to (-pi, pi].
double wrap_phase(double x) {
  double r = std::remainder(x, kTwoPi);
  if (r <= -std::numbers::pi) r += kTwoPi;
  return r;
}

}  // namespace

const char* direction_name(BeatDirection d) {
  switch (d) {
    case BeatDirection::rgb: return "RGB";
    case BeatDirection::rbg: return "RBG";
    case BeatDirection::constant: return "constant";
  }
  return "unknown";
}

BeatDirection direction_for(double offset_hz) {
  if (std::abs(offset_hz) < kConstantHueHz) return BeatDirection::constant;
  return offset_hz > 0.0 ? BeatDirection::rgb : BeatDirection::rbg;
}

double phase_drift_hz(std::span<const Complex> series, double expected_advance,
                      double slice_seconds) {
  if (series.size() < 2 || !(slice_seconds > 0.0)) {
    throw Error(Errc::invalid_argument, "window too short");
  }
  double total = 0.0;
  for (std::size_t i = 1; i < series.size(); ++i) {
    const double advance = std::arg(series[i] * std::conj(series[i - 1]));
    total += wrap_phase(advance - expected_advance);
  }
  const double duration = static_cast<double>(series.size() - 1) * slice_seconds;
  return total / (kTwoPi * duration);
}

BeatMeasurement estimate_offset(const ComplexSpectrogram& spec, std::size_t bin) {
  if (bin >= spec.bins()) throw Error(Errc::invalid_argument, "bin out of range");
  const std::size_t usable = spec.full_columns();
  const double slice = spec.slice_seconds();
  if (usable < 2 || static_cast<double>(usable - 1) * slice < kMinDurationSeconds) {
    throw Error(Errc::invalid_argument, "window too short");
  }

  std::vector<Complex> series;
  series.reserve(usable);
  std::size_t excited = 0;
  for (std::size_t m = 0; m < usable; ++m) {
    const Complex c = spec.columns[m][bin];
    if (std::abs(c) >= kMinBinMagnitude) ++excited;
    series.push_back(c);
  }
  if (static_cast<double>(excited) < 0.9 * static_cast<double>(usable)) {
    throw Error(Errc::invalid_argument, "bin not excited");
  }

  // A tone exactly on the bin center still advances by 2*pi*k*H/N per slice.
  const std::size_t n = spec.frame_spec.fft_size;
  const std::size_t turns = (bin * spec.frame_spec.hop) % n;
  const double expected = kTwoPi * static_cast<double>(turns) / static_cast<double>(n);

  BeatMeasurement out;
  out.bin = bin;
  out.offset_hz = phase_drift_hz(series, expected, slice);
  out.cycles_per_second = std::abs(out.offset_hz);
  out.direction = direction_for(out.offset_hz);
  return out;
}

double note_frequency(int midi, double a4_hz) {
  return a4_hz * std::pow(2.0, (midi - 69) / 12.0);
}

std::string note_name(int midi) {
  const int pitch = ((midi % 12) + 12) % 12;
  const int octave = (midi - pitch) / 12 - 1;
  return std::string(kPitchClasses[pitch]) + std::to_string(octave);
}

int parse_note(const std::string& name) {
  static constexpr int kLetterOffsets[7] = {9, 11, 0, 2, 4, 5, 7};  // A..G
  if (name.empty()) throw Error(Errc::invalid_argument, "empty note name");
  const char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
  if (letter < 'A' || letter > 'G') throw Error(Errc::invalid_argument, "bad note name '" + name + "'");
  int pitch = kLetterOffsets[letter - 'A'];
  std::size_t pos = 1;
  if (pos < name.size() && (name[pos] == '#' || name[pos] == 'b')) {
    pitch += name[pos] == '#' ? 1 : -1;
    ++pos;
  }
  if (pos >= name.size()) throw Error(Errc::invalid_argument, "note '" + name + "' lacks an octave");
  int octave;
  try {
    std::size_t used = 0;
    octave = std::stoi(name.substr(pos), &used);
    if (used != name.size() - pos) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw Error(Errc::invalid_argument, "bad octave in note '" + name + "'");
  }
  return (octave + 1) * 12 + pitch;
}

int nearest_note(double freq_hz, double a4_hz) {
  return static_cast<int>(std::lround(69.0 + 12.0 * std::log2(freq_hz / a4_hz)));
}

double cents_between(double freq_hz, double reference_hz) {
  return 1200.0 * std::log2(freq_hz / reference_hz);
}

}  // namespace lcc
