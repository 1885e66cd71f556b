#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "lcc/error.hpp"
#include "lcc/phase.hpp"

namespace lcc {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kMaxPeakFft = 65536;

struct Segment {
  std::size_t begin = 0;
  std::size_t end = 0;
};

std::vector<Segment> split(std::size_t length, std::size_t count,
                           const std::vector<std::size_t>& onsets) {
  std::vector<Segment> out(count);
  if (onsets.empty()) {
    const std::size_t each = length / count;
    for (std::size_t i = 0; i < count; ++i) {
      out[i] = {i * each, i + 1 == count ? length : (i + 1) * each};
    }
    return out;
  }
  if (onsets.size() != count) {
    throw Error(Errc::invalid_argument, "one onset per note is required");
  }
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t end = i + 1 < count ? onsets[i + 1] : length;
    if (onsets[i] > end || end > length) {
      throw Error(Errc::invalid_argument, "onsets must be ascending and inside the signal");
    }
    out[i] = {onsets[i], end};
  }
  return out;
}

/// Strongest spectral peak of a segment, refined by a parabola through the log
/// magnitudes. Returns 0 when nothing rises above the magnitude floor.
double peak_frequency(std::span<const double> samples, std::uint32_t sample_rate) {
  std::size_t n = 32;
  while (n * 2 <= samples.size() && n * 2 <= kMaxPeakFft) n *= 2;
  if (samples.size() < n) return 0.0;

  std::vector<double> frame(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(n));
  apply_window(frame, Window::hann);
  const ComplexColumn spec = forward_transform(frame, 1.0);

  std::size_t best = 1;
  for (std::size_t k = 2; k + 1 < spec.size(); ++k) {
    if (std::abs(spec[k]) > std::abs(spec[best])) best = k;
  }
  if (std::abs(spec[best]) < kMinBinMagnitude) return 0.0;

  double shift = 0.0;
  const double a = std::log(std::abs(spec[best - 1]) + 1e-300);
  const double b = std::log(std::abs(spec[best]));
  const double c = std::log(std::abs(spec[best + 1]) + 1e-300);
  const double denom = a - 2.0 * b + c;
  if (denom < 0.0) shift = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
  return (static_cast<double>(best) + shift) * sample_rate / static_cast<double>(n);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::in_tune: return "in-tune";
    case Verdict::sharp: return "sharp";
    case Verdict::flat: return "flat";
    case Verdict::unmeasurable: return "unmeasurable";
  }
  return "unknown";
}

std::string TuningReport::to_text() const {
  std::string out = "tuning a4_hz=" + fixed(standard_a4, 3) +
                    " notes=" + std::to_string(notes.size()) + "\n";
  for (std::size_t i = 0; i < notes.size(); ++i) {
    const NoteReading& n = notes[i];
    out += "index=" + std::to_string(i) + " note=" + n.name + " target_hz=" + fixed(n.target_hz, 4);
    if (n.verdict != Verdict::unmeasurable) {
      out += " offset_hz=" + fixed(n.measured_offset_hz, 4) + " cents=" + fixed(n.cents, 2);
    }
    out += std::string(" verdict=") + verdict_name(n.verdict);
    if (!n.reason.empty()) out += " reason=" + n.reason;
    out += "\n";
  }
  return out;
}

TuningReport tuning_report(const AudioBuffer& audio, double standard_a4,
                           const std::vector<std::string>& notes, const TuningOptions& opts) {
  audio.validate();
  if (!(standard_a4 > 0.0)) throw Error(Errc::invalid_argument, "tuning standard must be positive");
  if (notes.empty()) throw Error(Errc::invalid_argument, "no notes requested");
  const FrameSpec frames{opts.fft_size, opts.hop, opts.window};
  frames.validate();

  const std::uint32_t fs = audio.sample_rate;
  const double slice = static_cast<double>(opts.hop) / fs;

  TuningReport report;
  report.standard_a4 = standard_a4;
  const auto segments = split(audio.samples.size(), notes.size(), opts.onsets);

  for (std::size_t i = 0; i < notes.size(); ++i) {
    NoteReading reading;
    const Segment seg = segments[i];
    const std::span<const double> samples(audio.samples.data() + seg.begin, seg.end - seg.begin);
    const bool automatic = notes[i] == "auto";
    auto unmeasurable = [&](const char* why) {
      reading.verdict = Verdict::unmeasurable;
      reading.reason = why;
      report.notes.push_back(reading);
    };

    int midi = 0;
    if (!automatic) {
      midi = parse_note(notes[i]);
      reading.name = note_name(midi);
      reading.target_hz = note_frequency(midi, standard_a4);
    } else {
      reading.name = "?";
    }

    if (static_cast<double>(samples.size()) / fs < kMinDurationSeconds) {
      unmeasurable("segment-too-short");
      continue;
    }
    if (automatic) {
      const double peak = peak_frequency(samples, fs);
      if (peak <= 0.0) {
        unmeasurable("bin-not-excited");
        continue;
      }
      midi = nearest_note(peak, standard_a4);
      reading.name = note_name(midi);
      reading.target_hz = note_frequency(midi, standard_a4);
    }
    if (!(reading.target_hz < 0.5 * fs)) {
      unmeasurable("above-nyquist");
      continue;
    }
    if (samples.size() < opts.fft_size + opts.hop) {
      unmeasurable("too-few-slices");
      continue;
    }

    // One projection per slice onto the note's own frequency.
    const std::size_t count = (samples.size() - opts.fft_size) / opts.hop + 1;
    std::vector<Complex> series;
    series.reserve(count);
    std::size_t excited = 0;
    std::vector<double> frame(opts.fft_size);
    for (std::size_t m = 0; m < count; ++m) {
      std::copy_n(samples.begin() + static_cast<std::ptrdiff_t>(m * opts.hop), opts.fft_size,
                  frame.begin());
      apply_window(frame, opts.window);
      const Complex c = project_frequency(frame, reading.target_hz, fs, 1.0);
      if (std::abs(c) >= kMinBinMagnitude) ++excited;
      series.push_back(c);
    }
    if (static_cast<double>(excited) < 0.9 * static_cast<double>(count)) {
      unmeasurable("bin-not-excited");
      continue;
    }

    const double expected = kTwoPi * reading.target_hz * slice;
    reading.measured_offset_hz = phase_drift_hz(series, expected, slice);
    reading.cents = cents_between(reading.target_hz + reading.measured_offset_hz, reading.target_hz);
    if (std::abs(reading.cents) <= opts.in_tune_cents) {
      reading.verdict = Verdict::in_tune;
    } else {
      reading.verdict = reading.cents > 0.0 ? Verdict::sharp : Verdict::flat;
    }
    report.notes.push_back(reading);
  }
  return report;
}

}  // namespace lcc
