#include "lcc/dsp.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "lcc/error.hpp"

namespace lcc {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kHermitianTolerance = 1e-6;

// FFTW planning is not thread-safe but executing a finished plan on new arrays
// is, so plans are created once per size under a lock and never mutated.
struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.inverse);
    }
  }

  const PlanPair& get(std::size_t n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;

    const int size = static_cast<int>(n);
    double* real = fftw_alloc_real(n);
    fftw_complex* spec = fftw_alloc_complex(n / 2 + 1);
    constexpr unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair p;
    p.forward = fftw_plan_dft_r2c_1d(size, real, spec, flags);
    p.inverse = fftw_plan_dft_c2r_1d(size, spec, real, flags);
    fftw_free(real);
    fftw_free(spec);
    if (!p.forward || !p.inverse) throw Error(Errc::invalid_argument, "FFT planning failed");
    return plans_.emplace(n, p).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<std::size_t, PlanPair> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

void check_length(std::size_t n) {
  if (n < 2 || !is_power_of_two(n)) {
    throw Error(Errc::invalid_argument,
                "frame length must be a power of two, got " + std::to_string(n));
  }
}

}  // namespace

const char* window_name(Window w) {
  switch (w) {
    case Window::rectangular: return "rectangular";
    case Window::hann: return "hann";
  }
  return "unknown";
}

Window parse_window(const std::string& name) {
  if (name == "rectangular" || name == "rect") return Window::rectangular;
  if (name == "hann") return Window::hann;
  throw Error(Errc::invalid_argument, "unknown window '" + name + "'");
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void FrameSpec::validate() const {
  if (fft_size < 32 || !is_power_of_two(fft_size)) {
    throw Error(Errc::invalid_argument,
                "fft size must be a power of two >= 32, got " + std::to_string(fft_size));
  }
  if (hop < 1 || hop > fft_size) {
    throw Error(Errc::invalid_argument, "hop must be in [1, fft size], got " + std::to_string(hop));
  }
  if (window != Window::rectangular && window != Window::hann) {
    throw Error(Errc::invalid_argument, "unknown window id");
  }
}

double bin_spacing(const FrameSpec& spec, std::uint32_t sample_rate) {
  return static_cast<double>(sample_rate) / static_cast<double>(spec.fft_size);
}

double bin_center(std::size_t bin, const FrameSpec& spec, std::uint32_t sample_rate) {
  return static_cast<double>(bin) * static_cast<double>(sample_rate) /
         static_cast<double>(spec.fft_size);
}

std::size_t frame_count(std::size_t length, const FrameSpec& spec) {
  return (length + spec.hop - 1) / spec.hop;
}

void apply_window(std::span<double> frame, Window window) {
  if (window == Window::rectangular) return;
  const double n = static_cast<double>(frame.size());
  for (std::size_t i = 0; i < frame.size(); ++i) {
    frame[i] *= 1.0 - std::cos(kTwoPi * static_cast<double>(i) / n);
  }
}

std::vector<double> extract_frame(std::span<const double> samples, std::size_t index,
                                  const FrameSpec& spec) {
  std::vector<double> frame(spec.fft_size, 0.0);
  const std::size_t start = index * spec.hop;
  if (start < samples.size()) {
    const std::size_t n = std::min(spec.fft_size, samples.size() - start);
    std::copy_n(samples.begin() + static_cast<std::ptrdiff_t>(start), n, frame.begin());
  }
  apply_window(frame, spec.window);
  return frame;
}

std::vector<std::vector<double>> frame_signal(const AudioBuffer& audio, const FrameSpec& spec) {
  spec.validate();
  if (audio.samples.empty()) throw Error(Errc::invalid_argument, "empty input");
  const std::size_t count = frame_count(audio.samples.size(), spec);
  std::vector<std::vector<double>> frames;
  frames.reserve(count);
  for (std::size_t k = 0; k < count; ++k) frames.push_back(extract_frame(audio.samples, k, spec));
  return frames;
}

ComplexColumn forward_transform(std::span<const double> frame, double a_ref) {
  const std::size_t n = frame.size();
  check_length(n);
  if (!(a_ref > 0.0)) throw Error(Errc::invalid_argument, "a_ref must be positive");

  std::vector<double> input(frame.begin(), frame.end());
  ComplexColumn out(n / 2 + 1);
  fftw_execute_dft_r2c(plan_cache().get(n).forward, input.data(), as_fftw(out.data()));

  const double edge = 1.0 / (static_cast<double>(n) * a_ref);
  const double interior = 2.0 * edge;
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] *= (k == 0 || k == n / 2) ? edge : interior;
  }
  out.front().imag(0.0);
  out.back().imag(0.0);
  return out;
}

std::vector<double> inverse_transform(std::span<const Complex> coeffs, double a_ref) {
  if (coeffs.size() < 2) throw Error(Errc::invalid_argument, "too few coefficients");
  const std::size_t n = (coeffs.size() - 1) * 2;
  check_length(n);
  if (!(a_ref > 0.0)) throw Error(Errc::invalid_argument, "a_ref must be positive");
  if (std::abs(coeffs.front().imag()) > kHermitianTolerance ||
      std::abs(coeffs.back().imag()) > kHermitianTolerance) {
    throw Error(Errc::invalid_argument, "invalid hermitian boundary");
  }

  // Undo the amplitude convention into an unnormalized half spectrum.
  const double scale = static_cast<double>(n) * a_ref;
  ComplexColumn half(coeffs.size());
  for (std::size_t k = 0; k < half.size(); ++k) {
    const bool edge = k == 0 || k == n / 2;
    half[k] = coeffs[k] * (edge ? scale : 0.5 * scale);
  }
  half.front().imag(0.0);
  half.back().imag(0.0);

  std::vector<double> out(n);
  fftw_execute_dft_c2r(plan_cache().get(n).inverse, as_fftw(half.data()), out.data());
  const double inv_n = 1.0 / static_cast<double>(n);
  for (double& v : out) v *= inv_n;
  return out;
}

Complex project_frequency(std::span<const double> frame, double freq_hz, std::uint32_t sample_rate,
                          double a_ref) {
  if (frame.empty()) throw Error(Errc::invalid_argument, "empty frame");
  if (!(a_ref > 0.0)) throw Error(Errc::invalid_argument, "a_ref must be positive");
  if (!(freq_hz > 0.0) || !(freq_hz < 0.5 * sample_rate)) {
    throw Error(Errc::invalid_argument, "projection frequency must lie in (0, fs/2)");
  }

  const double w = kTwoPi * freq_hz / sample_rate;
  const double coeff = 2.0 * std::cos(w);
  double s1 = 0.0, s2 = 0.0;
  for (double x : frame) {
    const double s0 = x + coeff * s1 - s2;
    s2 = s1;
    s1 = s0;
  }
  // y = sum x[n] e^{iw(N-1-n)}; rotate back to a frame-start phase reference.
  const Complex y = s1 - std::polar(1.0, -w) * s2;
  const double n = static_cast<double>(frame.size());
  const Complex x = y * std::polar(1.0, -w * (n - 1.0));
  return x * (2.0 / (n * a_ref));
}

ComplexColumn time_referenced(std::span<const Complex> column, std::size_t index,
                              const FrameSpec& spec) {
  ComplexColumn out(column.begin(), column.end());
  const std::uint64_t n = spec.fft_size;
  const std::uint64_t shift = (static_cast<std::uint64_t>(index) * spec.hop) % n;
  if (shift == 0) return out;
  for (std::size_t k = 1; k < out.size(); ++k) {
    const std::uint64_t turns = (static_cast<std::uint64_t>(k) * shift) % n;
    if (turns == 0) continue;
    out[k] *= std::polar(1.0, -kTwoPi * static_cast<double>(turns) / static_cast<double>(n));
  }
  return out;
}

void ComplexSpectrogram::validate() const {
  frame_spec.validate();
  if (sample_rate == 0) throw Error(Errc::invalid_argument, "sample rate must be positive");
  if (!(a_ref > 0.0)) throw Error(Errc::invalid_argument, "a_ref must be positive");
  for (const auto& col : columns) {
    if (col.size() != bins()) throw Error(Errc::invalid_argument, "column length mismatch");
    if (col.front().imag() != 0.0 || col.back().imag() != 0.0) {
      throw Error(Errc::invalid_argument, "invalid hermitian boundary");
    }
  }
}

std::size_t ComplexSpectrogram::full_columns() const {
  if (original_length < frame_spec.fft_size) return 0;
  const std::size_t fit = (original_length - frame_spec.fft_size) / frame_spec.hop + 1;
  return std::min(fit, columns.size());
}

ComplexSpectrogram analyze(const AudioBuffer& audio, const FrameSpec& spec, double a_ref) {
  audio.validate();
  const auto frames = frame_signal(audio, spec);
  ComplexSpectrogram out;
  out.frame_spec = spec;
  out.sample_rate = audio.sample_rate;
  out.a_ref = a_ref;
  out.original_length = audio.samples.size();
  out.columns.reserve(frames.size());
  for (const auto& f : frames) out.columns.push_back(forward_transform(f, a_ref));
  return out;
}

}  // namespace lcc
