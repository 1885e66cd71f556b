#include <benchmark/benchmark.h>

#include <complex>
#include <random>

#include "lcc/codec.hpp"
#include "lcc/color.hpp"
#include "lcc/image.hpp"
#include "lcc/stream.hpp"
#include "lcc/synth.hpp"

namespace {

const lcc::AudioBuffer& ten_seconds() {
  static const auto audio = lcc::fm_tone(256.0, 0.10, 2.0, 10.0, 44100, 0.8);
  return audio;
}

void BM_Encode10s(benchmark::State& state) {
  const lcc::FrameSpec spec{static_cast<std::size_t>(state.range(0)),
                            static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(lcc::encode(ten_seconds(), spec));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(ten_seconds().samples.size()));
}
BENCHMARK(BM_Encode10s)->Arg(512)->Arg(2048)->Arg(8192)->Unit(benchmark::kMillisecond);

void BM_RenderLinear(benchmark::State& state) {
  const auto enc = lcc::encode(ten_seconds(), lcc::FrameSpec{});
  for (auto _ : state) benchmark::DoNotOptimize(lcc::render_image(enc.spectrogram, {}));
}
BENCHMARK(BM_RenderLinear)->Unit(benchmark::kMillisecond);

void BM_RenderLog(benchmark::State& state) {
  const auto enc = lcc::encode(ten_seconds(), lcc::FrameSpec{});
  lcc::RenderOptions opts;
  opts.axis = lcc::AxisKind::log;
  opts.mode = state.range(0) ? lcc::InterpolationMode::polar : lcc::InterpolationMode::rectangular;
  for (auto _ : state) benchmark::DoNotOptimize(lcc::render_image(enc.spectrogram, opts));
}
BENCHMARK(BM_RenderLog)->ArgName("polar")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_EncodePng(benchmark::State& state) {
  const auto img = lcc::render_image(lcc::encode(ten_seconds(), lcc::FrameSpec{}).spectrogram, {});
  for (auto _ : state) benchmark::DoNotOptimize(lcc::encode_png(img));
}
BENCHMARK(BM_EncodePng)->Unit(benchmark::kMillisecond);

void BM_ColorMap(benchmark::State& state) {
  std::mt19937_64 gen(1);
  std::lognormal_distribution<double> amp(0.0, 2.0);
  std::uniform_real_distribution<double> phase(-3.14159, 3.14159);
  std::vector<std::complex<double>> values(4096);
  for (auto& v : values) v = std::polar(amp(gen), phase(gen));
  for (auto _ : state) {
    for (const auto& v : values) {
      benchmark::DoNotOptimize(lcc::hsb_to_rgb(lcc::complex_to_hsb(v)));
    }
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(values.size()));
}
BENCHMARK(BM_ColorMap);

void BM_SessionPush(benchmark::State& state) {
  std::vector<std::int16_t> pcm(ten_seconds().samples.size());
  for (std::size_t i = 0; i < pcm.size(); ++i) pcm[i] = lcc::double_to_pcm16(ten_seconds().samples[i]);
  const std::size_t chunk = 4096;
  for (auto _ : state) {
    lcc::StreamSession session;
    session.open("{}");
    for (std::size_t i = 0; i < pcm.size(); i += chunk) {
      const std::size_t n = std::min(chunk, pcm.size() - i);
      benchmark::DoNotOptimize(session.push(std::span(pcm).subspan(i, n)));
    }
    benchmark::DoNotOptimize(session.finish());
  }
}
BENCHMARK(BM_SessionPush)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
