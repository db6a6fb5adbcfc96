#include <vponset/detector.hpp>
#include <vponset/eval.hpp>
#include <vponset/odf.hpp>
#include <vponset/peaks.hpp>
#include <vponset/stft.hpp>

#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>

namespace {

using namespace vponset;

// Noise with a loud burst every 300 ms.
AudioBuffer testAudio(double seconds, int rate = 44100)
{
  std::mt19937_64 rng(1);
  std::normal_distribution<double> noise(0.0, 0.01);
  AudioBuffer a;
  a.sampleRate = rate;
  a.samples.resize(static_cast<std::size_t>(seconds * rate));
  for (auto& s : a.samples) s = noise(rng);
  const auto period = static_cast<std::size_t>(0.3 * rate);
  for (std::size_t start = period / 2; start < a.samples.size(); start += period)
    for (std::size_t i = start; i < std::min(start + 88, a.samples.size()); ++i) a.samples[i] += 20.0 * noise(rng);
  return a;
}

OnsetList sortedTimes(std::size_t n, double span, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, span);
  std::vector<double> t(n);
  for (auto& x : t) x = u(rng);
  std::sort(t.begin(), t.end());
  return OnsetList{std::move(t), std::nullopt};
}

void BM_Stft(benchmark::State& state)
{
  const auto audio = testAudio(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(stft(audio, StftConfig{}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(audio.samples.size()));
}
BENCHMARK(BM_Stft)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_SpectralFlux(benchmark::State& state)
{
  const auto spec = stft(testAudio(10.0), StftConfig{});
  for (auto _ : state) benchmark::DoNotOptimize(spectralFlux(spec));
}
BENCHMARK(BM_SpectralFlux)->Unit(benchmark::kMillisecond);

void BM_HfcCurve(benchmark::State& state)
{
  const auto spec = stft(testAudio(10.0), StftConfig{});
  for (auto _ : state) benchmark::DoNotOptimize(hfcDetectionCurve(spec));
}
BENCHMARK(BM_HfcCurve)->Unit(benchmark::kMillisecond);

void BM_ComplexCurve(benchmark::State& state)
{
  const auto spec = stft(testAudio(10.0), StftConfig{});
  for (auto _ : state) benchmark::DoNotOptimize(complexDetectionCurve(spec));
}
BENCHMARK(BM_ComplexCurve)->Unit(benchmark::kMillisecond);

void BM_MatchOnsets(benchmark::State& state)
{
  const auto n = static_cast<std::size_t>(state.range(0));
  const double span = static_cast<double>(n) * 0.3;
  const auto refs = sortedTimes(n, span, 2);
  const auto preds = sortedTimes(n, span, 3);
  for (auto _ : state) benchmark::DoNotOptimize(matchOnsets(refs, preds, 0.05));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MatchOnsets)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_Detect(benchmark::State& state)
{
  const auto audio = testAudio(10.0);
  const auto kind = static_cast<DetectorKind>(state.range(0));
  auto cfg = DetectorConfig::defaultsFor(kind);
  cfg.refineWindowSec = state.range(1) / 1000.0;
  for (auto _ : state) benchmark::DoNotOptimize(detect(audio, cfg));
  state.SetLabel(std::string(toString(kind)) + (state.range(1) > 0 ? "+refine" : ""));
}
BENCHMARK(BM_Detect)
    ->Args({static_cast<int>(DetectorKind::Hfc), 0})
    ->Args({static_cast<int>(DetectorKind::Hfc), 30})
    ->Args({static_cast<int>(DetectorKind::Complex), 0})
    ->Args({static_cast<int>(DetectorKind::SpectralFlux), 0})
    ->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
