#include "vponset/stft.hpp"

#include "vponset/error.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace vponset {

namespace {

// FFTW planning is not thread-safe; execution with new arrays is. Plans are
// created once per size and kept for the life of the process.
class PlanCache
{
public:
  ~PlanCache()
  {
    for (auto& [size, plan] : mPlans) fftw_destroy_plan(plan);
  }

  fftw_plan forSize(std::size_t n)
  {
    std::lock_guard lock(mMutex);
    if (auto it = mPlans.find(n); it != mPlans.end()) return it->second;
    std::vector<double> in(n);
    std::vector<fftw_complex> out(n / 2 + 1);
    fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), out.data(),
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw Error("FFTW failed to create a plan of size " + std::to_string(n));
    mPlans.emplace(n, plan);
    return plan;
  }

private:
  std::mutex mMutex;
  std::map<std::size_t, fftw_plan> mPlans;
};

PlanCache& planCache()
{
  static PlanCache cache;
  return cache;
}

std::size_t msToSamples(double ms, int sampleRate)
{
  return static_cast<std::size_t>(std::llround(ms * sampleRate / 1000.0));
}

} // namespace

std::string_view toString(WindowKind kind) noexcept
{
  switch (kind)
  {
  case WindowKind::Hann: return "hann";
  case WindowKind::Rectangular: return "rectangular";
  }
  return "unknown";
}

std::optional<WindowKind> parseWindowKind(std::string_view name) noexcept
{
  if (name == "hann") return WindowKind::Hann;
  if (name == "rectangular" || name == "rect") return WindowKind::Rectangular;
  return std::nullopt;
}

std::size_t StftConfig::windowSamples(int sampleRate) const
{
  return msToSamples(windowMs, sampleRate);
}

std::size_t StftConfig::hopSamples(int sampleRate) const
{
  return std::max<std::size_t>(1, msToSamples(effectiveHopMs(), sampleRate));
}

void StftConfig::validate(int sampleRate) const
{
  const double hop = effectiveHopMs();
  if (!(windowMs > 0.0) || !std::isfinite(windowMs))
    throw ValidationError("window length must be positive");
  if (!(hop > 0.0) || !std::isfinite(hop)) throw ValidationError("hop length must be positive");
  if (hop > windowMs) throw ValidationError("hop must not exceed the window length");
  if (sampleRate <= 0) throw ValidationError("sample rate must be positive");
  if (windowSamples(sampleRate) < 2)
    throw ValidationError("window of " + std::to_string(windowMs) + " ms is shorter than 2 samples at " +
                          std::to_string(sampleRate) + " Hz");
}

std::size_t frameCount(std::size_t length, std::size_t windowLength,
                       std::size_t hopLength) noexcept
{
  if (length == 0 || hopLength == 0) return 0;
  if (length <= windowLength) return 1;
  return (length + hopLength - 1) / hopLength;
}

std::vector<double> makeWindow(WindowKind kind, std::size_t length)
{
  std::vector<double> w(length, 1.0);
  if (kind == WindowKind::Hann)
  {
    for (std::size_t i = 0; i < length; ++i)
      w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                  static_cast<double>(length));
  }
  return w;
}

Grid<double> frameSignal(const AudioBuffer& audio, const StftConfig& cfg)
{
  audio.validate();
  cfg.validate(audio.sampleRate);

  const std::size_t win = cfg.windowSamples(audio.sampleRate);
  const std::size_t hop = cfg.hopSamples(audio.sampleRate);
  const std::size_t n = frameCount(audio.samples.size(), win, hop);
  const auto window = makeWindow(cfg.window, win);

  Grid<double> frames(n, win);
  for (std::size_t f = 0; f < n; ++f)
  {
    const std::size_t start = f * hop;
    const std::size_t avail = std::min(win, audio.samples.size() - start);
    auto row = frames.row(f);
    for (std::size_t i = 0; i < avail; ++i) row[i] = audio.samples[start + i] * window[i];
  }
  return frames;
}

Spectrogram stft(const AudioBuffer& audio, const StftConfig& cfg)
{
  Grid<double> frames = frameSignal(audio, cfg);

  Spectrogram spec;
  spec.config = cfg;
  spec.sampleRate = audio.sampleRate;
  spec.windowLength = frames.cols();
  spec.hopLength = cfg.hopSamples(audio.sampleRate);
  spec.bins = Grid<std::complex<double>>(frames.rows(), spec.windowLength / 2 + 1);
  spec.frameTimes.resize(frames.rows());

  fftw_plan plan = planCache().forSize(spec.windowLength);
  for (std::size_t f = 0; f < frames.rows(); ++f)
  {
    // std::complex<double> is layout-compatible with fftw_complex.
    fftw_execute_dft_r2c(plan, frames.row(f).data(),
                         reinterpret_cast<fftw_complex*>(spec.bins.row(f).data()));
    spec.frameTimes[f] =
        static_cast<double>(f * spec.hopLength) / static_cast<double>(audio.sampleRate);
  }
  return spec;
}

Grid<double> magnitude(const Spectrogram& spec)
{
  Grid<double> mag(spec.bins.rows(), spec.bins.cols());
  auto src = spec.bins.data();
  auto dst = mag.data();
  std::transform(src.begin(), src.end(), dst.begin(),
                 [](const std::complex<double>& z) { return std::abs(z); });
  return mag;
}

} // namespace vponset
