#pragma once

#include "vponset/audio.hpp"
#include "vponset/grid.hpp"

#include <complex>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace vponset {

enum class WindowKind
{
  Hann,
  Rectangular,
};

std::string_view toString(WindowKind kind) noexcept;
std::optional<WindowKind> parseWindowKind(std::string_view name) noexcept;

/// Analysis parameters in milliseconds; converted to samples per file.
struct StftConfig
{
  double windowMs{11.0};
  /// Unset means half the window (50% overlap).
  std::optional<double> hopMs{};
  WindowKind window{WindowKind::Hann};

  double effectiveHopMs() const noexcept { return hopMs.value_or(windowMs / 2.0); }

  /// Window length in samples, rounded to nearest.
  std::size_t windowSamples(int sampleRate) const;
  /// Hop length in samples, rounded to nearest and at least 1.
  std::size_t hopSamples(int sampleRate) const;

  /// Checks positivity, hop <= window and a window of at least 2 samples
  /// at the given rate. Throws ValidationError.
  void validate(int sampleRate) const;
};

/// Number of frames produced for a signal of `length` samples: a single
/// frame when the window covers the whole signal, otherwise one frame per
/// hop start inside the signal.
std::size_t frameCount(std::size_t length, std::size_t windowLength,
                       std::size_t hopLength) noexcept;

/// Periodic window of the given length.
std::vector<double> makeWindow(WindowKind kind, std::size_t length);

/// Frame i covers samples [i*hop, i*hop + win); the tail is zero-padded and
/// every frame is multiplied by the analysis window.
Grid<double> frameSignal(const AudioBuffer& audio, const StftConfig& cfg);

struct Spectrogram
{
  /// (frame, bin) with bins 0..N/2 of an N-point DFT, N = window length.
  Grid<std::complex<double>> bins;
  /// Start time of each frame in seconds.
  std::vector<double> frameTimes;
  StftConfig config;
  int sampleRate{0};
  std::size_t windowLength{0};
  std::size_t hopLength{0};

  std::size_t numFrames() const noexcept { return bins.rows(); }
  std::size_t numBins() const noexcept { return bins.cols(); }
  double hopSeconds() const noexcept
  {
    return sampleRate > 0 ? static_cast<double>(hopLength) / sampleRate : 0.0;
  }
};

Spectrogram stft(const AudioBuffer& audio, const StftConfig& cfg);

/// Element-wise complex modulus.
Grid<double> magnitude(const Spectrogram& spec);

} // namespace vponset
