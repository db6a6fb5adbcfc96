#pragma once

#include "vponset/odf.hpp"
#include "vponset/peaks.hpp"
#include "vponset/stft.hpp"

#include <optional>
#include <string_view>

namespace vponset {

enum class DetectorKind
{
  Hfc,
  Complex,
  SpectralFlux,
  External,
};

std::string_view toString(DetectorKind kind) noexcept;
std::optional<DetectorKind> parseDetectorKind(std::string_view name) noexcept;

/// Everything needed to turn audio (or an imported curve) into onsets.
struct DetectorConfig
{
  DetectorKind kind{DetectorKind::Hfc};
  StftConfig stft{};
  PeakConfig peaks{};
  /// Spectral-flux refinement window; 0 disables refinement.
  double refineWindowSec{0.0};
  /// Triangular smoothing width applied to the complex-domain curve.
  std::size_t complexSmoothingFrames{3};

  /// Tuned defaults: 11 ms frames, threshold 0.8 (HFC) / 0.7 (complex),
  /// 90 ms minimum separation for external activation curves.
  static DetectorConfig defaultsFor(DetectorKind kind);

  void validate() const;
};

inline constexpr double kNeuralMinSeparationSec = 0.090;

struct Detection
{
  /// Normalised detection curve the peaks were picked from.
  OnsetCurve curve;
  OnsetList onsets;
};

/// Raw (unnormalised) detection function for a DSP detector.
OnsetCurve detectionFunction(const Spectrogram& spec, const DetectorConfig& cfg);

/// Full DSP pipeline: STFT, detection function, normalisation, peak picking,
/// minimum separation, optional spectral-flux refinement.
Detection detect(const AudioBuffer& audio, const DetectorConfig& cfg);

/// Pipeline for an externally computed curve. `audio` is only needed when
/// refinement is enabled (the spectral flux comes from it).
Detection detectFromCurve(const OnsetCurve& curve, const DetectorConfig& cfg,
                          const AudioBuffer* audio = nullptr);

} // namespace vponset
