#include "vponset/detector.hpp"

#include "vponset/error.hpp"

#include <cmath>

namespace vponset {

std::string_view toString(DetectorKind kind) noexcept
{
  switch (kind)
  {
  case DetectorKind::Hfc: return "hfc";
  case DetectorKind::Complex: return "complex";
  case DetectorKind::SpectralFlux: return "spectral_flux";
  case DetectorKind::External: return "external";
  }
  return "unknown";
}

std::optional<DetectorKind> parseDetectorKind(std::string_view name) noexcept
{
  for (auto k : {DetectorKind::Hfc, DetectorKind::Complex, DetectorKind::SpectralFlux,
                 DetectorKind::External})
    if (toString(k) == name) return k;
  if (name == "sf") return DetectorKind::SpectralFlux;
  return std::nullopt;
}

DetectorConfig DetectorConfig::defaultsFor(DetectorKind kind)
{
  DetectorConfig cfg;
  cfg.kind = kind;
  switch (kind)
  {
  case DetectorKind::Hfc: cfg.peaks.threshold = 0.8; break;
  case DetectorKind::Complex: cfg.peaks.threshold = 0.7; break;
  case DetectorKind::SpectralFlux: cfg.peaks.threshold = 0.3; break;
  case DetectorKind::External:
    cfg.peaks.threshold = 0.5;
    cfg.peaks.minSeparationSec = kNeuralMinSeparationSec;
    break;
  }
  return cfg;
}

void DetectorConfig::validate() const
{
  peaks.validate();
  if (!(refineWindowSec >= 0.0) || !std::isfinite(refineWindowSec))
    throw ValidationError("refinement window must be non-negative");
  if (complexSmoothingFrames == 0 || complexSmoothingFrames % 2 == 0)
    throw ValidationError("complex smoothing width must be a positive odd number");
}

OnsetCurve detectionFunction(const Spectrogram& spec, const DetectorConfig& cfg)
{
  switch (cfg.kind)
  {
  case DetectorKind::Hfc: return hfcDetectionCurve(spec);
  case DetectorKind::Complex: return complexDetectionCurve(spec, cfg.complexSmoothingFrames);
  case DetectorKind::SpectralFlux: return spectralFlux(spec);
  case DetectorKind::External: break;
  }
  throw ValidationError("the external detector needs an imported curve");
}

Detection detect(const AudioBuffer& audio, const DetectorConfig& cfg)
{
  cfg.validate();
  if (cfg.kind == DetectorKind::External)
    throw ValidationError("the external detector needs an imported curve");
  const Spectrogram spec = stft(audio, cfg.stft);

  Detection d;
  d.curve = normalize(detectionFunction(spec, cfg));
  d.onsets = pickPeaks(d.curve, cfg.peaks);
  if (cfg.refineWindowSec > 0.0)
    d.onsets = refineOnsets(d.onsets, spectralFlux(spec), cfg.refineWindowSec);
  return d;
}

Detection detectFromCurve(const OnsetCurve& curve, const DetectorConfig& cfg,
                          const AudioBuffer* audio)
{
  cfg.validate();
  Detection d;
  d.curve = normalize(curve);
  d.onsets = pickPeaks(d.curve, cfg.peaks);
  if (cfg.refineWindowSec > 0.0)
  {
    if (audio == nullptr) throw ValidationError("refinement needs the source audio");
    d.onsets = refineOnsets(d.onsets, spectralFlux(stft(*audio, cfg.stft)), cfg.refineWindowSec);
  }
  return d;
}

} // namespace vponset
