#pragma once

#include "vponset/stft.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vponset {

enum class CurveKind
{
  SpectralFlux,
  Hfc,
  Complex,
  External,
};

std::string_view toString(CurveKind kind) noexcept;

/// Per-frame detection function, aligned to frame start times.
struct OnsetCurve
{
  std::vector<double> values;
  std::vector<double> frameTimes;
  CurveKind kind{CurveKind::External};

  std::size_t size() const noexcept { return values.size(); }
};

/// H(x) = (x + |x|) / 2.
constexpr double halfWaveRectify(double x) noexcept { return (x + (x < 0 ? -x : x)) / 2.0; }

/// SF(n) = sum_k H(|X(n,k)| - |X(n-1,k)|) over the retained bins, SF(0) = 0.
OnsetCurve spectralFlux(const Spectrogram& spec);

/// Raw high-frequency content per frame: sum_i i * |X(i)|, i from 0.
OnsetCurve hfc(const Spectrogram& spec);

/// Positive HFC flux weighted by the energy-normalised HFC of the current frame:
///   D(n) = H(HFC(n) - HFC(n-1)) * HFC(n) / max(E(n), eps),  E(n) = sum_i |X(n,i)|^2
/// with D(0) = 0.
OnsetCurve hfcDetectionCurve(const Spectrogram& spec, double eps = 1e-12);

/// Unsmoothed complex-domain deviation. The prediction for frame n keeps the
/// magnitude of frame n-1 and extrapolates the phase linearly,
/// 2*phi(n-1) - phi(n-2) wrapped to (-pi, pi]. CD(0) = CD(1) = 0.
OnsetCurve complexDeviation(const Spectrogram& spec);

/// Centred moving average with triangular weights over an odd window.
/// Weights are renormalised at the edges. A width of 1 is the identity.
std::vector<double> triangularSmooth(std::span<const double> values, std::size_t width);

/// complexDeviation followed by triangularSmooth(width).
OnsetCurve complexDetectionCurve(const Spectrogram& spec, std::size_t smoothingFrames = 3);

/// Min-max rescale to [0, 1]; constant curves become all zeros.
OnsetCurve normalize(const OnsetCurve& curve);

/// Wraps externally computed activations. Throws ValidationError on a
/// length mismatch, non-increasing times, or negative / non-finite values.
OnsetCurve importExternalCurve(std::vector<double> values, std::vector<double> frameTimes);

/// Text format: one "time<TAB>value" line per frame, '#' comments ignored.
/// Values are written with enough digits to round-trip exactly.
std::string formatCurveText(const OnsetCurve& curve);
/// Parses the text format into an external curve. Throws ParseError or
/// ValidationError.
OnsetCurve parseCurveText(std::string_view text);

OnsetCurve readCurveFile(const std::string& path);
void writeCurveFile(const std::string& path, const OnsetCurve& curve);

} // namespace vponset
