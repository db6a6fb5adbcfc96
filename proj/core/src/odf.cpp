#include "vponset/odf.hpp"

#include "vponset/error.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <sstream>

namespace vponset {

namespace {

OnsetCurve emptyCurveLike(const Spectrogram& spec, CurveKind kind)
{
  OnsetCurve c;
  c.kind = kind;
  c.frameTimes = spec.frameTimes;
  c.values.assign(spec.numFrames(), 0.0);
  return c;
}

double wrapPhase(double x) noexcept
{
  constexpr double twoPi = 2.0 * std::numbers::pi;
  return x - twoPi * std::ceil((x - std::numbers::pi) / twoPi);
}

} // namespace

std::string_view toString(CurveKind kind) noexcept
{
  switch (kind)
  {
  case CurveKind::SpectralFlux: return "spectral_flux";
  case CurveKind::Hfc: return "hfc";
  case CurveKind::Complex: return "complex";
  case CurveKind::External: return "external";
  }
  return "unknown";
}

OnsetCurve spectralFlux(const Spectrogram& spec)
{
  OnsetCurve c = emptyCurveLike(spec, CurveKind::SpectralFlux);
  for (std::size_t n = 1; n < spec.numFrames(); ++n)
  {
    auto cur = spec.bins.row(n);
    auto prev = spec.bins.row(n - 1);
    double sum = 0.0;
    for (std::size_t k = 0; k < cur.size(); ++k)
      sum += halfWaveRectify(std::abs(cur[k]) - std::abs(prev[k]));
    c.values[n] = sum;
  }
  return c;
}

OnsetCurve hfc(const Spectrogram& spec)
{
  OnsetCurve c = emptyCurveLike(spec, CurveKind::Hfc);
  for (std::size_t n = 0; n < spec.numFrames(); ++n)
  {
    auto row = spec.bins.row(n);
    double sum = 0.0;
    for (std::size_t i = 1; i < row.size(); ++i) sum += static_cast<double>(i) * std::abs(row[i]);
    c.values[n] = sum;
  }
  return c;
}

OnsetCurve hfcDetectionCurve(const Spectrogram& spec, double eps)
{
  const OnsetCurve content = hfc(spec);
  OnsetCurve c = emptyCurveLike(spec, CurveKind::Hfc);
  for (std::size_t n = 1; n < spec.numFrames(); ++n)
  {
    double energy = 0.0;
    for (const auto& z : spec.bins.row(n)) energy += std::norm(z);
    const double flux = halfWaveRectify(content.values[n] - content.values[n - 1]);
    c.values[n] = flux * content.values[n] / std::max(energy, eps);
  }
  return c;
}

OnsetCurve complexDeviation(const Spectrogram& spec)
{
  OnsetCurve c = emptyCurveLike(spec, CurveKind::Complex);
  for (std::size_t n = 2; n < spec.numFrames(); ++n)
  {
    auto cur = spec.bins.row(n);
    auto prev = spec.bins.row(n - 1);
    auto prev2 = spec.bins.row(n - 2);
    double sum = 0.0;
    for (std::size_t k = 0; k < cur.size(); ++k)
    {
      const double phase = wrapPhase(2.0 * std::arg(prev[k]) - std::arg(prev2[k]));
      const auto predicted = std::polar(std::abs(prev[k]), phase);
      sum += std::abs(predicted - cur[k]);
    }
    c.values[n] = sum;
  }
  return c;
}

std::vector<double> triangularSmooth(std::span<const double> values, std::size_t width)
{
  if (width == 0 || width % 2 == 0)
    throw ValidationError("smoothing width must be a positive odd number");
  const auto half = static_cast<std::ptrdiff_t>(width / 2);
  const auto size = static_cast<std::ptrdiff_t>(values.size());
  std::vector<double> out(values.size(), 0.0);
  for (std::ptrdiff_t n = 0; n < size; ++n)
  {
    double acc = 0.0;
    double norm = 0.0;
    for (std::ptrdiff_t j = -half; j <= half; ++j)
    {
      const std::ptrdiff_t m = n + j;
      if (m < 0 || m >= size) continue;
      const auto w = static_cast<double>(half + 1 - std::abs(j));
      acc += w * values[static_cast<std::size_t>(m)];
      norm += w;
    }
    out[static_cast<std::size_t>(n)] = acc / norm;
  }
  return out;
}

OnsetCurve complexDetectionCurve(const Spectrogram& spec, std::size_t smoothingFrames)
{
  OnsetCurve c = complexDeviation(spec);
  c.values = triangularSmooth(c.values, smoothingFrames);
  return c;
}

OnsetCurve normalize(const OnsetCurve& curve)
{
  OnsetCurve out = curve;
  if (curve.values.empty()) return out;
  const auto [lo, hi] = std::minmax_element(curve.values.begin(), curve.values.end());
  const double min = *lo;
  const double range = *hi - *lo;
  if (!(range > 0.0))
  {
    std::fill(out.values.begin(), out.values.end(), 0.0);
    return out;
  }
  for (double& v : out.values) v = (v - min) / range;
  return out;
}

OnsetCurve importExternalCurve(std::vector<double> values, std::vector<double> frameTimes)
{
  if (values.size() != frameTimes.size())
    throw ValidationError("curve has " + std::to_string(values.size()) + " values but " +
                          std::to_string(frameTimes.size()) + " frame times");
  for (std::size_t i = 0; i < values.size(); ++i)
  {
    if (!std::isfinite(values[i]) || values[i] < 0.0)
      throw ValidationError("curve value at frame " + std::to_string(i) +
                            " is negative or not finite");
    if (!std::isfinite(frameTimes[i]) || frameTimes[i] < 0.0)
      throw ValidationError("curve time at frame " + std::to_string(i) +
                            " is negative or not finite");
    if (i > 0 && !(frameTimes[i] > frameTimes[i - 1]))
      throw ValidationError("curve times are not strictly increasing at frame " +
                            std::to_string(i));
  }
  OnsetCurve c;
  c.kind = CurveKind::External;
  c.values = std::move(values);
  c.frameTimes = std::move(frameTimes);
  return c;
}

std::string formatCurveText(const OnsetCurve& curve)
{
  std::string out;
  out += "# time_sec\tvalue\n";
  for (std::size_t i = 0; i < curve.size(); ++i)
  {
    out += detail::formatExact(curve.frameTimes[i]);
    out += '\t';
    out += detail::formatExact(curve.values[i]);
    out += '\n';
  }
  return out;
}

OnsetCurve parseCurveText(std::string_view text)
{
  std::vector<double> times;
  std::vector<double> values;
  detail::forEachLine(text, [&](std::size_t lineNo, std::string_view line) {
    line = detail::trim(line);
    if (line.empty() || line.front() == '#') return;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) throw ParseError(lineNo, "expected \"time<TAB>value\"");
    const auto t = detail::parseDouble(detail::trim(line.substr(0, tab)));
    const auto v = detail::parseDouble(detail::trim(line.substr(tab + 1)));
    if (!t || !v) throw ParseError(lineNo, "malformed number in \"" + std::string(line) + "\"");
    times.push_back(*t);
    values.push_back(*v);
  });
  return importExternalCurve(std::move(values), std::move(times));
}

OnsetCurve readCurveFile(const std::string& path)
{
  return parseCurveText(detail::readTextFile(path));
}

void writeCurveFile(const std::string& path, const OnsetCurve& curve)
{
  detail::writeTextFile(path, formatCurveText(curve));
}

} // namespace vponset
