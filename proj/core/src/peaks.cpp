#include "vponset/peaks.hpp"

#include "vponset/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace vponset {

void PeakConfig::validate() const
{
  if (!(threshold >= 0.0 && threshold <= 1.0))
    throw ValidationError("peak threshold must lie in [0, 1]");
  if (!(minSeparationSec >= 0.0) || !std::isfinite(minSeparationSec))
    throw ValidationError("minimum separation must be non-negative");
  if (localWindowFrames == 0 || localWindowFrames % 2 == 0)
    throw ValidationError("local window must be a positive odd number of frames");
}

OnsetList pickPeaks(const OnsetCurve& curve, const PeakConfig& cfg)
{
  cfg.validate();
  const auto& v = curve.values;
  const std::size_t half = cfg.localWindowFrames / 2;

  OnsetList out;
  for (std::size_t n = 0; n < v.size(); ++n)
  {
    if (!(v[n] >= cfg.threshold)) continue;
    bool isPeak = true;
    for (std::size_t j = n - std::min(n, half); j < n && isPeak; ++j) isPeak = v[n] > v[j];
    for (std::size_t j = n + 1; j <= std::min(v.size() - 1, n + half) && isPeak; ++j)
      isPeak = v[n] >= v[j];
    if (isPeak) out.times.push_back(curve.frameTimes[n]);
  }
  if (cfg.minSeparationSec > 0.0) return minSeparationFilter(out, cfg.minSeparationSec);
  return out;
}

OnsetList minSeparationFilter(const OnsetList& onsets, double minSepSec)
{
  if (!(minSepSec >= 0.0)) throw ValidationError("minimum separation must be non-negative");
  OnsetList out;
  if (onsets.labels) out.labels.emplace();
  for (std::size_t i = 0; i < onsets.size(); ++i)
  {
    if (!out.times.empty() && onsets.times[i] - out.times.back() < minSepSec) continue;
    out.times.push_back(onsets.times[i]);
    if (onsets.labels) out.labels->push_back((*onsets.labels)[i]);
  }
  return out;
}

OnsetList refineOnsets(const OnsetList& onsets, const OnsetCurve& sf, double windowSec)
{
  if (!(windowSec > 0.0) || sf.values.empty()) return onsets;

  // Absorbs rounding in frame times computed as hop / rate.
  constexpr double slack = 1e-9;
  const double half = windowSec / 2.0;
  const auto& ft = sf.frameTimes;

  std::vector<double> moved(onsets.size());
  for (std::size_t i = 0; i < onsets.size(); ++i)
  {
    const double t = onsets.times[i];
    auto lo = std::lower_bound(ft.begin(), ft.end(), t - half - slack);
    auto hi = std::upper_bound(lo, ft.end(), t + half + slack);
    if (lo == hi)
    {
      moved[i] = t;
      continue;
    }
    auto first = sf.values.begin() + (lo - ft.begin());
    auto last = sf.values.begin() + (hi - ft.begin());
    moved[i] = ft[static_cast<std::size_t>(std::max_element(first, last) - sf.values.begin())];
  }

  std::vector<std::size_t> order(onsets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return moved[a] < moved[b]; });

  OnsetList out;
  if (onsets.labels) out.labels.emplace();
  for (std::size_t idx : order)
  {
    if (!out.times.empty() && out.times.back() == moved[idx]) continue;
    out.times.push_back(moved[idx]);
    if (onsets.labels) out.labels->push_back((*onsets.labels)[idx]);
  }
  return out;
}

double selectRefinementWindow(std::span<const double> candidates,
                              const std::function<RefinementOutcome(double)>& evaluate,
                              double baselineF1)
{
  const double floor = (1.0 - kRefinementMaxF1Drop) * baselineF1;
  double best = 0.0;
  double bestMad = 0.0;
  bool found = false;
  for (double w : candidates)
  {
    const RefinementOutcome r = evaluate(w);
    if (r.f1 < floor) continue;
    if (!found || r.madSec < bestMad || (r.madSec == bestMad && w < best))
    {
      best = w;
      bestMad = r.madSec;
      found = true;
    }
  }
  return found ? best : 0.0;
}

} // namespace vponset
