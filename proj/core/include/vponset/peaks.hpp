#pragma once

#include "vponset/odf.hpp"
#include "vponset/onsets.hpp"

#include <functional>
#include <span>

namespace vponset {

struct PeakConfig
{
  double threshold{0.8};
  /// Zero disables the minimum-separation filter.
  double minSeparationSec{0.0};
  /// Odd neighbourhood size for the local-maximum test.
  std::size_t localWindowFrames{3};

  void validate() const;
};

/// Frame n is an onset iff value(n) >= threshold and value(n) is a local
/// maximum over +-(localWindowFrames-1)/2 frames: strictly greater than
/// earlier neighbours and not smaller than later ones, so plateaus resolve
/// to their first frame. The minimum-separation filter runs afterwards.
OnsetList pickPeaks(const OnsetCurve& curve, const PeakConfig& cfg);

/// Keeps the first onset and drops every onset closer than minSepSec to the
/// last kept one. Labels follow their onsets.
OnsetList minSeparationFilter(const OnsetList& onsets, double minSepSec);

/// Moves each onset to the frame of maximal spectral flux within
/// [t - windowSec/2, t + windowSec/2] (earliest frame on ties). Onsets with
/// no frame inside their window stay put. The result is re-sorted and exact
/// duplicates collapse to the first one.
OnsetList refineOnsets(const OnsetList& onsets, const OnsetCurve& sf, double windowSec);

struct RefinementOutcome
{
  double f1{0.0};
  double madSec{0.0};
};

/// Among candidates whose refined F1 stays at or above 99% of the baseline,
/// returns the window with the smallest MAD (smaller window on ties), or 0
/// when none qualifies.
double selectRefinementWindow(std::span<const double> candidates,
                              const std::function<RefinementOutcome(double)>& evaluate,
                              double baselineF1);

inline constexpr double kRefinementMaxF1Drop = 0.01;

} // namespace vponset
