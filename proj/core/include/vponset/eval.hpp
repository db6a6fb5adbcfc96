#pragma once

#include "vponset/onsets.hpp"

#include <cstddef>
#include <vector>

namespace vponset {

struct MatchedPair
{
  std::size_t refIndex{0};
  std::size_t predIndex{0};
  double refTime{0.0};
  double predTime{0.0};

  double deviation() const noexcept { return predTime > refTime ? predTime - refTime : refTime - predTime; }
};

/// One-to-one pairing of reference and predicted onsets within a tolerance.
struct MatchResult
{
  std::vector<MatchedPair> pairs;
  std::size_t unmatchedRefs{0};
  std::size_t unmatchedPreds{0};
};

struct EvalReport
{
  double precision{0.0};
  double recall{0.0};
  double f1{0.0};
  /// Mean |ref - pred| over matched pairs.
  double madSec{0.0};
  std::size_t tp{0};
  std::size_t fp{0};
  std::size_t fn{0};
  double wallClockSec{0.0};
};

/// Maximum-cardinality one-to-one matching with |ref - pred| <= tolerance;
/// among maximum matchings, the one with the smallest total deviation.
/// Both lists must be sorted.
MatchResult matchOnsets(const OnsetList& reference, const OnsetList& predicted,
                        double toleranceSec);

/// Nearest-first greedy matching: candidate pairs sorted by |dt| (then
/// earlier reference, then earlier prediction), accepted while both ends are
/// free. Not always maximal; kept as a baseline for comparison.
MatchResult matchOnsetsGreedy(const OnsetList& reference, const OnsetList& predicted,
                              double toleranceSec);

/// Builds a report from raw counts and the summed deviation of the tp pairs.
EvalReport reportFromCounts(std::size_t tp, std::size_t fp, std::size_t fn,
                            double totalDeviationSec);

EvalReport score(const MatchResult& match);

inline constexpr double kDefaultToleranceSec = 0.050;

} // namespace vponset
