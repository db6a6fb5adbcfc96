#include "vponset/eval.hpp"

#include "vponset/error.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace vponset {

namespace {

void checkTolerance(double tol)
{
  if (!(tol > 0.0) || !std::isfinite(tol)) throw ValidationError("tolerance must be positive");
}

struct Cell
{
  std::size_t count{0};
  double cost{0.0};
};

bool better(const Cell& a, const Cell& b) noexcept
{
  return a.count > b.count || (a.count == b.count && a.cost < b.cost);
}

// Optimal order-preserving matching of refs[r0, r1) against preds[p0, p1).
// Any crossing pair (r1 < r2 matched to p2 < p1) can be uncrossed without
// breaking the tolerance or increasing total |dt|, so the DP over suffixes
// is exact.
void matchSegment(const std::vector<double>& refs, const std::vector<double>& preds,
                  std::size_t r0, std::size_t r1, std::size_t p0, std::size_t p1, double tol,
                  std::vector<MatchedPair>& out)
{
  const std::size_t nr = r1 - r0;
  const std::size_t np = p1 - p0;
  if (nr == 0 || np == 0) return;

  const std::size_t stride = np + 1;
  std::vector<Cell> dp((nr + 1) * stride);
  auto at = [&](std::size_t i, std::size_t j) -> Cell& { return dp[i * stride + j]; };

  for (std::size_t i = nr; i-- > 0;)
  {
    for (std::size_t j = np; j-- > 0;)
    {
      Cell best = at(i + 1, j);
      if (better(at(i, j + 1), best)) best = at(i, j + 1);
      const double d = std::abs(refs[r0 + i] - preds[p0 + j]);
      if (d <= tol)
      {
        Cell take{at(i + 1, j + 1).count + 1, at(i + 1, j + 1).cost + d};
        if (better(take, best)) best = take;
      }
      at(i, j) = best;
    }
  }

  std::size_t i = 0;
  std::size_t j = 0;
  while (i < nr && j < np)
  {
    const double d = std::abs(refs[r0 + i] - preds[p0 + j]);
    const Cell& here = at(i, j);
    const Cell& diag = at(i + 1, j + 1);
    if (d <= tol && here.count == diag.count + 1 && here.cost == diag.cost + d)
    {
      out.push_back({r0 + i, p0 + j, refs[r0 + i], preds[p0 + j]});
      ++i;
      ++j;
    }
    else if (here.count == at(i + 1, j).count && here.cost == at(i + 1, j).cost)
    {
      ++i;
    }
    else
    {
      ++j;
    }
  }
}

MatchResult finish(std::vector<MatchedPair> pairs, std::size_t nRefs, std::size_t nPreds)
{
  std::sort(pairs.begin(), pairs.end(),
            [](const MatchedPair& a, const MatchedPair& b) { return a.refIndex < b.refIndex; });
  MatchResult m;
  m.unmatchedRefs = nRefs - pairs.size();
  m.unmatchedPreds = nPreds - pairs.size();
  m.pairs = std::move(pairs);
  return m;
}

} // namespace

MatchResult matchOnsets(const OnsetList& reference, const OnsetList& predicted,
                        double toleranceSec)
{
  checkTolerance(toleranceSec);
  const auto& refs = reference.times;
  const auto& preds = predicted.times;

  // Split the merged timeline wherever consecutive events are more than a
  // tolerance apart; no admissible pair can straddle such a gap.
  std::vector<MatchedPair> pairs;
  std::size_t r = 0;
  std::size_t p = 0;
  while (r < refs.size() && p < preds.size())
  {
    const std::size_t r0 = r;
    const std::size_t p0 = p;
    double last = std::min(refs[r], preds[p]);
    while (true)
    {
      const bool haveR = r < refs.size();
      const bool haveP = p < preds.size();
      if (!haveR && !haveP) break;
      const bool takeRef = haveR && (!haveP || refs[r] <= preds[p]);
      const double next = takeRef ? refs[r] : preds[p];
      if (next - last > toleranceSec && (r > r0 || p > p0)) break;
      last = next;
      (takeRef ? r : p)++;
    }
    matchSegment(refs, preds, r0, r, p0, p, toleranceSec, pairs);
  }
  return finish(std::move(pairs), refs.size(), preds.size());
}

MatchResult matchOnsetsGreedy(const OnsetList& reference, const OnsetList& predicted,
                              double toleranceSec)
{
  checkTolerance(toleranceSec);
  const auto& refs = reference.times;
  const auto& preds = predicted.times;

  std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
  std::size_t lo = 0;
  for (std::size_t i = 0; i < refs.size(); ++i)
  {
    while (lo < preds.size() && preds[lo] < refs[i] - toleranceSec) ++lo;
    for (std::size_t j = lo; j < preds.size() && preds[j] <= refs[i] + toleranceSec; ++j)
    {
      const double d = std::abs(refs[i] - preds[j]);
      if (d <= toleranceSec) candidates.emplace_back(d, i, j);
    }
  }
  std::sort(candidates.begin(), candidates.end());

  std::vector<bool> refUsed(refs.size(), false);
  std::vector<bool> predUsed(preds.size(), false);
  std::vector<MatchedPair> pairs;
  for (const auto& [d, i, j] : candidates)
  {
    if (refUsed[i] || predUsed[j]) continue;
    refUsed[i] = predUsed[j] = true;
    pairs.push_back({i, j, refs[i], preds[j]});
  }
  return finish(std::move(pairs), refs.size(), preds.size());
}

EvalReport reportFromCounts(std::size_t tp, std::size_t fp, std::size_t fn,
                            double totalDeviationSec)
{
  EvalReport r;
  r.tp = tp;
  r.fp = fp;
  r.fn = fn;
  r.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  r.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  r.f1 = r.precision + r.recall > 0.0
             ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  r.madSec = tp > 0 ? totalDeviationSec / static_cast<double>(tp) : 0.0;
  return r;
}

EvalReport score(const MatchResult& match)
{
  double total = 0.0;
  for (const auto& p : match.pairs) total += p.deviation();
  return reportFromCounts(match.pairs.size(), match.unmatchedPreds, match.unmatchedRefs, total);
}

} // namespace vponset
