#pragma once

#include "vponset/detector.hpp"
#include "vponset/eval.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vponset {

/// Data for one evaluation file. Loading happens outside the timed region.
struct LoadedItem
{
  AudioBuffer audio;
  OnsetList reference;
  std::optional<OnsetCurve> externalCurve;
};

/// Lazily loaded evaluation file. `load` throws on missing or malformed
/// inputs; such files are excluded from the aggregate and reported.
struct EvalItem
{
  std::string name;
  std::function<LoadedItem()> load;
};

using FileSet = std::vector<EvalItem>;

/// Reads audio, annotations and (if given) an external curve from disk.
EvalItem fileItem(std::string name, std::string audioPath, std::string annotationPath,
                  std::string curvePath = {});
EvalItem memoryItem(std::string name, AudioBuffer audio, OnsetList reference,
                    std::optional<OnsetCurve> externalCurve = std::nullopt);

struct FileResult
{
  std::string name;
  EvalReport report;
  /// Sum of matched deviations, kept so pooled MAD is exact.
  double totalDeviationSec{0.0};
};

struct Exclusion
{
  std::string name;
  std::string reason;
};

struct EvalRun
{
  DetectorConfig config;
  double toleranceSec{kDefaultToleranceSec};
  /// Ordered by file name.
  std::vector<FileResult> files;
  std::vector<Exclusion> excluded;
  /// Counts and deviations pooled over files; timing summed.
  EvalReport aggregate;
};

struct EvalOptions
{
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads{0};
};

/// Runs the detector on every file and pools the results. Per-file work may
/// run in parallel; the fold is in name order so results are deterministic.
EvalRun evaluateDetector(const DetectorConfig& cfg, const FileSet& files,
                         double toleranceSec = kDefaultToleranceSec,
                         const EvalOptions& options = {});

enum class SweepParam
{
  Threshold,
  FrameMs,
  HopMs,
  MinSepMs,
  RefineMs,
};

std::string_view toString(SweepParam p) noexcept;
std::optional<SweepParam> parseSweepParam(std::string_view name) noexcept;

/// Returns `cfg` with one parameter replaced. Time parameters are in ms.
DetectorConfig withParam(DetectorConfig cfg, SweepParam param, double value);

struct SweepSpec
{
  SweepParam param{SweepParam::Threshold};
  double min{0.0};
  double max{1.0};
  std::size_t numValues{10};

  void validate() const;
  /// Linearly spaced values, both ends included.
  std::vector<double> values() const;
};

struct SweepRow
{
  double value{0.0};
  EvalReport report;
};

struct SweepResult
{
  std::string parameter;
  std::vector<SweepRow> rows;
  /// Row with the highest F1; ties go to the smaller parameter value.
  std::size_t bestIndex{0};

  const SweepRow& best() const { return rows.at(bestIndex); }
};

/// Evaluates `evaluate` at every value and records the F1 argmax.
SweepResult sweepValues(std::string parameter, const std::vector<double>& values,
                        const std::function<EvalReport(double)>& evaluate);

SweepResult sweep(const SweepSpec& spec, const DetectorConfig& base, const FileSet& files,
                  double toleranceSec = kDefaultToleranceSec, const EvalOptions& options = {});

struct GridRow
{
  std::vector<double> values;
  EvalReport report;
};

struct GridResult
{
  std::vector<SweepParam> params;
  std::vector<GridRow> rows;
  std::size_t bestIndex{0};
};

/// Full cartesian product over several sweep specs (first spec varies slowest).
GridResult gridSearch(const std::vector<SweepSpec>& specs, const DetectorConfig& base,
                      const FileSet& files, double toleranceSec = kDefaultToleranceSec,
                      const EvalOptions& options = {});

/// F1 (and full report) per minimum separation, separations in seconds.
SweepResult minSeparationStudy(const std::vector<double>& separationsSec,
                               const DetectorConfig& cfg, const FileSet& files,
                               double toleranceSec = kDefaultToleranceSec,
                               const EvalOptions& options = {});

struct RefinementStudy
{
  EvalReport baseline;
  /// Rows keyed by window in seconds.
  SweepResult candidates;
  double chosenWindowSec{0.0};
};

/// Evaluates each refinement window and applies the 1% F1-drop rule.
RefinementStudy refinementStudy(const std::vector<double>& windowsSec, const DetectorConfig& cfg,
                                const FileSet& files, double toleranceSec = kDefaultToleranceSec,
                                const EvalOptions& options = {});

/// One JSON object (single line) with config, per-file reports and aggregate.
std::string runToJsonLine(const EvalRun& run);

/// Tab-separated table with a header row, one row per swept value.
std::string formatSweepTable(const SweepResult& result);

} // namespace vponset
