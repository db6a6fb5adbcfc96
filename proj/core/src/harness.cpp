#include "vponset/harness.hpp"

#include "vponset/annotations.hpp"
#include "vponset/error.hpp"
#include "vponset/wav.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>
#include <variant>

namespace vponset {

namespace {

using Outcome = std::variant<FileResult, Exclusion>;

Outcome evaluateOne(const EvalItem& item, const DetectorConfig& cfg, double tol)
{
  LoadedItem data;
  try
  {
    data = item.load();
    data.reference.validate();
    if (cfg.kind == DetectorKind::External && !data.externalCurve)
      throw ValidationError("no external curve for this file");
  }
  catch (const std::exception& e)
  {
    return Exclusion{item.name, e.what()};
  }

  try
  {
    const auto start = std::chrono::steady_clock::now();
    const Detection d = cfg.kind == DetectorKind::External
                            ? detectFromCurve(*data.externalCurve, cfg, &data.audio)
                            : detect(data.audio, cfg);
    const auto stop = std::chrono::steady_clock::now();

    const MatchResult m = matchOnsets(data.reference, d.onsets, tol);
    FileResult r;
    r.name = item.name;
    r.report = score(m);
    r.report.wallClockSec = std::chrono::duration<double>(stop - start).count();
    for (const auto& p : m.pairs) r.totalDeviationSec += p.deviation();
    return r;
  }
  catch (const std::exception& e)
  {
    return Exclusion{item.name, e.what()};
  }
}

nlohmann::json reportJson(const EvalReport& r)
{
  return {{"precision", r.precision}, {"recall", r.recall}, {"f1", r.f1},
          {"mad_sec", r.madSec},      {"tp", r.tp},         {"fp", r.fp},
          {"fn", r.fn},               {"wall_clock_sec", r.wallClockSec}};
}

nlohmann::json configJson(const DetectorConfig& c, double tol)
{
  return {{"detector", toString(c.kind)},
          {"frame_ms", c.stft.windowMs},
          {"hop_ms", c.stft.effectiveHopMs()},
          {"window", toString(c.stft.window)},
          {"threshold", c.peaks.threshold},
          {"min_sep_sec", c.peaks.minSeparationSec},
          {"local_window_frames", c.peaks.localWindowFrames},
          {"refine_sec", c.refineWindowSec},
          {"complex_smoothing_frames", c.complexSmoothingFrames},
          {"tolerance_sec", tol}};
}

} // namespace

EvalItem fileItem(std::string name, std::string audioPath, std::string annotationPath,
                  std::string curvePath)
{
  EvalItem item;
  item.name = std::move(name);
  item.load = [audioPath = std::move(audioPath), annotationPath = std::move(annotationPath),
               curvePath = std::move(curvePath)]() {
    if (annotationPath.empty()) throw ValidationError("missing annotation for " + audioPath);
    LoadedItem data;
    data.reference = readAnnotationFile(annotationPath).onsets;
    data.audio = readAudio(audioPath);
    if (!curvePath.empty()) data.externalCurve = readCurveFile(curvePath);
    return data;
  };
  return item;
}

EvalItem memoryItem(std::string name, AudioBuffer audio, OnsetList reference,
                    std::optional<OnsetCurve> externalCurve)
{
  EvalItem item;
  item.name = std::move(name);
  item.load = [audio = std::move(audio), reference = std::move(reference),
               curve = std::move(externalCurve)]() {
    return LoadedItem{audio, reference, curve};
  };
  return item;
}

EvalRun evaluateDetector(const DetectorConfig& cfg, const FileSet& files, double toleranceSec,
                         const EvalOptions& options)
{
  cfg.validate();
  if (!(toleranceSec > 0.0)) throw ValidationError("tolerance must be positive");

  std::vector<Outcome> outcomes(files.size());
  unsigned threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(std::max<std::size_t>(files.size(), 1)));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++)
      outcomes[i] = evaluateOne(files[i], cfg, toleranceSec);
  };
  if (threads == 1)
  {
    worker();
  }
  else
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  std::vector<std::size_t> order(files.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return files[a].name < files[b].name;
  });

  EvalRun run;
  run.config = cfg;
  run.toleranceSec = toleranceSec;
  std::size_t tp = 0, fp = 0, fn = 0;
  double deviation = 0.0;
  double seconds = 0.0;
  for (std::size_t i : order)
  {
    if (auto* ex = std::get_if<Exclusion>(&outcomes[i]))
    {
      run.excluded.push_back(std::move(*ex));
      continue;
    }
    auto& r = std::get<FileResult>(outcomes[i]);
    tp += r.report.tp;
    fp += r.report.fp;
    fn += r.report.fn;
    deviation += r.totalDeviationSec;
    seconds += r.report.wallClockSec;
    run.files.push_back(std::move(r));
  }
  run.aggregate = reportFromCounts(tp, fp, fn, deviation);
  run.aggregate.wallClockSec = seconds;
  return run;
}

std::string_view toString(SweepParam p) noexcept
{
  switch (p)
  {
  case SweepParam::Threshold: return "threshold";
  case SweepParam::FrameMs: return "frame_ms";
  case SweepParam::HopMs: return "hop_ms";
  case SweepParam::MinSepMs: return "min_sep_ms";
  case SweepParam::RefineMs: return "refine_ms";
  }
  return "unknown";
}

std::optional<SweepParam> parseSweepParam(std::string_view name) noexcept
{
  for (auto p : {SweepParam::Threshold, SweepParam::FrameMs, SweepParam::HopMs,
                 SweepParam::MinSepMs, SweepParam::RefineMs})
    if (toString(p) == name) return p;
  return std::nullopt;
}

DetectorConfig withParam(DetectorConfig cfg, SweepParam param, double value)
{
  switch (param)
  {
  case SweepParam::Threshold: cfg.peaks.threshold = value; break;
  case SweepParam::FrameMs: cfg.stft.windowMs = value; break;
  case SweepParam::HopMs: cfg.stft.hopMs = value; break;
  case SweepParam::MinSepMs: cfg.peaks.minSeparationSec = value / 1000.0; break;
  case SweepParam::RefineMs: cfg.refineWindowSec = value / 1000.0; break;
  }
  return cfg;
}

void SweepSpec::validate() const
{
  if (numValues < 2) throw ValidationError("a sweep needs at least two values");
  if (!(min < max)) throw ValidationError("sweep range must satisfy min < max");
}

std::vector<double> SweepSpec::values() const
{
  validate();
  std::vector<double> v(numValues);
  const double step = (max - min) / static_cast<double>(numValues - 1);
  for (std::size_t i = 0; i < numValues; ++i) v[i] = min + step * static_cast<double>(i);
  v.back() = max;
  return v;
}

SweepResult sweepValues(std::string parameter, const std::vector<double>& values,
                        const std::function<EvalReport(double)>& evaluate)
{
  if (values.empty()) throw ValidationError("nothing to sweep");
  SweepResult out;
  out.parameter = std::move(parameter);
  for (double v : values) out.rows.push_back({v, evaluate(v)});
  for (std::size_t i = 1; i < out.rows.size(); ++i)
  {
    const auto& cand = out.rows[i];
    const auto& best = out.rows[out.bestIndex];
    if (cand.report.f1 > best.report.f1 ||
        (cand.report.f1 == best.report.f1 && cand.value < best.value))
      out.bestIndex = i;
  }
  return out;
}

SweepResult sweep(const SweepSpec& spec, const DetectorConfig& base, const FileSet& files,
                  double toleranceSec, const EvalOptions& options)
{
  return sweepValues(std::string(toString(spec.param)), spec.values(), [&](double v) {
    return evaluateDetector(withParam(base, spec.param, v), files, toleranceSec, options).aggregate;
  });
}

GridResult gridSearch(const std::vector<SweepSpec>& specs, const DetectorConfig& base,
                      const FileSet& files, double toleranceSec, const EvalOptions& options)
{
  if (specs.empty()) throw ValidationError("grid search needs at least one parameter");
  std::vector<std::vector<double>> axes;
  GridResult out;
  for (const auto& s : specs)
  {
    axes.push_back(s.values());
    out.params.push_back(s.param);
  }

  std::vector<std::size_t> idx(specs.size(), 0);
  while (true)
  {
    GridRow row;
    DetectorConfig cfg = base;
    for (std::size_t d = 0; d < specs.size(); ++d)
    {
      row.values.push_back(axes[d][idx[d]]);
      cfg = withParam(cfg, specs[d].param, axes[d][idx[d]]);
    }
    row.report = evaluateDetector(cfg, files, toleranceSec, options).aggregate;
    if (out.rows.empty() || row.report.f1 > out.rows[out.bestIndex].report.f1)
      out.bestIndex = out.rows.size();
    out.rows.push_back(std::move(row));

    bool done = true;
    for (std::size_t d = specs.size(); d-- > 0;)
    {
      if (++idx[d] < axes[d].size())
      {
        done = false;
        break;
      }
      idx[d] = 0;
    }
    if (done) break;
  }
  return out;
}

SweepResult minSeparationStudy(const std::vector<double>& separationsSec,
                               const DetectorConfig& cfg, const FileSet& files,
                               double toleranceSec, const EvalOptions& options)
{
  if (!std::is_sorted(separationsSec.begin(), separationsSec.end()))
    throw ValidationError("separations must be sorted");
  return sweepValues("min_sep_sec", separationsSec, [&](double s) {
    DetectorConfig c = cfg;
    c.peaks.minSeparationSec = s;
    return evaluateDetector(c, files, toleranceSec, options).aggregate;
  });
}

RefinementStudy refinementStudy(const std::vector<double>& windowsSec, const DetectorConfig& cfg,
                                const FileSet& files, double toleranceSec,
                                const EvalOptions& options)
{
  RefinementStudy study;
  DetectorConfig unrefined = cfg;
  unrefined.refineWindowSec = 0.0;
  study.baseline = evaluateDetector(unrefined, files, toleranceSec, options).aggregate;
  study.candidates = sweepValues("refine_sec", windowsSec, [&](double w) {
    DetectorConfig c = cfg;
    c.refineWindowSec = w;
    return evaluateDetector(c, files, toleranceSec, options).aggregate;
  });

  // Reuse the evaluations above rather than rerunning the detector.
  study.chosenWindowSec = selectRefinementWindow(
      windowsSec,
      [&](double w) {
        for (const auto& row : study.candidates.rows)
          if (row.value == w) return RefinementOutcome{row.report.f1, row.report.madSec};
        return RefinementOutcome{};
      },
      study.baseline.f1);
  return study;
}

std::string runToJsonLine(const EvalRun& run)
{
  nlohmann::json j;
  j["config"] = configJson(run.config, run.toleranceSec);
  j["files"] = nlohmann::json::array();
  for (const auto& f : run.files)
    j["files"].push_back({{"name", f.name}, {"report", reportJson(f.report)}});
  j["excluded"] = nlohmann::json::array();
  for (const auto& e : run.excluded)
    j["excluded"].push_back({{"name", e.name}, {"reason", e.reason}});
  j["aggregate"] = reportJson(run.aggregate);
  return j.dump();
}

std::string formatSweepTable(const SweepResult& result)
{
  std::ostringstream out;
  out.precision(10);
  out << result.parameter << "\tprecision\trecall\tf1\tmad_ms\ttp\tfp\tfn\tduration_s\n";
  for (const auto& row : result.rows)
  {
    const auto& r = row.report;
    out << row.value << '\t' << r.precision << '\t' << r.recall << '\t' << r.f1 << '\t'
        << r.madSec * 1000.0 << '\t' << r.tp << '\t' << r.fp << '\t' << r.fn << '\t'
        << r.wallClockSec << '\n';
  }
  return out.str();
}

} // namespace vponset
