#include "cli/commands.hpp"

#include <vponset/dataset.hpp>
#include <vponset/detector.hpp>
#include <vponset/error.hpp>
#include <vponset/harness.hpp>
#include <vponset/wav.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace fs = std::filesystem;

namespace vponset::cli {

namespace {

struct CommonFlags
{
  std::string detector{"hfc"};
  std::optional<double> threshold;
  std::optional<double> frameMs;
  std::optional<double> hopMs;
  std::optional<double> minSepMs;
  std::optional<double> refineMs;
  double toleranceMs{kDefaultToleranceSec * 1000.0};
  std::string window{"hann"};
  std::string curveFile;
  std::string exportPath;
  bool includeDiscarded{false};
  unsigned threads{0};
};

void addDetectorFlags(CLI::App& cmd, CommonFlags& f)
{
  cmd.add_option("--detector", f.detector, "hfc, complex, spectral_flux or external")
      ->capture_default_str();
  cmd.add_option("--threshold", f.threshold, "Peak-picking threshold in [0, 1]");
  cmd.add_option("--frame-ms", f.frameMs, "Analysis window length (default 11)");
  cmd.add_option("--hop-ms", f.hopMs, "Hop length (default: half the window)");
  cmd.add_option("--min-sep-ms", f.minSepMs, "Minimum onset separation, 0 disables");
  cmd.add_option("--refine-ms", f.refineMs, "Spectral-flux refinement window, 0 disables");
  cmd.add_option("--window", f.window, "hann or rectangular")->capture_default_str();
  cmd.add_option("--curve-file", f.curveFile,
                 "External activation curve (a directory of <name>.curve files for datasets)");
}

void addEvalFlags(CLI::App& cmd, CommonFlags& f)
{
  cmd.add_option("--tolerance-ms", f.toleranceMs, "Matching tolerance")->capture_default_str();
  cmd.add_flag("--include-discarded", f.includeDiscarded, "Also evaluate files in the Discarded folder");
  cmd.add_option("--threads", f.threads, "Worker threads, 0 for all cores")->capture_default_str();
}

DetectorConfig buildConfig(const CommonFlags& f)
{
  const auto kind = parseDetectorKind(f.detector);
  if (!kind) throw ValidationError("unknown detector \"" + f.detector + "\"");
  DetectorConfig cfg = DetectorConfig::defaultsFor(*kind);
  const auto window = parseWindowKind(f.window);
  if (!window) throw ValidationError("unknown window \"" + f.window + "\"");
  cfg.stft.window = *window;
  if (f.frameMs) cfg.stft.windowMs = *f.frameMs;
  if (f.hopMs) cfg.stft.hopMs = *f.hopMs;
  if (f.threshold) cfg.peaks.threshold = *f.threshold;
  if (f.minSepMs) cfg.peaks.minSeparationSec = *f.minSepMs / 1000.0;
  if (f.refineMs) cfg.refineWindowSec = *f.refineMs / 1000.0;
  if (*kind == DetectorKind::External && f.curveFile.empty())
    throw ValidationError("--detector external requires --curve-file");
  if (!(f.toleranceMs > 0.0)) throw ValidationError("--tolerance-ms must be positive");
  cfg.validate();
  return cfg;
}

std::string fixed(double v, int decimals)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string findSiblingAnnotation(const fs::path& audio)
{
  for (const auto& ext : IndexOptions{}.annotationExtensions)
  {
    fs::path candidate = audio;
    candidate.replace_extension(ext);
    if (fs::is_regular_file(candidate)) return candidate.string();
  }
  return {};
}

FileSet resolveFiles(const std::string& input, const std::string& annotation,
                     const CommonFlags& f, const DetectorConfig& cfg, std::ostream& err)
{
  const bool external = cfg.kind == DetectorKind::External;
  if (fs::is_directory(input))
  {
    const DatasetIndex index = buildIndex(input);
    for (const auto& u : index.unclassified) err << "warning: unrecognised file " << u << '\n';
    std::optional<fs::path> curveDir;
    if (external) curveDir = f.curveFile;
    return toFileSet(index, f.includeDiscarded, curveDir);
  }
  if (!fs::exists(input)) throw IoError("no such file or directory: " + input);
  const std::string ann = annotation.empty() ? findSiblingAnnotation(input) : annotation;
  return {fileItem(fs::path(input).filename().string(), input, ann, external ? f.curveFile : "")};
}

void writeExport(const std::string& path, const std::string& contents, bool append = false)
{
  std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << contents;
}

void printReport(std::ostream& out, const EvalRun& run)
{
  const auto& r = run.aggregate;
  out << "files\t" << run.files.size() << '\n';
  out << "excluded\t" << run.excluded.size() << '\n';
  out << "tp\t" << r.tp << '\n';
  out << "fp\t" << r.fp << '\n';
  out << "fn\t" << r.fn << '\n';
  out << "precision\t" << fixed(r.precision, 3) << '\n';
  out << "recall\t" << fixed(r.recall, 3) << '\n';
  out << "f1\t" << fixed(r.f1, 3) << '\n';
  out << "mad_ms\t" << fixed(r.madSec * 1000.0, 2) << '\n';
  out << "duration_s\t" << fixed(r.wallClockSec, 3) << '\n';
}

int cmdDetect(const std::string& audioPath, const CommonFlags& f, std::ostream& out)
{
  const DetectorConfig cfg = buildConfig(f);
  const AudioBuffer audio = readAudio(audioPath);
  Detection d;
  if (cfg.kind == DetectorKind::External)
    d = detectFromCurve(readCurveFile(f.curveFile), cfg, &audio);
  else
    d = detect(audio, cfg);

  std::string text;
  for (double t : d.onsets.times) text += fixed(t, 6) + '\n';
  if (f.exportPath.empty())
    out << text;
  else
    writeExport(f.exportPath, text);
  return kOk;
}

int cmdEval(const std::string& input, const std::string& annotation, const CommonFlags& f,
            std::ostream& out, std::ostream& err)
{
  const DetectorConfig cfg = buildConfig(f);
  const FileSet files = resolveFiles(input, annotation, f, cfg, err);
  const EvalRun run = evaluateDetector(cfg, files, f.toleranceMs / 1000.0, {f.threads});
  for (const auto& e : run.excluded) err << "excluded " << e.name << ": " << e.reason << '\n';
  printReport(out, run);
  if (!f.exportPath.empty()) writeExport(f.exportPath, runToJsonLine(run) + '\n', true);
  if (run.files.empty())
  {
    err << "error: no evaluable files\n";
    return kIoFailure;
  }
  return kOk;
}

struct SweepFlags
{
  std::string param{"threshold"};
  double min{0.0};
  double max{1.0};
  std::size_t num{10};
};

int cmdSweep(const std::string& input, const std::string& annotation, const CommonFlags& f,
             const SweepFlags& s, std::ostream& out, std::ostream& err)
{
  const auto param = parseSweepParam(s.param);
  if (!param) throw ValidationError("unknown sweep parameter \"" + s.param + "\"");
  SweepSpec spec{*param, s.min, s.max, s.num};
  spec.validate();
  const DetectorConfig cfg = buildConfig(f);
  const FileSet files = resolveFiles(input, annotation, f, cfg, err);
  const double tol = f.toleranceMs / 1000.0;

  SweepResult result = sweep(spec, cfg, files, tol, {f.threads});
  const std::string table = formatSweepTable(result);
  out << table;
  const auto& best = result.best();
  out << "best\t" << best.value << "\tf1\t" << fixed(best.report.f1, 3) << '\n';

  if (*param == SweepParam::RefineMs)
  {
    const EvalReport baseline =
        evaluateDetector(withParam(cfg, SweepParam::RefineMs, 0.0), files, tol, {f.threads}).aggregate;
    std::vector<double> windows;
    for (const auto& row : result.rows) windows.push_back(row.value);
    const double chosen = selectRefinementWindow(
        windows,
        [&](double w) {
          for (const auto& row : result.rows)
            if (row.value == w) return RefinementOutcome{row.report.f1, row.report.madSec};
          return RefinementOutcome{};
        },
        baseline.f1);
    out << "baseline_f1\t" << fixed(baseline.f1, 3) << "\tbaseline_mad_ms\t"
        << fixed(baseline.madSec * 1000.0, 2) << '\n';
    out << "chosen_refine_ms\t" << chosen << '\n';
  }
  if (!f.exportPath.empty()) writeExport(f.exportPath, table);
  return kOk;
}

int cmdStats(const std::string& root, const std::string& exportPath, std::ostream& out,
             std::ostream& err)
{
  const DatasetIndex index = buildIndex(root);
  const IndexValidation validation = validateIndex(index);
  for (const auto& p : validation.problems) err << "warning: " << p << '\n';
  for (const auto& p : checkAnnotationTimes(index)) err << "warning: " << p << '\n';

  const DatasetStats all = datasetStats(index, true);
  const DatasetStats kept = datasetStats(index, false);
  out << "# including discarded\n" << formatStatsTable(all);
  out << "# excluding discarded\n" << formatStatsTable(kept);
  out << "participants\t" << all.participants << '\n';
  out << "files\t" << all.files << '\n';
  if (all.unlabeled > 0) out << "unlabeled\t" << all.unlabeled << '\n';
  if (!exportPath.empty()) writeExport(exportPath, indexSummaryJson(index, validation) + '\n');
  return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Onset detection and evaluation for vocal percussion recordings", "vponset"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string input;
  std::string annotation;
  SweepFlags sweepFlags;

  auto* detectCmd = app.add_subcommand("detect", "Print detected onset times (s) for a WAV file");
  detectCmd->add_option("audio", input, "WAV file")->required();
  addDetectorFlags(*detectCmd, flags);
  detectCmd->add_option("--export", flags.exportPath, "Write onsets to this file instead of stdout");

  auto* evalCmd = app.add_subcommand("eval", "Score a detector against annotations");
  evalCmd->add_option("input", input, "Dataset root or a WAV file")->required();
  evalCmd->add_option("--annotation", annotation, "Annotation file for a single WAV input");
  addDetectorFlags(*evalCmd, flags);
  addEvalFlags(*evalCmd, flags);
  evalCmd->add_option("--export", flags.exportPath, "Append a JSON record of the run to this file");

  auto* sweepCmd = app.add_subcommand("sweep", "Grid search one parameter over linearly spaced values");
  sweepCmd->add_option("input", input, "Dataset root or a WAV file")->required();
  sweepCmd->add_option("--annotation", annotation, "Annotation file for a single WAV input");
  sweepCmd->add_option("--param", sweepFlags.param,
                       "threshold, frame_ms, hop_ms, min_sep_ms or refine_ms")
      ->capture_default_str();
  sweepCmd->add_option("--min", sweepFlags.min, "First value")->capture_default_str();
  sweepCmd->add_option("--max", sweepFlags.max, "Last value")->capture_default_str();
  sweepCmd->add_option("--num", sweepFlags.num, "Number of values")->capture_default_str();
  addDetectorFlags(*sweepCmd, flags);
  addEvalFlags(*sweepCmd, flags);
  sweepCmd->add_option("--export", flags.exportPath, "Write the sweep table (TSV) to this file");

  auto* statsCmd = app.add_subcommand("stats", "Per-class utterance counts of a dataset tree");
  statsCmd->add_option("root", input, "Dataset root")->required();
  statsCmd->add_option("--export", flags.exportPath, "Write a JSON index summary to this file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back(); // program name
  try
  {
    app.parse(reversed);
  }
  catch (const CLI::ParseError& e)
  {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try
  {
    if (detectCmd->parsed()) return cmdDetect(input, flags, out);
    if (evalCmd->parsed()) return cmdEval(input, annotation, flags, out, err);
    if (sweepCmd->parsed()) return cmdSweep(input, annotation, flags, sweepFlags, out, err);
    if (statsCmd->parsed()) return cmdStats(input, flags.exportPath, out, err);
  }
  catch (const EmptyInputError& e)
  {
    err << "error: " << e.what() << '\n';
    return kIoFailure;
  }
  catch (const ValidationError& e)
  {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  catch (const std::exception& e)
  {
    err << "error: " << e.what() << '\n';
    return kIoFailure;
  }
  return kUsage;
}

} // namespace vponset::cli
