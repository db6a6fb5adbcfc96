#include "support/synth.hpp"

#include <vponset/error.hpp>
#include <vponset/harness.hpp>

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <sstream>

using namespace vponset;

namespace {

// External curve with unit spikes at the given times on a 10 ms grid.
OnsetCurve spikes(const std::vector<double>& at, double duration = 2.0)
{
  const auto n = static_cast<std::size_t>(duration / 0.01);
  std::vector<double> v(n, 0.0), t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i) * 0.01;
  for (double x : at) v[static_cast<std::size_t>(std::llround(x / 0.01))] = 1.0;
  return importExternalCurve(v, t);
}

DetectorConfig externalConfig()
{
  DetectorConfig cfg = DetectorConfig::defaultsFor(DetectorKind::External);
  cfg.peaks.minSeparationSec = 0.0;
  return cfg;
}

FileSet twoFiles()
{
  FileSet files;
  // (tp, fp, fn) = (3, 1, 0)
  files.push_back(memoryItem("a", {}, OnsetList{{0.1, 0.5, 0.9}, std::nullopt}, spikes({0.1, 0.5, 0.9, 1.3})));
  // (tp, fp, fn) = (1, 0, 2)
  files.push_back(memoryItem("b", {}, OnsetList{{0.2, 0.6, 1.0}, std::nullopt}, spikes({0.2})));
  return files;
}

} // namespace

TEST_SUITE("evaluate_detector")
{
  TEST_CASE("perfect detection on one file")
  {
    FileSet files{memoryItem("x", {}, OnsetList{{0.3, 0.7}, std::nullopt}, spikes({0.3, 0.7}))};
    const auto run = evaluateDetector(externalConfig(), files);
    CHECK(run.aggregate.f1 == 1.0);
    CHECK(run.aggregate.madSec == doctest::Approx(0.0).epsilon(1e-12));
  }

  TEST_CASE("counts are pooled across files")
  {
    const auto run = evaluateDetector(externalConfig(), twoFiles());
    REQUIRE(run.files.size() == 2);
    CHECK(run.aggregate.tp == 4);
    CHECK(run.aggregate.fp == 1);
    CHECK(run.aggregate.fn == 2);
    CHECK(run.aggregate.precision == doctest::Approx(4.0 / 5.0));
    CHECK(run.aggregate.recall == doctest::Approx(4.0 / 6.0));
    CHECK(run.aggregate.f1 == doctest::Approx(0.727272727).epsilon(1e-6));
    std::size_t tp = 0, fp = 0, fn = 0;
    for (const auto& f : run.files)
    {
      tp += f.report.tp;
      fp += f.report.fp;
      fn += f.report.fn;
    }
    CHECK(tp == run.aggregate.tp);
    CHECK(fp == run.aggregate.fp);
    CHECK(fn == run.aggregate.fn);
  }

  TEST_CASE("files that fail to load are excluded and reported")
  {
    FileSet files = twoFiles();
    files.push_back(fileItem("missing", "/nonexistent.wav", ""));
    EvalItem broken;
    broken.name = "broken";
    broken.load = []() -> LoadedItem { throw FormatError("bad data"); };
    files.push_back(broken);
    const auto run = evaluateDetector(externalConfig(), files);
    CHECK(run.files.size() == 2);
    REQUIRE(run.excluded.size() == 2);
    CHECK(run.excluded[0].name == "broken");
    CHECK(run.excluded[1].name == "missing");
    CHECK(run.aggregate.tp == 4);
  }

  TEST_CASE("parallel evaluation matches serial evaluation")
  {
    FileSet files;
    for (int i = 0; i < 12; ++i)
    {
      auto track = testing::clickTrack(3.0, {0.5, 1.1, 1.9, 2.4}, 22050, -30.0, 100 + i);
      files.push_back(memoryItem("f" + std::to_string(100 - i), track.audio, track.onsets));
    }
    const auto cfg = DetectorConfig::defaultsFor(DetectorKind::Hfc);
    const auto serial = evaluateDetector(cfg, files, 0.05, {1});
    const auto parallel = evaluateDetector(cfg, files, 0.05, {4});
    REQUIRE(serial.files.size() == parallel.files.size());
    for (std::size_t i = 0; i < serial.files.size(); ++i)
    {
      CHECK(serial.files[i].name == parallel.files[i].name);
      CHECK(serial.files[i].report.tp == parallel.files[i].report.tp);
      CHECK(serial.files[i].report.madSec == parallel.files[i].report.madSec);
    }
    CHECK(serial.aggregate.f1 == parallel.aggregate.f1);
    CHECK(std::is_sorted(serial.files.begin(), serial.files.end(),
                         [](const auto& a, const auto& b) { return a.name < b.name; }));
  }

  TEST_CASE("external detector without a curve excludes the file")
  {
    FileSet files{memoryItem("nocurve", {}, OnsetList{{0.3}, std::nullopt})};
    const auto run = evaluateDetector(externalConfig(), files);
    CHECK(run.files.empty());
    CHECK(run.excluded.size() == 1);
  }
}

TEST_SUITE("sweep")
{
  TEST_CASE("ten linearly spaced values over [0, 1]")
  {
    const auto v = SweepSpec{SweepParam::Threshold, 0.0, 1.0, 10}.values();
    REQUIRE(v.size() == 10);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == doctest::Approx(static_cast<double>(i) / 9.0));
    CHECK(v.front() == 0.0);
    CHECK(v.back() == 1.0);
  }

  TEST_CASE("invalid specs")
  {
    CHECK_THROWS_AS(SweepSpec({SweepParam::Threshold, 1.0, 0.0, 10}).values(), ValidationError);
    CHECK_THROWS_AS(SweepSpec({SweepParam::Threshold, 0.0, 1.0, 1}).values(), ValidationError);
  }

  TEST_CASE("decreasing objective peaks at the smallest value; ties go to the smaller value")
  {
    const auto values = SweepSpec{}.values();
    const auto r = sweepValues("x", values, [](double v) {
      EvalReport e;
      e.f1 = 1.0 - 0.5 * v;
      return e;
    });
    CHECK(r.bestIndex == 0);
    const auto flat = sweepValues("x", {0.3, 0.1, 0.2}, [](double) {
      EvalReport e;
      e.f1 = 0.5;
      return e;
    });
    CHECK(flat.best().value == 0.1);
  }

  TEST_CASE("threshold sweep on real evaluation")
  {
    const auto r = sweep(SweepSpec{SweepParam::Threshold, 0.1, 1.0, 10}, externalConfig(), twoFiles());
    CHECK(r.rows.size() == 10);
    CHECK(r.parameter == "threshold");
    CHECK(formatSweepTable(r).find("threshold\tprecision") == 0);
  }

  TEST_CASE("parameter mapping")
  {
    const auto base = DetectorConfig::defaultsFor(DetectorKind::Hfc);
    CHECK(withParam(base, SweepParam::FrameMs, 20).stft.effectiveHopMs() == 10.0);
    CHECK(withParam(base, SweepParam::MinSepMs, 90).peaks.minSeparationSec == doctest::Approx(0.09));
    CHECK(withParam(base, SweepParam::RefineMs, 30).refineWindowSec == doctest::Approx(0.03));
    CHECK((parseSweepParam("min_sep_ms") == SweepParam::MinSepMs));
    CHECK_FALSE(parseSweepParam("nope").has_value());
  }

  TEST_CASE("grid search covers the cartesian product")
  {
    const auto g = gridSearch({SweepSpec{SweepParam::Threshold, 0.2, 0.8, 3}, SweepSpec{SweepParam::MinSepMs, 0, 100, 2}},
                              externalConfig(), twoFiles());
    CHECK(g.rows.size() == 6);
    CHECK(g.rows[1].values == std::vector<double>{0.2, 100.0});
  }
}

TEST_SUITE("studies")
{
  TEST_CASE("zero separation reproduces the unfiltered F1")
  {
    const auto study = minSeparationStudy({0.0, 0.05, 0.1}, externalConfig(), twoFiles());
    CHECK(study.rows[0].report.f1 == evaluateDetector(externalConfig(), twoFiles()).aggregate.f1);
  }

  TEST_CASE("a huge separation keeps at most one onset per file")
  {
    const auto files = twoFiles();
    const auto study = minSeparationStudy({1000.0}, externalConfig(), files);
    const auto& r = study.rows[0].report;
    CHECK(r.tp + r.fp <= files.size());
  }

  TEST_CASE("unsorted separations are rejected")
  {
    CHECK_THROWS_AS(minSeparationStudy({0.1, 0.0}, externalConfig(), twoFiles()), ValidationError);
  }

  TEST_CASE("refinement study on late predictions chooses a window that cuts the deviation")
  {
    FileSet files;
    for (int i = 0; i < 4; ++i)
    {
      std::vector<double> clicks{0.4, 0.9, 1.5};
      auto track = testing::clickTrack(2.0, clicks, 44100, -40.0, 300 + i);
      // Predictions 20-30 ms late; the flux peaks at the click.
      files.push_back(memoryItem("f" + std::to_string(i), track.audio, track.onsets,
                                 spikes({0.43, 0.92, 1.52})));
    }
    const auto study = refinementStudy({0.01, 0.03, 0.06, 0.09}, externalConfig(), files);
    CHECK(study.baseline.f1 == 1.0);
    CHECK(study.chosenWindowSec >= 0.03);
    for (const auto& row : study.candidates.rows)
      if (row.value == study.chosenWindowSec) CHECK(row.report.madSec < 0.5 * study.baseline.madSec);
  }
}

TEST_CASE("run export is a single JSON line")
{
  const auto run = evaluateDetector(externalConfig(), twoFiles());
  const auto line = runToJsonLine(run);
  CHECK(line.find('\n') == std::string::npos);
  const auto j = nlohmann::json::parse(line);
  CHECK(j["aggregate"]["tp"] == 4);
  CHECK(j["config"]["detector"] == "external");
  CHECK(j["files"].size() == 2);
}
