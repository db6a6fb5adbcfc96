#include "vponset/dataset.hpp"

#include "vponset/annotations.hpp"
#include "vponset/error.hpp"
#include "vponset/wav.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <map>
#include <regex>
#include <set>
#include <sstream>

namespace fs = std::filesystem;

namespace vponset {

namespace {

std::string lower(std::string s)
{
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> tokens(const std::string& s)
{
  std::vector<std::string> out;
  std::string cur;
  for (char c : s)
  {
    if (c == '/' || c == '_' || c == '-' || c == ' ' || c == '.')
    {
      if (!cur.empty()) out.push_back(lower(cur));
      cur.clear();
    }
    else
    {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(lower(cur));
  return out;
}

bool anyToken(const std::vector<std::string>& have, const std::vector<std::string>& want)
{
  for (const auto& w : want)
    if (std::find(have.begin(), have.end(), lower(w)) != have.end()) return true;
  return false;
}

bool hasExtension(const fs::path& p, const std::vector<std::string>& exts)
{
  const auto ext = lower(p.extension().string());
  return std::any_of(exts.begin(), exts.end(), [&](const auto& e) { return lower(e) == ext; });
}

std::optional<int> findParticipant(const fs::path& relative, const std::regex& pattern)
{
  std::vector<std::string> parts;
  for (const auto& part : relative) parts.push_back(lower(part.string()));
  std::reverse(parts.begin(), parts.end()); // file name first
  for (const auto& part : parts)
  {
    std::smatch m;
    if (std::regex_search(part, m, pattern) && m.size() > 1) return std::stoi(m[1].str());
  }
  return std::nullopt;
}

std::optional<FileKind> findKind(const std::vector<std::string>& nameTokens,
                                 const IndexOptions& o)
{
  if (anyToken(nameTokens, o.improvisationTokens)) return FileKind::Improvisation;
  if (anyToken(nameTokens, o.hihatClosedTokens)) return FileKind::HihatClosed;
  if (anyToken(nameTokens, o.hihatOpenTokens)) return FileKind::HihatOpen;
  if (anyToken(nameTokens, o.kickTokens)) return FileKind::Kick;
  if (anyToken(nameTokens, o.snareTokens)) return FileKind::Snare;
  return std::nullopt;
}

std::string joinLines(const std::vector<std::string>& items)
{
  std::string out;
  for (const auto& i : items) out += "\n  " + i;
  return out;
}

Label labelFor(FileKind k)
{
  switch (k)
  {
  case FileKind::Kick: return Label::Kick;
  case FileKind::Snare: return Label::Snare;
  case FileKind::HihatClosed: return Label::HihatClosed;
  case FileKind::HihatOpen: return Label::HihatOpen;
  case FileKind::Improvisation: break;
  }
  throw ValidationError("improvisation files have no single class");
}

} // namespace

std::string_view toString(Modality m) noexcept
{
  return m == Modality::Personal ? "personal" : "fixed";
}

std::string_view toString(FileKind k) noexcept
{
  switch (k)
  {
  case FileKind::Kick: return "kick";
  case FileKind::Snare: return "snare";
  case FileKind::HihatClosed: return "hhclosed";
  case FileKind::HihatOpen: return "hhopen";
  case FileKind::Improvisation: return "improvisation";
  }
  return "unknown";
}

IndexError::IndexError(std::vector<std::string> orphans)
    : Error("audio files without annotations:" + joinLines(orphans)), mOrphans(std::move(orphans))
{}

std::vector<int> DatasetIndex::participants() const
{
  std::set<int> ids;
  for (const auto& f : files) ids.insert(f.participant);
  return {ids.begin(), ids.end()};
}

DatasetIndex buildIndex(const fs::path& root, const IndexOptions& options)
{
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw IoError("not a directory: " + root.string());

  const std::regex participant(options.participantPattern, std::regex::ECMAScript | std::regex::icase);

  std::vector<fs::path> audio;
  for (auto it = fs::recursive_directory_iterator(root, ec); !ec && it != fs::recursive_directory_iterator();
       it.increment(ec))
  {
    if (it->is_regular_file() && hasExtension(it->path(), options.audioExtensions))
      audio.push_back(it->path());
  }
  if (ec) throw IoError("cannot walk " + root.string() + ": " + ec.message());

  DatasetIndex index;
  index.root = root;
  std::vector<std::string> orphans;
  for (const auto& path : audio)
  {
    const fs::path relative = fs::relative(path, root);
    const std::string rel = relative.generic_string();

    fs::path annotation;
    for (const auto& ext : options.annotationExtensions)
    {
      fs::path candidate = path;
      candidate.replace_extension(ext);
      if (fs::is_regular_file(candidate, ec))
      {
        annotation = candidate;
        break;
      }
    }
    if (annotation.empty())
    {
      orphans.push_back(rel);
      continue;
    }

    const auto pathTokens = tokens(rel);
    const auto nameTokens = tokens(relative.stem().string());
    const auto id = findParticipant(relative, participant);
    const auto kind = findKind(nameTokens, options);
    const bool personal = anyToken(pathTokens, options.personalTokens);
    const bool fixed = anyToken(pathTokens, options.fixedTokens);
    if (!id || !kind || personal == fixed)
    {
      index.unclassified.push_back(rel);
      continue;
    }

    IndexedFile f;
    f.relativePath = rel;
    f.audio = path;
    f.annotation = annotation;
    f.participant = *id;
    f.modality = personal ? Modality::Personal : Modality::Fixed;
    f.kind = *kind;
    f.discarded = anyToken(pathTokens, options.discardedTokens);
    index.files.push_back(std::move(f));
  }
  if (!orphans.empty())
  {
    std::sort(orphans.begin(), orphans.end());
    throw IndexError(std::move(orphans));
  }

  std::sort(index.files.begin(), index.files.end(),
            [](const IndexedFile& a, const IndexedFile& b) { return a.relativePath < b.relativePath; });
  std::sort(index.unclassified.begin(), index.unclassified.end());
  return index;
}

IndexValidation validateIndex(const DatasetIndex& index)
{
  IndexValidation v;
  const auto ids = index.participants();
  if (ids.size() != kExpectedParticipants)
    v.problems.push_back("expected " + std::to_string(kExpectedParticipants) + " participants, found " +
                         std::to_string(ids.size()));
  if (index.files.size() != kExpectedAudioFiles)
    v.problems.push_back("expected " + std::to_string(kExpectedAudioFiles) + " audio files, found " +
                         std::to_string(index.files.size()));

  std::map<std::pair<int, Modality>, std::vector<FileKind>> groups;
  for (const auto& f : index.files) groups[{f.participant, f.modality}].push_back(f.kind);
  for (int id : ids)
  {
    for (Modality m : {Modality::Personal, Modality::Fixed})
    {
      auto kinds = groups[{id, m}];
      std::sort(kinds.begin(), kinds.end());
      const std::vector<FileKind> want{FileKind::Kick, FileKind::Snare, FileKind::HihatClosed,
                                       FileKind::HihatOpen, FileKind::Improvisation};
      if (kinds != want)
        v.problems.push_back("participant " + std::to_string(id) + " (" + std::string(toString(m)) +
                             ") has " + std::to_string(kinds.size()) + " files, expected one of each of " +
                             std::to_string(kFilesPerModality) + " kinds");
    }
  }
  for (const auto& u : index.unclassified) v.problems.push_back("unrecognised file: " + u);
  return v;
}

std::size_t DatasetStats::total() const noexcept
{
  std::size_t t = 0;
  for (const auto& row : counts)
    for (auto c : row) t += c;
  return t;
}

std::size_t DatasetStats::rowTotal(Label l) const noexcept
{
  std::size_t t = 0;
  for (auto c : counts[static_cast<std::size_t>(l)]) t += c;
  return t;
}

std::size_t DatasetStats::columnTotal(std::size_t column) const noexcept
{
  std::size_t t = 0;
  for (const auto& row : counts) t += row[column];
  return t;
}

DatasetStats datasetStats(const DatasetIndex& index, bool includeDiscarded)
{
  DatasetStats s;
  std::set<int> ids;
  for (const auto& f : index.files)
  {
    if (f.discarded && !includeDiscarded) continue;
    ++s.files;
    ids.insert(f.participant);
    const std::size_t column = f.kind == FileKind::Improvisation ? 2
                               : f.modality == Modality::Personal ? 0
                                                                  : 1;
    const auto onsets = readAnnotationFile(f.annotation.string()).onsets;
    if (onsets.labels)
    {
      for (Label l : *onsets.labels) ++s.counts[static_cast<std::size_t>(l)][column];
    }
    else if (f.kind == FileKind::Improvisation)
    {
      s.unlabeled += onsets.size();
    }
    else
    {
      s.counts[static_cast<std::size_t>(labelFor(f.kind))][column] += onsets.size();
    }
  }
  s.participants = ids.size();
  return s;
}

std::string formatStatsTable(const DatasetStats& stats)
{
  std::ostringstream out;
  out << "label";
  for (auto c : kStatsColumns) out << '\t' << c;
  out << "\ttotal\n";
  for (Label l : kAllLabels)
  {
    out << toTag(l);
    for (auto c : stats.counts[static_cast<std::size_t>(l)]) out << '\t' << c;
    out << '\t' << stats.rowTotal(l) << '\n';
  }
  out << "total";
  for (std::size_t c = 0; c < DatasetStats::kColumns; ++c) out << '\t' << stats.columnTotal(c);
  out << '\t' << stats.total() << '\n';
  return out.str();
}

std::vector<std::string> checkAnnotationTimes(const DatasetIndex& index)
{
  std::vector<std::string> problems;
  for (const auto& f : index.files)
  {
    const double duration = readWavInfo(f.audio.string()).duration();
    const auto onsets = readAnnotationFile(f.annotation.string()).onsets;
    if (!onsets.empty() && (onsets.times.front() < 0.0 || onsets.times.back() > duration))
      problems.push_back(f.relativePath + ": onset at " + std::to_string(onsets.times.back()) +
                         " s lies beyond the audio duration of " + std::to_string(duration) + " s");
  }
  return problems;
}

std::string indexSummaryJson(const DatasetIndex& index, const IndexValidation& validation)
{
  nlohmann::json j;
  j["root"] = index.root.string();
  j["participants"] = index.participants().size();
  j["audio_files"] = index.files.size();
  std::size_t discarded = 0;
  for (const auto& f : index.files) discarded += f.discarded ? 1 : 0;
  j["discarded_files"] = discarded;
  j["unclassified"] = index.unclassified;
  j["valid"] = validation.ok();
  j["problems"] = validation.problems;
  return j.dump();
}

FileSet toFileSet(const DatasetIndex& index, bool includeDiscarded,
                  const std::optional<fs::path>& curveDir)
{
  FileSet set;
  for (const auto& f : index.files)
  {
    if (f.discarded && !includeDiscarded) continue;
    std::string curve;
    if (curveDir)
    {
      fs::path rel(f.relativePath);
      rel.replace_extension(".curve");
      curve = (*curveDir / rel).string();
    }
    set.push_back(fileItem(f.relativePath, f.audio.string(), f.annotation.string(), curve));
  }
  return set;
}

} // namespace vponset
