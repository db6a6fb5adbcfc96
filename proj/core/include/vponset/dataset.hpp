#pragma once

#include "vponset/error.hpp"
#include "vponset/harness.hpp"
#include "vponset/onsets.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vponset {

enum class Modality
{
  Personal,
  Fixed,
};

enum class FileKind
{
  Kick,
  Snare,
  HihatClosed,
  HihatOpen,
  Improvisation,
};

std::string_view toString(Modality m) noexcept;
std::string_view toString(FileKind k) noexcept;

/// Rules used to recognise the corpus layout. Matching is case-insensitive
/// and works on tokens of the path relative to the root, split on '/', '_',
/// '-', ' ' and '.'.
struct IndexOptions
{
  std::vector<std::string> audioExtensions{".wav"};
  /// Tried in order next to each audio file (same stem).
  std::vector<std::string> annotationExtensions{".csv", ".txt", ".tsv"};
  /// ECMAScript regex applied to each token; group 1 is the participant id.
  std::string participantPattern{R"((?:participant|^p|[^a-z]p)[ _-]?(\d+))"};
  std::vector<std::string> personalTokens{"personal"};
  std::vector<std::string> fixedTokens{"fixed"};
  std::vector<std::string> discardedTokens{"discarded"};
  std::vector<std::string> improvisationTokens{"improv", "improvisation", "improvised"};
  std::vector<std::string> kickTokens{"kick", "kd"};
  std::vector<std::string> snareTokens{"snare", "sd"};
  std::vector<std::string> hihatClosedTokens{"hhclosed", "hhc", "closedhh", "closed"};
  std::vector<std::string> hihatOpenTokens{"hhopened", "hhopen", "hho", "openhh", "opened", "open"};
};

struct IndexedFile
{
  /// Path relative to the dataset root, '/'-separated.
  std::string relativePath;
  std::filesystem::path audio;
  std::filesystem::path annotation;
  int participant{0};
  Modality modality{Modality::Personal};
  FileKind kind{FileKind::Kick};
  bool discarded{false};
};

struct DatasetIndex
{
  std::filesystem::path root;
  /// Sorted by relativePath.
  std::vector<IndexedFile> files;
  /// Audio files whose participant, modality or kind could not be recognised.
  std::vector<std::string> unclassified;

  std::vector<int> participants() const;
};

/// Thrown when audio files have no annotation; lists every orphan.
class IndexError : public Error
{
public:
  explicit IndexError(std::vector<std::string> orphans);
  const std::vector<std::string>& orphans() const noexcept { return mOrphans; }

private:
  std::vector<std::string> mOrphans;
};

/// Walks `root` and pairs every audio file with its annotation. Throws
/// IoError if the root is not a directory and IndexError on orphans.
DatasetIndex buildIndex(const std::filesystem::path& root, const IndexOptions& options = {});

inline constexpr std::size_t kExpectedParticipants = 28;
inline constexpr std::size_t kExpectedAudioFiles = 280;
inline constexpr std::size_t kExpectedUtterances = 9780;
inline constexpr std::size_t kFilesPerModality = 5;

struct IndexValidation
{
  std::vector<std::string> problems;
  bool ok() const noexcept { return problems.empty(); }
};

/// Structural checks against the published corpus: participant and file
/// counts, five files per participant and modality, unclassified files.
IndexValidation validateIndex(const DatasetIndex& index);

/// Utterance counts in the corpus summary layout: rows kd, sd, hhc, hho;
/// columns personal, fixed, improvisation.
struct DatasetStats
{
  static constexpr std::size_t kColumns = 3;
  std::array<std::array<std::size_t, kColumns>, 4> counts{};
  /// Onsets in files without labels that could not be attributed.
  std::size_t unlabeled{0};
  std::size_t files{0};
  std::size_t participants{0};

  std::size_t total() const noexcept;
  std::size_t rowTotal(Label l) const noexcept;
  std::size_t columnTotal(std::size_t column) const noexcept;
};

inline constexpr std::array<std::string_view, DatasetStats::kColumns> kStatsColumns{
    "personal", "fixed", "improvisation"};

/// The published per-class counts (rows kd, sd, hhc, hho).
inline constexpr std::array<std::array<std::size_t, 3>, 4> kPublishedCounts{{
    {799, 818, 1201},
    {813, 839, 811},
    {799, 833, 673},
    {816, 830, 548},
}};

/// Counts labels from the annotation files. Unlabelled single-class files
/// are attributed to their class; unlabelled improvisations go to
/// `unlabeled`.
DatasetStats datasetStats(const DatasetIndex& index, bool includeDiscarded = true);

/// Tab-separated table: header, one row per label, a total row and a grand total.
std::string formatStatsTable(const DatasetStats& stats);

/// Annotation times outside [0, audio duration]; one message per offending file.
std::vector<std::string> checkAnnotationTimes(const DatasetIndex& index);

/// One-line JSON summary of an index.
std::string indexSummaryJson(const DatasetIndex& index, const IndexValidation& validation);

/// Evaluation items for the index, ordered by path. Discarded files are
/// skipped unless requested. With `curveDir`, each item also loads
/// `<curveDir>/<relative path without extension>.curve`.
FileSet toFileSet(const DatasetIndex& index, bool includeDiscarded = false,
                  const std::optional<std::filesystem::path>& curveDir = std::nullopt);

} // namespace vponset
