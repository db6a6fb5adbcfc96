#pragma once

#include "vponset/onsets.hpp"

#include <string>
#include <string_view>

namespace vponset {

struct AnnotationFile
{
  OnsetList onsets;
  /// Input lines were not in time order and have been sorted.
  bool reordered{false};
  /// Lines repeating an earlier time that were dropped.
  std::size_t duplicatesDropped{0};
};

/// Parses "time<SEP>label" lines, SEP being a tab or a comma and the label
/// optional. Blank and '#' lines are skipped. Either every line carries a
/// label or none does. Throws ParseError with the 1-based line number.
AnnotationFile parseAnnotations(std::string_view text);

/// Inverse of parseAnnotations for valid data.
std::string serializeAnnotations(const OnsetList& onsets, char separator = '\t');

AnnotationFile readAnnotationFile(const std::string& path);

} // namespace vponset
