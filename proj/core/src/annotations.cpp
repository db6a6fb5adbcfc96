#include "vponset/annotations.hpp"

#include "vponset/error.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <numeric>

namespace vponset {

AnnotationFile parseAnnotations(std::string_view text)
{
  struct Row
  {
    double time;
    std::optional<Label> label;
    std::size_t line;
  };
  std::vector<Row> rows;

  detail::forEachLine(text, [&](std::size_t lineNo, std::string_view raw) {
    const auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#') return;
    const auto sep = line.find_first_of("\t,");
    const auto timeField = detail::trim(line.substr(0, sep));
    const auto t = detail::parseDouble(timeField);
    if (!t) throw ParseError(lineNo, "cannot parse onset time \"" + std::string(timeField) + "\"");
    if (*t < 0.0) throw ParseError(lineNo, "negative onset time");

    std::optional<Label> label;
    if (sep != std::string_view::npos)
    {
      const auto tag = detail::trim(line.substr(sep + 1));
      if (tag.find_first_of("\t,") != std::string_view::npos)
        throw ParseError(lineNo, "too many fields");
      if (!tag.empty())
      {
        label = parseLabel(tag);
        if (!label) throw ParseError(lineNo, "unknown label \"" + std::string(tag) + "\"");
      }
    }
    rows.push_back({*t, label, lineNo});
  });

  const bool labelled = !rows.empty() && rows.front().label.has_value();
  for (const auto& r : rows)
    if (r.label.has_value() != labelled)
      throw ParseError(r.line, "labels must be present on every line or on none");

  AnnotationFile out;
  out.reordered = !std::is_sorted(rows.begin(), rows.end(),
                                  [](const Row& a, const Row& b) { return a.time < b.time; });
  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row& a, const Row& b) { return a.time < b.time; });
  if (labelled) out.onsets.labels.emplace();
  for (const auto& r : rows)
  {
    if (!out.onsets.times.empty() && out.onsets.times.back() == r.time)
    {
      ++out.duplicatesDropped;
      continue;
    }
    out.onsets.times.push_back(r.time);
    if (labelled) out.onsets.labels->push_back(*r.label);
  }
  return out;
}

std::string serializeAnnotations(const OnsetList& onsets, char separator)
{
  std::string out;
  for (std::size_t i = 0; i < onsets.size(); ++i)
  {
    out += detail::formatExact(onsets.times[i]);
    if (onsets.labels)
    {
      out += separator;
      out += toTag((*onsets.labels)[i]);
    }
    out += '\n';
  }
  return out;
}

AnnotationFile readAnnotationFile(const std::string& path)
{
  const auto text = detail::readTextFile(path);
  try
  {
    return parseAnnotations(text);
  }
  catch (const ParseError& e)
  {
    throw FormatError(path + ": " + e.what());
  }
}

} // namespace vponset
