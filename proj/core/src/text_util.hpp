#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace vponset::detail {

std::string_view trim(std::string_view s) noexcept;

/// Full-string parse; nullopt on trailing garbage or non-finite results.
std::optional<double> parseDouble(std::string_view s) noexcept;

/// Shortest representation that parses back to the same double.
std::string formatExact(double v);

template <typename Fn>
void forEachLine(std::string_view text, Fn&& fn)
{
  std::size_t lineNo = 0;
  while (!text.empty())
  {
    ++lineNo;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(lineNo, line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
}

std::string readTextFile(const std::string& path);
void writeTextFile(const std::string& path, std::string_view contents);

} // namespace vponset::detail
