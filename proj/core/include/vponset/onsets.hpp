#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace vponset {

/// Utterance classes used in the AVP annotations.
enum class Label
{
  Kick,       // kd
  Snare,      // sd
  HihatClosed, // hhc
  HihatOpen,  // hho
};

inline constexpr Label kAllLabels[] = {Label::Kick, Label::Snare, Label::HihatClosed,
                                       Label::HihatOpen};

std::string_view toTag(Label label) noexcept;
std::optional<Label> parseLabel(std::string_view tag) noexcept;

/// Strictly increasing onset times in seconds with optional parallel labels.
struct OnsetList
{
  std::vector<double> times;
  std::optional<std::vector<Label>> labels;

  std::size_t size() const noexcept { return times.size(); }
  bool empty() const noexcept { return times.empty(); }

  /// Throws ValidationError if times are negative, non-finite or not
  /// strictly increasing, or labels have the wrong length.
  void validate() const;

  bool operator==(const OnsetList&) const = default;
};

} // namespace vponset
