#include "vponset/onsets.hpp"

#include "vponset/error.hpp"

#include <cmath>
#include <string>

namespace vponset {

std::string_view toTag(Label label) noexcept
{
  switch (label)
  {
  case Label::Kick: return "kd";
  case Label::Snare: return "sd";
  case Label::HihatClosed: return "hhc";
  case Label::HihatOpen: return "hho";
  }
  return "?";
}

std::optional<Label> parseLabel(std::string_view tag) noexcept
{
  for (Label l : kAllLabels)
    if (toTag(l) == tag) return l;
  return std::nullopt;
}

void OnsetList::validate() const
{
  if (labels && labels->size() != times.size())
    throw ValidationError("onset list has " + std::to_string(times.size()) + " times but " +
                          std::to_string(labels->size()) + " labels");
  for (std::size_t i = 0; i < times.size(); ++i)
  {
    if (!std::isfinite(times[i]) || times[i] < 0.0)
      throw ValidationError("onset " + std::to_string(i) + " is negative or not finite");
    if (i > 0 && !(times[i] > times[i - 1]))
      throw ValidationError("onset times are not strictly increasing at index " +
                            std::to_string(i));
  }
}

} // namespace vponset
