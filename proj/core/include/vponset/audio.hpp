#pragma once

#include <vector>

namespace vponset {

/// Mono signal with amplitudes nominally in [-1, 1].
struct AudioBuffer
{
  std::vector<double> samples;
  int sampleRate{44100};

  double duration() const noexcept
  {
    return sampleRate > 0 ? static_cast<double>(samples.size()) / sampleRate : 0.0;
  }

  /// Throws EmptyInputError when there are no samples and ValidationError
  /// for a non-positive rate or non-finite samples.
  void validate() const;
};

} // namespace vponset
