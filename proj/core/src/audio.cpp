#include "vponset/audio.hpp"

#include "vponset/error.hpp"

#include <algorithm>
#include <cmath>

namespace vponset {

void AudioBuffer::validate() const
{
  if (samples.empty()) throw EmptyInputError();
  if (sampleRate <= 0)
    throw ValidationError("sample rate must be positive, got " + std::to_string(sampleRate));
  if (!std::all_of(samples.begin(), samples.end(), [](double s) { return std::isfinite(s); }))
    throw ValidationError("audio contains non-finite samples");
}

} // namespace vponset
