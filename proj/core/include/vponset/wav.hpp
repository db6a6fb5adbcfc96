#pragma once

#include "vponset/audio.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace vponset {

struct WavInfo
{
  int sampleRate{0};
  int channels{0};
  int bitsPerSample{0};
  bool isFloat{false};
  std::size_t frames{0};

  double duration() const noexcept
  {
    return sampleRate > 0 ? static_cast<double>(frames) / sampleRate : 0.0;
  }
};

/// Decodes a RIFF/WAVE image holding linear PCM (16, 24 or 32 bit) or
/// 32-bit float. Channels are averaged to mono; integer samples are scaled
/// by 2^-(bits-1). Throws FormatError naming the defect.
AudioBuffer decodeWav(std::span<const std::uint8_t> bytes);
WavInfo inspectWav(std::span<const std::uint8_t> bytes);

AudioBuffer readAudio(const std::string& path);
WavInfo readWavInfo(const std::string& path);

/// Integer PCM encoding of a mono buffer; samples are clipped to [-1, 1].
std::vector<std::uint8_t> encodeWav(const AudioBuffer& audio, int bitsPerSample = 16);
void writeWav(const std::string& path, const AudioBuffer& audio, int bitsPerSample = 16);

} // namespace vponset
