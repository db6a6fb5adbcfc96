#include "vponset/wav.hpp"

#include "vponset/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>

namespace vponset {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t readU32(std::span<const std::uint8_t> b, std::size_t at)
{
  return static_cast<std::uint32_t>(b[at]) | static_cast<std::uint32_t>(b[at + 1]) << 8 |
         static_cast<std::uint32_t>(b[at + 2]) << 16 | static_cast<std::uint32_t>(b[at + 3]) << 24;
}

std::uint16_t readU16(std::span<const std::uint8_t> b, std::size_t at)
{
  return static_cast<std::uint16_t>(b[at] | b[at + 1] << 8);
}

bool tagIs(std::span<const std::uint8_t> b, std::size_t at, const char* tag)
{
  return std::memcmp(b.data() + at, tag, 4) == 0;
}

struct Layout
{
  WavInfo info;
  std::span<const std::uint8_t> data;
};

Layout parseLayout(std::span<const std::uint8_t> bytes)
{
  if (bytes.size() < 12 || !tagIs(bytes, 0, "RIFF") || !tagIs(bytes, 8, "WAVE"))
    throw FormatError("not a RIFF/WAVE file");

  std::optional<WavInfo> fmt;
  std::optional<std::span<const std::uint8_t>> data;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size())
  {
    const std::uint32_t size = readU32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (tagIs(bytes, pos, "fmt "))
    {
      if (size < 16 || body + size > bytes.size()) throw FormatError("truncated fmt chunk");
      std::uint16_t format = readU16(bytes, body);
      if (format == kFormatExtensible)
      {
        if (size < 40) throw FormatError("truncated WAVE_FORMAT_EXTENSIBLE fmt chunk");
        format = readU16(bytes, body + 24);
      }
      WavInfo info;
      info.channels = readU16(bytes, body + 2);
      info.sampleRate = static_cast<int>(readU32(bytes, body + 4));
      info.bitsPerSample = readU16(bytes, body + 14);
      if (format == kFormatFloat)
      {
        if (info.bitsPerSample != 32)
          throw FormatError("unsupported float sample width " +
                            std::to_string(info.bitsPerSample));
        info.isFloat = true;
      }
      else if (format == kFormatPcm)
      {
        if (info.bitsPerSample != 16 && info.bitsPerSample != 24 && info.bitsPerSample != 32)
          throw FormatError("unsupported PCM sample width " +
                            std::to_string(info.bitsPerSample));
      }
      else
      {
        throw FormatError("compressed or unsupported WAV format tag " + std::to_string(format));
      }
      if (info.channels < 1) throw FormatError("fmt chunk declares no channels");
      if (info.sampleRate <= 0) throw FormatError("fmt chunk declares a zero sample rate");
      fmt = info;
    }
    else if (tagIs(bytes, pos, "data"))
    {
      if (body + size > bytes.size())
        throw FormatError("truncated data chunk: header declares " + std::to_string(size) +
                          " bytes, file holds " + std::to_string(bytes.size() - body));
      data = bytes.subspan(body, size);
    }
    pos = body + size + (size & 1u);
  }
  if (!fmt) throw FormatError("missing fmt chunk");
  if (!data) throw FormatError("missing data chunk");

  const std::size_t frameBytes =
      static_cast<std::size_t>(fmt->channels) * static_cast<std::size_t>(fmt->bitsPerSample / 8);
  if (data->size() % frameBytes != 0)
    throw FormatError("data chunk holds a partial sample frame");
  fmt->frames = data->size() / frameBytes;
  return {*fmt, *data};
}

std::vector<std::uint8_t> readBytes(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error reading " + path);
  return bytes;
}

void putU32(std::vector<std::uint8_t>& out, std::uint32_t v)
{
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void putU16(std::vector<std::uint8_t>& out, std::uint16_t v)
{
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

} // namespace

WavInfo inspectWav(std::span<const std::uint8_t> bytes) { return parseLayout(bytes).info; }

AudioBuffer decodeWav(std::span<const std::uint8_t> bytes)
{
  const auto [info, data] = parseLayout(bytes);
  const std::size_t width = static_cast<std::size_t>(info.bitsPerSample / 8);
  const double scale = info.isFloat ? 1.0 : std::ldexp(1.0, -(info.bitsPerSample - 1));

  AudioBuffer audio;
  audio.sampleRate = info.sampleRate;
  audio.samples.assign(info.frames, 0.0);
  std::size_t at = 0;
  for (std::size_t f = 0; f < info.frames; ++f)
  {
    double acc = 0.0;
    for (int c = 0; c < info.channels; ++c, at += width)
    {
      if (info.isFloat)
      {
        float v;
        const std::uint32_t raw = readU32(data, at);
        std::memcpy(&v, &raw, sizeof v);
        acc += v;
        continue;
      }
      std::int32_t v = 0;
      switch (width)
      {
      case 2: v = static_cast<std::int16_t>(readU16(data, at)); break;
      case 3:
        v = static_cast<std::int32_t>(static_cast<std::uint32_t>(data[at]) << 8 |
                                      static_cast<std::uint32_t>(data[at + 1]) << 16 |
                                      static_cast<std::uint32_t>(data[at + 2]) << 24) >>
            8;
        break;
      default: v = static_cast<std::int32_t>(readU32(data, at)); break;
      }
      acc += v * scale;
    }
    audio.samples[f] = acc / info.channels;
  }
  return audio;
}

AudioBuffer readAudio(const std::string& path)
{
  const auto bytes = readBytes(path);
  try
  {
    return decodeWav(bytes);
  }
  catch (const FormatError& e)
  {
    throw FormatError(path + ": " + e.what());
  }
}

WavInfo readWavInfo(const std::string& path)
{
  const auto bytes = readBytes(path);
  try
  {
    return inspectWav(bytes);
  }
  catch (const FormatError& e)
  {
    throw FormatError(path + ": " + e.what());
  }
}

std::vector<std::uint8_t> encodeWav(const AudioBuffer& audio, int bitsPerSample)
{
  if (bitsPerSample != 16 && bitsPerSample != 24)
    throw ValidationError("only 16- and 24-bit output is supported");
  const auto width = static_cast<std::uint32_t>(bitsPerSample / 8);
  const auto dataSize = static_cast<std::uint32_t>(audio.samples.size() * width);
  const double full = std::ldexp(1.0, bitsPerSample - 1);

  std::vector<std::uint8_t> out;
  out.reserve(44 + dataSize);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  putU32(out, 36 + dataSize);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  putU32(out, 16);
  putU16(out, kFormatPcm);
  putU16(out, 1);
  putU32(out, static_cast<std::uint32_t>(audio.sampleRate));
  putU32(out, static_cast<std::uint32_t>(audio.sampleRate) * width);
  putU16(out, static_cast<std::uint16_t>(width));
  putU16(out, static_cast<std::uint16_t>(bitsPerSample));
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  putU32(out, dataSize);
  for (double s : audio.samples)
  {
    const double q = std::clamp(std::round(s * full), -full, full - 1.0);
    const auto v = static_cast<std::uint32_t>(static_cast<std::int32_t>(q));
    for (std::uint32_t b = 0; b < width; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
  }
  return out;
}

void writeWav(const std::string& path, const AudioBuffer& audio, int bitsPerSample)
{
  const auto bytes = encodeWav(audio, bitsPerSample);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("error writing " + path);
}

} // namespace vponset
