#include <array>
#include <cstring>
#include <fstream>

#include "zebra/audio_io.hpp"
#include "zebra/error.hpp"

namespace zebra {

namespace {

void put_u16(std::vector<char>& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::vector<char>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<char>((v >> shift) & 0xff));
}

void put_tag(std::vector<char>& out, const char (&tag)[5]) { out.insert(out.end(), tag, tag + 4); }

std::uint16_t get_u16(const unsigned char* p) { return static_cast<std::uint16_t>(p[0] | (p[1] << 8)); }

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

void write_wav(std::span<const std::int16_t> interleaved, int sample_rate, int channels,
               const std::filesystem::path& path) {
  if (channels != 1 && channels != 2) throw InvalidArgument("write_wav: channels must be 1 or 2");
  if (sample_rate <= 0) throw InvalidArgument("write_wav: sample_rate must be > 0");
  if (interleaved.size() % static_cast<std::size_t>(channels) != 0) {
    throw InvalidArgument("write_wav: sample count is not a multiple of the channel count");
  }

  const auto data_bytes = static_cast<std::uint32_t>(interleaved.size() * 2);
  const auto block_align = static_cast<std::uint16_t>(channels * 2);

  std::vector<char> bytes;
  bytes.reserve(44 + data_bytes);
  put_tag(bytes, "RIFF");
  put_u32(bytes, 36 + data_bytes);
  put_tag(bytes, "WAVE");
  put_tag(bytes, "fmt ");
  put_u32(bytes, 16);
  put_u16(bytes, 1);  // PCM
  put_u16(bytes, static_cast<std::uint16_t>(channels));
  put_u32(bytes, static_cast<std::uint32_t>(sample_rate));
  put_u32(bytes, static_cast<std::uint32_t>(sample_rate) * block_align);
  put_u16(bytes, block_align);
  put_u16(bytes, 16);
  put_tag(bytes, "data");
  put_u32(bytes, data_bytes);
  for (std::int16_t s : interleaved) put_u16(bytes, static_cast<std::uint16_t>(s));

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("write_wav: cannot open " + path.string());
  file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!file) throw IoError("write_wav: write failed for " + path.string());
}

WavData read_wav(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("read_wav: cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 || std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw IoError("read_wav: not a RIFF/WAVE file: " + path.string());
  }

  WavData wav;
  bool have_format = false;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t size = get_u32(chunk + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) throw IoError("read_wav: truncated chunk in " + path.string());
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) throw IoError("read_wav: short fmt chunk");
      const std::uint16_t format = get_u16(bytes.data() + body);
      const std::uint16_t bits = get_u16(bytes.data() + body + 14);
      if (format != 1 || bits != 16) throw IoError("read_wav: only PCM16 is supported");
      wav.channels = get_u16(bytes.data() + body + 2);
      wav.sample_rate = static_cast<int>(get_u32(bytes.data() + body + 4));
      have_format = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_format) throw IoError("read_wav: data chunk before fmt chunk");
      wav.samples.resize(size / 2);
      for (std::size_t i = 0; i < wav.samples.size(); ++i) {
        wav.samples[i] = static_cast<std::int16_t>(get_u16(bytes.data() + body + 2 * i));
      }
      return wav;
    }
    pos = body + size + (size & 1);
  }
  throw IoError("read_wav: no data chunk in " + path.string());
}

}  // namespace zebra
