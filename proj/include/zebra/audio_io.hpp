#pragma once

// PCM delivery: 16-bit WAV files and fixed-size stereo blocks rendered from a
// stream of scheduled audio events.
//
// Quantization clamps to [-1, 1], scales by 32767 and rounds half away from
// zero; no dither. Offline and streamed renders of the same events are
// sample-identical.

#include <cstdint>
#include <deque>
#include <filesystem>
#include <span>
#include <vector>

#include "zebra/scheduler.hpp"
#include "zebra/sonification.hpp"

namespace zebra {

inline constexpr int kDefaultSampleRate = 48000;
inline constexpr std::size_t kDefaultBlockFrames = 960;  // 20 ms at 48 kHz

struct AudioBlock {
  std::vector<std::int16_t> samples;  // interleaved L/R
  int sample_rate = kDefaultSampleRate;
  std::size_t frame_count = 0;
  std::size_t index = 0;  // block number since stream start
};

struct WavData {
  std::vector<std::int16_t> samples;  // interleaved
  int sample_rate = 0;
  int channels = 0;

  std::size_t frame_count() const { return channels > 0 ? samples.size() / channels : 0; }
};

// Canonical 44-byte-header RIFF/WAVE PCM16. Throws InvalidArgument for
// channels outside {1, 2} and IoError when the file cannot be written.
void write_wav(std::span<const std::int16_t> interleaved, int sample_rate, int channels,
               const std::filesystem::path& path);

// Reads PCM16 WAV files written by write_wav (and other plain PCM16 files).
WavData read_wav(const std::filesystem::path& path);

// Round-half-away-from-zero PCM16 conversion of planar float channels.
std::vector<std::int16_t> quantize_interleaved(std::span<const float> left, std::span<const float> right);

// Stimulus of one event, panned; gain_offset_db is applied at mix time.
StereoBuffer render_event(const AudioEvent& event, int sample_rate, const PanLaw& law);

std::int64_t event_start_frame(const AudioEvent& event, int sample_rate);

// Mixes every event into `total_frames` frames of interleaved stereo PCM16.
std::vector<std::int16_t> render_offline(std::span<const AudioEvent> events, int sample_rate,
                                         std::size_t total_frames, const PanLaw& law = {});

// Pull-based block renderer. Events are pushed as the session produces them;
// next_block() may be called once every event starting inside that block has
// been pushed. Pushing an event that starts inside an already emitted block
// throws StateError.
class BlockStream {
 public:
  BlockStream(int sample_rate, std::size_t block_frames, PanLaw law = {});

  void push(const AudioEvent& event);
  void push(std::span<const AudioEvent> events);

  AudioBlock next_block();

  // First frame not yet emitted.
  std::int64_t frontier() const { return static_cast<std::int64_t>(next_index_ * block_frames_); }
  std::size_t blocks_emitted() const { return next_index_; }
  std::size_t block_frames() const { return block_frames_; }
  int sample_rate() const { return sample_rate_; }
  // True while any pushed event still has samples to play.
  bool active() const { return !voices_.empty(); }

 private:
  struct Voice {
    std::int64_t start = 0;
    StereoBuffer buffer;
    float gain = 1.0f;
  };

  int sample_rate_;
  std::size_t block_frames_;
  PanLaw law_;
  std::size_t next_index_ = 0;
  std::deque<Voice> voices_;
};

}  // namespace zebra
