#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "zebra/audio_io.hpp"
#include "zebra/error.hpp"

using namespace zebra;
namespace fs = std::filesystem;

namespace {

fs::path temp_path(const std::string& name) {
  return fs::temp_directory_path() / ("zebra_test_" + std::to_string(::getpid()) + "_" + name);
}

AudioEvent note_at(double t, double f0, double pan = 0.0) {
  AudioEvent e;
  e.time = t;
  e.instruction = Instruction::RotateRight;
  e.stimulus = metal_stimulus(f0);
  e.pan = pan;
  return e;
}

// Onset block indices: first non-silent block after at least one silent one.
std::vector<std::size_t> onset_blocks(const std::vector<AudioBlock>& blocks) {
  std::vector<std::size_t> out;
  bool silent_before = true;
  for (const auto& b : blocks) {
    bool silent = true;
    for (auto s : b.samples) silent &= s == 0;
    if (!silent && silent_before) out.push_back(b.index);
    silent_before = silent;
  }
  return out;
}

}  // namespace

TEST(Wav, HeaderAndSize) {
  const auto path = temp_path("size.wav");
  std::vector<std::int16_t> pcm(48000, 0);  // one second mono
  write_wav(pcm, 48000, 1, path);
  EXPECT_EQ(fs::file_size(path), 44u + 96000u);
  std::ifstream in(path, std::ios::binary);
  char head[44];
  in.read(head, 44);
  EXPECT_EQ(std::string(head, 4), "RIFF");
  EXPECT_EQ(std::string(head + 8, 4), "WAVE");
  EXPECT_EQ(std::string(head + 36, 4), "data");
  fs::remove(path);
}

TEST(Wav, RoundTrip) {
  const auto path = temp_path("rt.wav");
  std::vector<std::int16_t> pcm;
  for (int i = 0; i < 2000; ++i) pcm.push_back(static_cast<std::int16_t>((i * 37) % 65536 - 32768));
  write_wav(pcm, 44100, 2, path);
  const auto w = read_wav(path);
  EXPECT_EQ(w.sample_rate, 44100);
  EXPECT_EQ(w.channels, 2);
  EXPECT_EQ(w.frame_count(), 1000u);
  EXPECT_EQ(w.samples, pcm);
  fs::remove(path);
}

TEST(Wav, Errors) {
  std::vector<std::int16_t> pcm(10);
  EXPECT_THROW(write_wav(pcm, 48000, 3, temp_path("x.wav")), InvalidArgument);
  EXPECT_THROW(write_wav(pcm, 48000, 1, "/nonexistent/dir/x.wav"), IoError);
  EXPECT_THROW(read_wav("/nonexistent/x.wav"), IoError);
}

TEST(Quantize, RoundingAndClamp) {
  const std::vector<float> l = {0.0f, 1.0f, -1.0f, 2.0f, -3.0f, 0.6f / 32767.0f, -0.6f / 32767.0f, 0.4f / 32767.0f};
  const std::vector<float> r(l.size(), 0.25f);
  const auto q = quantize_interleaved(l, r);
  ASSERT_EQ(q.size(), 2 * l.size());
  EXPECT_EQ(q[0], 0);
  EXPECT_EQ(q[2], 32767);
  EXPECT_EQ(q[4], -32767);
  EXPECT_EQ(q[6], 32767);
  EXPECT_EQ(q[8], -32767);
  EXPECT_EQ(q[10], 1);
  EXPECT_EQ(q[12], -1);
  EXPECT_EQ(q[14], 0);
  EXPECT_EQ(q[1], static_cast<std::int16_t>(std::lround(0.25 * 32767)));
}

TEST(Render, OfflinePlacesEventsAtTheirFrames) {
  const std::vector<AudioEvent> events = {note_at(0.1, 1200.0)};
  const auto pcm = render_offline(events, 48000, 24000);
  ASSERT_EQ(pcm.size(), 48000u);
  const std::int64_t start = event_start_frame(events[0], 48000);
  EXPECT_EQ(start, 4800);
  for (std::int64_t i = 0; i < start; ++i) ASSERT_EQ(pcm[2 * i], 0);
  bool any = false;
  for (std::int64_t i = start; i < start + 200; ++i) any |= pcm[2 * i] != 0;
  EXPECT_TRUE(any);
}

TEST(Stream, TwoHertzTrainHitsExpectedBlocks) {
  BlockStream stream(48000, 960);
  std::vector<AudioEvent> events;
  for (int i = 0; i < 6; ++i) events.push_back(note_at(0.5 * i, 1200.0));
  stream.push(events);
  std::vector<AudioBlock> blocks;
  for (int i = 0; i < 150; ++i) blocks.push_back(stream.next_block());
  EXPECT_EQ(blocks.back().index, 149u);
  EXPECT_EQ(onset_blocks(blocks), (std::vector<std::size_t>{0, 25, 50, 75, 100, 125}));
  for (const auto& b : blocks) {
    EXPECT_EQ(b.frame_count, 960u);
    EXPECT_EQ(b.samples.size(), 1920u);
  }
}

TEST(Stream, MatchesOfflineWithIncrementalPushes) {
  PanLaw law;
  std::vector<AudioEvent> events;
  for (int i = 0; i < 12; ++i) events.push_back(note_at(0.137 * i, 300.0 + 70 * i, (i % 5 - 2) / 2.0));
  events[3].gain_offset_db = 12.0;
  const std::size_t frames = 960 * 100;
  const auto offline = render_offline(events, 48000, frames, law);

  BlockStream stream(48000, 960, law);
  std::vector<std::int16_t> streamed;
  std::size_t next = 0;
  while (streamed.size() < offline.size()) {
    const double block_end = static_cast<double>(stream.frontier() + 960) / 48000.0;
    while (next < events.size() && events[next].time < block_end) stream.push(events[next++]);
    const auto b = stream.next_block();
    streamed.insert(streamed.end(), b.samples.begin(), b.samples.end());
  }
  EXPECT_EQ(streamed, offline);
}

TEST(Stream, LatePushThrows) {
  BlockStream stream(48000, 960);
  stream.next_block();
  EXPECT_THROW(stream.push(note_at(0.01, 500.0)), StateError);
  EXPECT_NO_THROW(stream.push(note_at(0.02, 500.0)));
  EXPECT_TRUE(stream.active());
}

TEST(Stream, RejectsBadConfiguration) {
  EXPECT_THROW(BlockStream(48000, 0), InvalidArgument);
  EXPECT_THROW(BlockStream(0, 960), InvalidArgument);
}
