#include <algorithm>
#include <cmath>

#include "zebra/audio_io.hpp"
#include "zebra/error.hpp"
#include "zebra/simd.hpp"

namespace zebra {

namespace {

float gain_for(const AudioEvent& e) { return static_cast<float>(std::pow(10.0, e.gain_offset_db / 20.0)); }

// Adds the part of `buffer` (starting at absolute frame `start`) that overlaps
// [window_start, window_start + left.size()).
void mix_into(std::span<float> left, std::span<float> right, std::int64_t window_start, const StereoBuffer& buffer,
              std::int64_t start, float gain) {
  const auto window_len = static_cast<std::int64_t>(left.size());
  const auto len = static_cast<std::int64_t>(buffer.left.size());
  const std::int64_t from = std::max(start, window_start);
  const std::int64_t to = std::min(start + len, window_start + window_len);
  if (from >= to) return;
  const auto count = static_cast<std::size_t>(to - from);
  const auto src_offset = static_cast<std::size_t>(from - start);
  const auto dst_offset = static_cast<std::size_t>(from - window_start);
  const auto& k = simd::active_kernels();
  k.accumulate_scaled(left.subspan(dst_offset, count), std::span(buffer.left).subspan(src_offset, count), gain);
  k.accumulate_scaled(right.subspan(dst_offset, count), std::span(buffer.right).subspan(src_offset, count), gain);
}

}  // namespace

std::vector<std::int16_t> quantize_interleaved(std::span<const float> left, std::span<const float> right) {
  if (left.size() != right.size()) throw InvalidArgument("quantize: channel lengths differ");
  std::vector<std::int16_t> out(2 * left.size());
  simd::active_kernels().quantize_interleave_pcm16(left, right, out);
  return out;
}

StereoBuffer render_event(const AudioEvent& event, int sample_rate, const PanLaw& law) {
  const std::vector<float> mono = render_stimulus(event.stimulus, sample_rate);
  return pan_ild_itd(mono, std::clamp(event.pan, -1.0, 1.0), law, sample_rate);
}

std::int64_t event_start_frame(const AudioEvent& event, int sample_rate) {
  return std::llround(event.time * sample_rate);
}

std::vector<std::int16_t> render_offline(std::span<const AudioEvent> events, int sample_rate,
                                         std::size_t total_frames, const PanLaw& law) {
  std::vector<float> left(total_frames, 0.0f);
  std::vector<float> right(total_frames, 0.0f);
  for (const AudioEvent& e : events) {
    mix_into(left, right, 0, render_event(e, sample_rate, law), event_start_frame(e, sample_rate), gain_for(e));
  }
  return quantize_interleaved(left, right);
}

BlockStream::BlockStream(int sample_rate, std::size_t block_frames, PanLaw law)
    : sample_rate_(sample_rate), block_frames_(block_frames), law_(law) {
  if (block_frames == 0) throw InvalidArgument("block stream: block_frames must be > 0");
  if (sample_rate <= 0) throw InvalidArgument("block stream: sample_rate must be > 0");
}

void BlockStream::push(const AudioEvent& event) {
  const std::int64_t start = event_start_frame(event, sample_rate_);
  if (start < frontier()) throw StateError("block stream: event starts inside an emitted block");
  voices_.push_back({start, render_event(event, sample_rate_, law_), gain_for(event)});
}

void BlockStream::push(std::span<const AudioEvent> events) {
  for (const auto& e : events) push(e);
}

AudioBlock BlockStream::next_block() {
  const std::int64_t window_start = frontier();
  std::vector<float> left(block_frames_, 0.0f);
  std::vector<float> right(block_frames_, 0.0f);
  for (const Voice& v : voices_) mix_into(left, right, window_start, v.buffer, v.start, v.gain);

  const std::int64_t window_end = window_start + static_cast<std::int64_t>(block_frames_);
  std::erase_if(voices_, [&](const Voice& v) {
    return v.start + static_cast<std::int64_t>(v.buffer.left.size()) <= window_end;
  });

  AudioBlock block;
  block.samples = quantize_interleaved(left, right);
  block.sample_rate = sample_rate_;
  block.frame_count = block_frames_;
  block.index = next_index_++;
  return block;
}

}  // namespace zebra
