#pragma once

// WebSocket service for one interactive session.
//
// Text frames carry JSON objects with a "type" field.
//   client -> server: control {forward_speed, turn_rate, sidestep_speed, pitch_rate} (m/s, rad/s)
//                     tap {}
//   server -> client: hello, state, instruction, speech, metrics, error
// Binary frames carry audio: "PCMB", frame count as u32 little-endian, then
// interleaved stereo int16 little-endian samples.

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "zebra/audio_io.hpp"
#include "zebra/session.hpp"

namespace zebra {

inline constexpr char kPcmMagic[4] = {'P', 'C', 'M', 'B'};
inline constexpr std::size_t kPcmHeaderBytes = 8;

std::string encode_pcm_frame(const AudioBlock& block);
// Returns the interleaved samples; throws InvalidArgument on a bad header or length.
std::vector<std::int16_t> decode_pcm_frame(const std::string& payload);

struct ControlMessage {
  Control control;
};
struct TapMessage {};
using ClientMessage = std::variant<ControlMessage, TapMessage>;

// Throws InvalidArgument for malformed or unknown messages.
ClientMessage parse_client_message(const std::string& text);
std::string control_message_json(const Control& control);
std::string tap_message_json();

std::string hello_json(const Scenario& scenario, int sample_rate, std::size_t block_frames);
std::string state_json(const Session& session);
std::string instruction_json(double time, const GuidanceDecision& decision);
std::string speech_json(const SpeechEvent& event);
std::string metrics_json(const SessionMetrics& metrics, bool partial);
std::string error_json(const std::string& message);

// Blocking FIFO with a fixed capacity. push() waits while full; close()
// wakes every waiter and makes further pushes fail.
template <class T>
class BoundedQueue {
 public:
  explicit BoundedQueue(std::size_t capacity) : capacity_(capacity) {}

  bool push(T value) {
    std::unique_lock lock(mutex_);
    not_full_.wait(lock, [&] { return closed_ || items_.size() < capacity_; });
    if (closed_) return false;
    items_.push_back(std::move(value));
    return true;
  }

  bool try_push(T value) {
    std::lock_guard lock(mutex_);
    if (closed_ || items_.size() >= capacity_) return false;
    items_.push_back(std::move(value));
    return true;
  }

  std::optional<T> try_pop() {
    std::lock_guard lock(mutex_);
    if (items_.empty()) return std::nullopt;
    T value = std::move(items_.front());
    items_.pop_front();
    not_full_.notify_one();
    return value;
  }

  void close() {
    std::lock_guard lock(mutex_);
    closed_ = true;
    not_full_.notify_all();
  }

  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return items_.size();
  }

 private:
  std::size_t capacity_;
  mutable std::mutex mutex_;
  std::condition_variable not_full_;
  std::deque<T> items_;
  bool closed_ = false;
};

struct BridgeOptions {
  std::string address = "127.0.0.1";
  unsigned short port = 8765;  // 0 picks a free port
  Scenario scenario;
  SessionOptions session;
  PanLaw pan_law;
  int sample_rate = kDefaultSampleRate;
  std::size_t block_frames = kDefaultBlockFrames;
  bool realtime = true;  // pace ticks and blocks against the wall clock
  std::optional<std::filesystem::path> metrics_path;
  std::optional<std::filesystem::path> events_path;
  std::optional<std::filesystem::path> replay_path;  // scenario with the recorded controls
};

struct BridgeOutcome {
  SessionMetrics metrics;
  bool partial = false;  // client left before the session ended
  std::vector<ControlChange> control_log;
  std::vector<std::int64_t> taps;
  std::size_t blocks_sent = 0;
  std::vector<std::chrono::steady_clock::duration> block_emit_offsets;  // from session start
  // The scenario that replays this session under the replay policy.
  Scenario replay_scenario;
};

class BridgeServer {
 public:
  // Binds and listens immediately; throws IoError if the port is unavailable.
  explicit BridgeServer(BridgeOptions options);
  ~BridgeServer();
  BridgeServer(const BridgeServer&) = delete;
  BridgeServer& operator=(const BridgeServer&) = delete;

  unsigned short port() const;

  // Accepts one client and runs the session on the calling thread until it
  // completes, times out or the client disconnects.
  BridgeOutcome run();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace zebra
