#include "zebra/bridge.hpp"

#include <atomic>
#include <cstring>
#include <fstream>
#include <thread>

#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/post.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <json.hpp>

#include "zebra/angles.hpp"
#include "zebra/error.hpp"

namespace zebra {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;
using nlohmann::json;

// --- Wire format ----------------------------------------------------------

std::string encode_pcm_frame(const AudioBlock& block) {
  const auto frames = static_cast<std::uint32_t>(block.frame_count);
  if (block.samples.size() != static_cast<std::size_t>(frames) * 2) {
    throw InvalidArgument("pcm frame: sample count does not match stereo frame count");
  }
  std::string out(kPcmHeaderBytes + block.samples.size() * 2, '\0');
  std::memcpy(out.data(), kPcmMagic, 4);
  for (int i = 0; i < 4; ++i) out[4 + i] = static_cast<char>((frames >> (8 * i)) & 0xff);
  char* p = out.data() + kPcmHeaderBytes;
  for (std::int16_t s : block.samples) {
    const auto u = static_cast<std::uint16_t>(s);
    *p++ = static_cast<char>(u & 0xff);
    *p++ = static_cast<char>(u >> 8);
  }
  return out;
}

std::vector<std::int16_t> decode_pcm_frame(const std::string& payload) {
  if (payload.size() < kPcmHeaderBytes || std::memcmp(payload.data(), kPcmMagic, 4) != 0) {
    throw InvalidArgument("pcm frame: bad magic");
  }
  std::uint32_t frames = 0;
  for (int i = 0; i < 4; ++i) frames |= static_cast<std::uint32_t>(static_cast<unsigned char>(payload[4 + i])) << (8 * i);
  if (payload.size() != kPcmHeaderBytes + static_cast<std::size_t>(frames) * 4) {
    throw InvalidArgument("pcm frame: length does not match frame count");
  }
  std::vector<std::int16_t> samples(static_cast<std::size_t>(frames) * 2);
  const auto* p = reinterpret_cast<const unsigned char*>(payload.data() + kPcmHeaderBytes);
  for (auto& s : samples) {
    s = static_cast<std::int16_t>(static_cast<std::uint16_t>(p[0] | (p[1] << 8)));
    p += 2;
  }
  return samples;
}

ClientMessage parse_client_message(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error&) {
    throw InvalidArgument("message is not valid JSON");
  }
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    throw InvalidArgument("message needs a string \"type\"");
  }
  const auto type = j["type"].get<std::string>();
  if (type == "tap") return TapMessage{};
  if (type != "control") throw InvalidArgument("unknown message type " + type);

  auto number = [&](const char* key) {
    if (!j.contains(key)) return 0.0;
    if (!j[key].is_number()) throw InvalidArgument(std::string("control.") + key + " must be a number");
    const double v = j[key].get<double>();
    if (!std::isfinite(v)) throw InvalidArgument(std::string("control.") + key + " must be finite");
    return v;
  };
  ControlMessage m;
  m.control.forward_speed = number("forward_speed");
  m.control.turn_rate = number("turn_rate");
  m.control.sidestep_speed = number("sidestep_speed");
  m.control.pitch_rate = number("pitch_rate");
  return m;
}

std::string control_message_json(const Control& c) {
  return json{{"type", "control"},
              {"forward_speed", c.forward_speed},
              {"turn_rate", c.turn_rate},
              {"sidestep_speed", c.sidestep_speed},
              {"pitch_rate", c.pitch_rate}}
      .dump();
}

std::string tap_message_json() { return R"({"type":"tap"})"; }

std::string hello_json(const Scenario& s, int sample_rate, std::size_t block_frames) {
  return json{{"type", "hello"},
              {"scenario", s.name},
              {"mode", std::string(mode_name(s.mode))},
              {"locale", s.locale == Locale::it ? "it" : "en"},
              {"sample_rate", sample_rate},
              {"channels", 2},
              {"block_frames", block_frames},
              {"control_rate", kControlRate},
              {"timeout_s", s.timeout_s},
              {"layout",
               {{"origin", {s.layout.origin.x, s.layout.origin.y}},
                {"orientation", s.layout.orientation},
                {"stripe_count", s.layout.stripe_count},
                {"stripe_width", s.layout.stripe_width},
                {"stripe_length", s.layout.stripe_length}}}}
      .dump();
}

std::string state_json(const Session& session) {
  const Pose& p = session.world().agent;
  const GuidanceDecision& d = session.decision();
  return json{{"type", "state"},
              {"time", session.world().time},
              {"tick", session.tick_index()},
              {"pose", {{"x", p.x}, {"y", p.y}, {"heading", p.heading}, {"pitch", p.pitch}}},
              {"instruction", std::string(instruction_name(d.instruction))},
              {"quantity", d.quantity},
              {"lateral_bias", d.lateral_bias},
              {"recognized", session.measures().valid}}
      .dump();
}

std::string instruction_json(double time, const GuidanceDecision& d) {
  return json{{"type", "instruction"},
              {"time", time},
              {"name", std::string(instruction_name(d.instruction))},
              {"quantity", d.quantity},
              {"lateral_bias", d.lateral_bias}}
      .dump();
}

std::string speech_json(const SpeechEvent& e) {
  return json{{"type", "speech"},
              {"time", e.time},
              {"instruction", std::string(instruction_name(e.instruction))},
              {"text", e.text}}
      .dump();
}

std::string metrics_json(const SessionMetrics& m, bool partial) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  return json{{"type", "metrics"},
              {"partial", partial},
              {"scenario", m.scenario},
              {"mode", std::string(mode_name(m.mode))},
              {"seed", m.seed},
              {"completed", m.completed},
              {"aborted", m.aborted},
              {"time_to_align", opt(m.time_to_align)},
              {"time_to_cross", opt(m.time_to_cross)},
              {"message_count", m.message_count},
              {"tap_count", m.tap_count},
              {"duration", m.duration},
              {"csv", metrics_csv({m})}}
      .dump();
}

std::string error_json(const std::string& message) { return json{{"type", "error"}, {"message", message}}.dump(); }

// --- Server ---------------------------------------------------------------

namespace {

struct Outgoing {
  bool binary = false;
  bool close = false;
  std::string data;
};

constexpr std::size_t kOutboundCapacity = 256;
constexpr std::size_t kInboundCapacity = 256;

// Socket side: runs on the I/O thread. The session thread only pushes into
// `outbound` and posts `pump`.
class Connection : public std::enable_shared_from_this<Connection> {
 public:
  Connection(tcp::socket socket) : ws_(std::move(socket)), outbound_(kOutboundCapacity), inbound_(kInboundCapacity) {}

  void handshake() {
    ws_.set_option(websocket::stream_base::decorator(
        [](websocket::response_type& res) { res.set(beast::http::field::server, "zebra-bridge"); }));
    ws_.accept();
  }

  void start() { read(); }

  // Session thread. Returns false once the client is gone.
  bool send(Outgoing item) {
    if (disconnected_) return false;
    if (!outbound_.push(std::move(item))) return false;
    net::post(ws_.get_executor(), [self = shared_from_this()] { self->pump(); });
    return true;
  }

  std::optional<ClientMessage> poll() { return inbound_.try_pop(); }
  bool disconnected() const { return disconnected_; }
  bool finished() const { return finished_; }

 private:
  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      self->on_read(ec);
    });
  }

  void on_read(beast::error_code ec) {
    if (ec) {
      drop();
      return;
    }
    if (ws_.got_text()) {
      const std::string text = beast::buffers_to_string(buffer_.data());
      try {
        if (!inbound_.try_push(parse_client_message(text))) reply_error("inbound queue full, message dropped");
      } catch (const InvalidArgument& e) {
        reply_error(e.what());
      }
    } else {
      reply_error("binary frames are not accepted");
    }
    buffer_.consume(buffer_.size());
    read();
  }

  void reply_error(const std::string& message) {
    if (outbound_.try_push({false, false, error_json(message)})) pump();
  }

  void pump() {
    if (writing_ || disconnected_) return;
    auto item = outbound_.try_pop();
    if (!item) return;
    writing_ = true;
    current_ = std::move(*item);
    if (current_.close) {
      ws_.async_close(websocket::close_code::normal, [self = shared_from_this()](beast::error_code) {
        self->writing_ = false;
        self->finished_ = true;
      });
      return;
    }
    ws_.binary(current_.binary);
    ws_.async_write(net::buffer(current_.data), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      self->writing_ = false;
      if (ec) {
        self->drop();
        return;
      }
      self->pump();
    });
  }

  void drop() {
    disconnected_ = true;
    finished_ = true;
    outbound_.close();
  }

  websocket::stream<tcp::socket> ws_;
  beast::flat_buffer buffer_;
  BoundedQueue<Outgoing> outbound_;
  BoundedQueue<ClientMessage> inbound_;
  Outgoing current_;
  bool writing_ = false;
  std::atomic<bool> disconnected_{false};
  std::atomic<bool> finished_{false};
};

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

struct BridgeServer::Impl {
  BridgeOptions options;
  net::io_context ioc;
  tcp::acceptor acceptor{ioc};
};

BridgeServer::BridgeServer(BridgeOptions options) : impl_(std::make_unique<Impl>()) {
  options.scenario.validate();
  options.pan_law.validate();
  if (options.block_frames == 0) throw InvalidArgument("bridge: block_frames must be > 0");
  impl_->options = std::move(options);
  try {
    const tcp::endpoint endpoint(net::ip::make_address(impl_->options.address), impl_->options.port);
    impl_->acceptor.open(endpoint.protocol());
    impl_->acceptor.set_option(net::socket_base::reuse_address(true));
    impl_->acceptor.bind(endpoint);
    impl_->acceptor.listen(1);
  } catch (const boost::system::system_error& e) {
    throw IoError(std::string("bridge: cannot listen: ") + e.what());
  }
}

BridgeServer::~BridgeServer() = default;

unsigned short BridgeServer::port() const { return impl_->acceptor.local_endpoint().port(); }

BridgeOutcome BridgeServer::run() {
  using clock = std::chrono::steady_clock;
  const BridgeOptions& opt = impl_->options;

  tcp::socket socket(impl_->ioc);
  impl_->acceptor.accept(socket);
  auto conn = std::make_shared<Connection>(std::move(socket));
  try {
    conn->handshake();
  } catch (const boost::system::system_error& e) {
    throw IoError(std::string("bridge: websocket handshake failed: ") + e.what());
  }
  impl_->acceptor.close();  // one client per server

  conn->start();
  auto work = net::make_work_guard(impl_->ioc);
  std::thread io([this] { impl_->ioc.run(); });

  Session session(opt.scenario, opt.session);
  BlockStream stream(opt.sample_rate, opt.block_frames, opt.pan_law);
  BridgeOutcome outcome;

  auto send_text = [&](std::string text) { conn->send({false, false, std::move(text)}); };
  send_text(hello_json(opt.scenario, opt.sample_rate, opt.block_frames));

  // Tick n is due at n / rate, block k once its last frame has been
  // simulated: (k + 1) * block_frames / sample_rate. Ticks win ties so every
  // event inside a block is pushed before the block is mixed.
  const auto rate = static_cast<std::int64_t>(kControlRate);
  const auto frames = static_cast<std::int64_t>(opt.block_frames);
  const std::int64_t sr = opt.sample_rate;
  const auto start = clock::now();
  auto due = [&](std::int64_t num, std::int64_t den) {
    return start + std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(
                       static_cast<double>(num) / static_cast<double>(den)));
  };

  Control control;
  std::int64_t end_frame = -1;  // set once the session has finished
  while (true) {
    if (conn->disconnected()) {
      if (!session.finished()) {
        session.abort("client disconnected");
        outcome.partial = true;
      }
      break;
    }
    const std::int64_t n = session.tick_index();
    const std::int64_t k = static_cast<std::int64_t>(stream.blocks_emitted());
    const bool tick_next = !session.finished() && n * sr <= (k + 1) * frames * rate;

    if (tick_next) {
      if (opt.realtime) std::this_thread::sleep_until(due(n, rate));
      bool tap = false;
      while (auto msg = conn->poll()) {
        if (auto* c = std::get_if<ControlMessage>(&*msg)) control = c->control;
        else tap = true;
      }
      if (tap) outcome.taps.push_back(n);
      TickResult r = session.tick(control, tap);
      stream.push(r.audio);
      if (r.instruction_changed) send_text(instruction_json(n / kControlRate, r.decision));
      for (const auto& s : r.speech) send_text(speech_json(s));
      send_text(state_json(session));
      if (session.finished()) {
        SessionResult res{session.metrics(), session.audio_events(), session.control_log()};
        end_frame = static_cast<std::int64_t>(session_audio_frames(res, opt.sample_rate, opt.block_frames));
      }
      continue;
    }

    if (end_frame >= 0 && stream.frontier() >= end_frame) break;
    if (opt.realtime) std::this_thread::sleep_until(due((k + 1) * frames, sr));
    conn->send({true, false, encode_pcm_frame(stream.next_block())});
    outcome.block_emit_offsets.push_back(clock::now() - start);
  }

  outcome.metrics = session.metrics();
  outcome.control_log = session.control_log();
  outcome.blocks_sent = stream.blocks_emitted();
  outcome.replay_scenario = opt.scenario;
  outcome.replay_scenario.policy = AgentPolicy::replay;
  outcome.replay_scenario.controls = outcome.control_log;
  outcome.replay_scenario.taps = outcome.taps;

  if (opt.metrics_path) write_text(*opt.metrics_path, metrics_csv({outcome.metrics}));
  if (opt.events_path) write_text(*opt.events_path, event_log_csv(outcome.metrics.event_log));
  if (opt.replay_path) write_text(*opt.replay_path, scenario_to_json(outcome.replay_scenario));

  if (!conn->disconnected()) {
    send_text(metrics_json(outcome.metrics, outcome.partial));
    conn->send({false, true, {}});
  }
  // Give the close handshake a moment, then tear down regardless.
  const auto deadline = clock::now() + std::chrono::seconds(2);
  while (!conn->finished() && clock::now() < deadline) std::this_thread::sleep_for(std::chrono::milliseconds(5));
  work.reset();
  impl_->ioc.stop();
  io.join();
  return outcome;
}

}  // namespace zebra
