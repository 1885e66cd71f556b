#pragma once

#include <atomic>
#include <cstdint>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "lcc/stream.hpp"

namespace lcc {

struct ServerOptions {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;  // 0 = ephemeral
  SessionConfig defaults;
  std::size_t max_chunk_bytes = 1 << 20;
};

// TCP front end for StreamSession, one thread and one session per connection.
class StreamServer {
 public:
  explicit StreamServer(ServerOptions opts);
  ~StreamServer();

  StreamServer(const StreamServer&) = delete;
  StreamServer& operator=(const StreamServer&) = delete;

  /// Binds and listens; returns the bound port.
  std::uint16_t listen();
  /// Accept loop; returns after stop().
  void serve();
  void stop();

  std::uint16_t port() const { return port_; }

 private:
  void handle(int fd);

  ServerOptions opts_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::mutex workers_mutex_;
  std::vector<std::thread> workers_;
};

// Minimal blocking client used by tests and the loopback tooling: sends the
// handshake and the PCM, and collects every frame until the server closes.
std::vector<StreamFrame> stream_pcm(const std::string& host, std::uint16_t port,
                                    const std::string& handshake,
                                    std::span<const std::int16_t> pcm,
                                    std::size_t chunk_samples = 4096);

}  // namespace lcc
