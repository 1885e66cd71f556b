#include "lcc/server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <iostream>

#include "lcc/error.hpp"

namespace lcc {
namespace {

constexpr std::size_t kMaxHandshakeBytes = 64 * 1024;

class Socket {
 public:
  explicit Socket(int fd = -1) : fd_(fd) {}
  ~Socket() { reset(); }
  Socket(Socket&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
  Socket& operator=(Socket&& other) noexcept {
    if (this != &other) {
      reset();
      fd_ = std::exchange(other.fd_, -1);
    }
    return *this;
  }

  int get() const { return fd_; }
  void reset() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_;
};

bool read_exact(int fd, std::uint8_t* out, std::size_t n) {
  while (n > 0) {
    const ssize_t got = ::recv(fd, out, n, 0);
    if (got < 0 && errno == EINTR) continue;
    if (got <= 0) return false;
    out += got;
    n -= static_cast<std::size_t>(got);
  }
  return true;
}

bool write_all(int fd, const std::uint8_t* data, std::size_t n) {
  while (n > 0) {
    const ssize_t sent = ::send(fd, data, n, MSG_NOSIGNAL);
    if (sent < 0 && errno == EINTR) continue;
    if (sent <= 0) return false;
    data += sent;
    n -= static_cast<std::size_t>(sent);
  }
  return true;
}

bool send_frames(int fd, const std::vector<StreamFrame>& frames) {
  for (const auto& f : frames) {
    const auto bytes = serialize_frame(f);
    if (!write_all(fd, bytes.data(), bytes.size())) return false;
  }
  return true;
}

bool read_line(int fd, std::string& line) {
  line.clear();
  char c;
  while (line.size() < kMaxHandshakeBytes) {
    const ssize_t got = ::recv(fd, &c, 1, 0);
    if (got < 0 && errno == EINTR) continue;
    if (got <= 0) return false;
    if (c == '\n') return true;
    line.push_back(c);
  }
  return false;
}

sockaddr_in make_address(const std::string& host, std::uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    throw Error(Errc::invalid_argument, "bad IPv4 address '" + host + "'");
  }
  return addr;
}

}  // namespace

StreamServer::StreamServer(ServerOptions opts) : opts_(std::move(opts)) {}

StreamServer::~StreamServer() {
  stop();
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

std::uint16_t StreamServer::listen() {
  opts_.defaults.validate();
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw Error(Errc::io, std::string("socket: ") + std::strerror(errno));
  listen_fd_ = fd;
  const int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);

  sockaddr_in addr = make_address(opts_.host, opts_.port);
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    throw Error(Errc::io, "cannot bind " + opts_.host + ":" + std::to_string(opts_.port) + ": " +
                              std::strerror(errno));
  }
  if (::listen(fd, 16) != 0) throw Error(Errc::io, std::string("listen: ") + std::strerror(errno));

  socklen_t len = sizeof addr;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  return port_;
}

void StreamServer::serve() {
  if (listen_fd_ < 0) listen();
  while (!stopping_) {
    pollfd p{listen_fd_, POLLIN, 0};
    const int ready = ::poll(&p, 1, 100);
    if (ready <= 0) continue;
    const int client = ::accept(listen_fd_, nullptr, nullptr);
    if (client < 0) continue;
    std::lock_guard lock(workers_mutex_);
    workers_.emplace_back([this, client] { handle(client); });
  }
}

void StreamServer::stop() {
  stopping_ = true;
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(workers_mutex_);
    workers.swap(workers_);
  }
  for (auto& t : workers) {
    if (t.joinable()) t.join();
  }
}

void StreamServer::handle(int fd) {
  Socket sock(fd);
  StreamSession session(opts_.defaults);
  try {
    std::string line;
    if (!read_line(fd, line)) return;
    if (!send_frames(fd, session.open(line)) || session.is_closed()) return;

    std::vector<std::uint8_t> bytes;
    std::vector<std::int16_t> pcm;
    while (true) {
      std::uint8_t header[4];
      if (!read_exact(fd, header, 4)) return;
      const std::uint32_t length = header[0] | (header[1] << 8) | (header[2] << 16) |
                                   (static_cast<std::uint32_t>(header[3]) << 24);
      if (length == 0) {
        send_frames(fd, session.finish());
        return;
      }
      if (length % 2 != 0 || length > opts_.max_chunk_bytes) {
        send_frames(fd, session.fail("bad PCM chunk length " + std::to_string(length)));
        return;
      }
      bytes.resize(length);
      if (!read_exact(fd, bytes.data(), length)) return;
      pcm.resize(length / 2);
      for (std::size_t i = 0; i < pcm.size(); ++i) {
        pcm[i] = static_cast<std::int16_t>(bytes[2 * i] | (bytes[2 * i + 1] << 8));
      }
      if (!send_frames(fd, session.push(pcm))) return;
    }
  } catch (const std::exception& e) {
    std::cerr << "lcc serve: session error: " << e.what() << "\n";
  }
}

std::vector<StreamFrame> stream_pcm(const std::string& host, std::uint16_t port,
                                    const std::string& handshake,
                                    std::span<const std::int16_t> pcm, std::size_t chunk_samples) {
  Socket sock(::socket(AF_INET, SOCK_STREAM, 0));
  if (sock.get() < 0) throw Error(Errc::io, std::string("socket: ") + std::strerror(errno));
  sockaddr_in addr = make_address(host, port);
  if (::connect(sock.get(), reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    throw Error(Errc::io, std::string("connect: ") + std::strerror(errno));
  }

  // Drain replies concurrently so neither side blocks on a full socket buffer.
  std::vector<std::uint8_t> received;
  std::thread reader([&] {
    std::uint8_t buf[65536];
    while (true) {
      const ssize_t got = ::recv(sock.get(), buf, sizeof buf, 0);
      if (got < 0 && errno == EINTR) continue;
      if (got <= 0) break;
      received.insert(received.end(), buf, buf + got);
    }
  });

  const std::string line = handshake + "\n";
  bool ok = write_all(sock.get(), reinterpret_cast<const std::uint8_t*>(line.data()), line.size());
  for (std::size_t pos = 0; ok && pos < pcm.size(); pos += chunk_samples) {
    const auto chunk = pcm_chunk(pcm.subspan(pos, std::min(chunk_samples, pcm.size() - pos)));
    ok = write_all(sock.get(), chunk.data(), chunk.size());
  }
  if (ok) {
    const auto end = pcm_chunk({});
    write_all(sock.get(), end.data(), end.size());
  }
  reader.join();

  std::vector<StreamFrame> frames;
  std::size_t offset = 0;
  while (offset < received.size()) {
    std::size_t used = 0;
    auto frame = parse_frame(std::span(received).subspan(offset), used);
    if (!frame) throw Error(Errc::malformed, "truncated stream frame");
    frames.push_back(std::move(*frame));
    offset += used;
  }
  return frames;
}

}  // namespace lcc
