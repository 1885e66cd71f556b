#include <gtest/gtest.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <sstream>
#include <thread>

#include "commands.hpp"
#include "lcc/codec.hpp"
#include "lcc/server.hpp"
#include "lcc/synth.hpp"
#include "test_util.hpp"

namespace {

using lcc::FrameType;
using lcc::StreamFrame;

class ServerFixture : public ::testing::Test {
 protected:
  void SetUp() override {
    server_ = std::make_unique<lcc::StreamServer>(lcc::ServerOptions{});
    port_ = server_->listen();
    thread_ = std::thread([this] { server_->serve(); });
  }
  void TearDown() override {
    server_->stop();
    thread_.join();
  }

  std::unique_ptr<lcc::StreamServer> server_;
  std::uint16_t port_ = 0;
  std::thread thread_;
};

std::vector<StreamFrame> of_type(const std::vector<StreamFrame>& frames, FrameType t) {
  std::vector<StreamFrame> out;
  for (const auto& f : frames) {
    if (f.type == t) out.push_back(f);
  }
  return out;
}

TEST_F(ServerFixture, LoopbackColumnsMatchCliEncodePng) {
  lcc::testing::TempDir dir;
  const auto audio = lcc::fm_tone(256.0, 0.10, 2.0, 2.0, 44100, 0.8);
  const auto pcm = lcc::testing::to_pcm16(audio);
  lcc::write_wav(lcc::testing::from_pcm16(pcm, 44100), dir / "in.wav", lcc::SampleFormat::pcm16);

  std::ostringstream out, err;
  ASSERT_EQ(lcc::cli::run({"encode", (dir / "in.wav").string(), (dir / "x.cspec").string(),
                           (dir / "x.png").string(), "--axis", "log", "--rows", "300"},
                          out, err),
            0)
      << err.str();
  const auto img = lcc::import_png(dir / "x.png");

  const auto frames =
      lcc::stream_pcm("127.0.0.1", port_, R"({"axis":"log","rows":300})", pcm, 1500);
  ASSERT_FALSE(frames.empty());
  EXPECT_EQ(frames.front().type, FrameType::config_ack);
  const auto columns = of_type(frames, FrameType::column);
  ASSERT_EQ(columns.size(), img.width);
  for (std::size_t x = 0; x < img.width; ++x) {
    std::vector<std::uint8_t> expected = lcc::column_payload(img.column(x));
    EXPECT_EQ(columns[x].payload, expected) << "column " << x;
  }
  EXPECT_EQ(of_type(frames, FrameType::analysis).size(), 2u);
  for (std::size_t i = 0; i < frames.size(); ++i) EXPECT_EQ(frames[i].seq, i);
}

TEST_F(ServerFixture, UnsupportedFftSizeGetsErrorFrame) {
  const std::vector<std::int16_t> pcm(4096, 0);
  const auto frames = lcc::stream_pcm("127.0.0.1", port_, R"({"fft_size":3000})", pcm);
  ASSERT_EQ(frames.size(), 1u);
  EXPECT_EQ(frames[0].type, FrameType::error);
  EXPECT_NE(frames[0].text().find("unsupported fft_size"), std::string::npos);
}

TEST_F(ServerFixture, ConcurrentSessionsAreIndependent) {
  const auto pcm_a = lcc::testing::to_pcm16(lcc::tone(300.0, 1.0, 44100, 0.5));
  const auto pcm_b = lcc::testing::to_pcm16(lcc::tone(900.0, 1.0, 44100, 0.5));
  std::vector<StreamFrame> a, b;
  std::thread ta([&] { a = lcc::stream_pcm("127.0.0.1", port_, R"({"fft_size":1024})", pcm_a); });
  std::thread tb([&] { b = lcc::stream_pcm("127.0.0.1", port_, "{}", pcm_b); });
  ta.join();
  tb.join();
  EXPECT_EQ(of_type(a, FrameType::column).size(), 44u);  // ceil(44100 / 1024)
  EXPECT_EQ(of_type(b, FrameType::column).size(), 22u);
}

TEST_F(ServerFixture, OversizedChunkIsRejected) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  ASSERT_GE(fd, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port_);
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  ASSERT_EQ(::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr), 0);
  const std::string hello = "{}\n";
  ASSERT_EQ(::send(fd, hello.data(), hello.size(), 0), static_cast<ssize_t>(hello.size()));
  const std::uint8_t huge[4] = {0xFF, 0xFF, 0xFF, 0x7F};
  ASSERT_EQ(::send(fd, huge, 4, 0), 4);

  std::vector<std::uint8_t> buf;
  std::uint8_t tmp[4096];
  for (;;) {
    const ssize_t n = ::recv(fd, tmp, sizeof tmp, 0);
    if (n <= 0) break;
    buf.insert(buf.end(), tmp, tmp + n);
  }
  ::close(fd);
  std::vector<StreamFrame> frames;
  std::size_t offset = 0, consumed = 0;
  while (auto f = lcc::parse_frame(std::span(buf).subspan(offset), consumed)) {
    frames.push_back(*f);
    offset += consumed;
  }
  ASSERT_EQ(frames.size(), 2u);
  EXPECT_EQ(frames[0].type, FrameType::config_ack);
  EXPECT_EQ(frames[1].type, FrameType::error);
  EXPECT_EQ(frames[1].seq, 1u);
}

}  // namespace
