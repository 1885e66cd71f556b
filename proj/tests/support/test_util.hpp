#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "lcc/audio.hpp"

namespace lcc::testing {

inline std::filesystem::path fixture_path(const std::string& name) {
  return std::filesystem::path(LCC_FIXTURE_DIR) / name;
}

/// Set LCC_REGENERATE_FIXTURES=1 to rewrite golden files from the current build.
inline bool regenerate_fixtures() {
  const char* v = std::getenv("LCC_REGENERATE_FIXTURES");
  return v != nullptr && std::string(v) == "1";
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("lcc-test-" + std::to_string(rd()) + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::vector<std::int16_t> to_pcm16(const AudioBuffer& audio) {
  std::vector<std::int16_t> pcm(audio.samples.size());
  for (std::size_t i = 0; i < pcm.size(); ++i) pcm[i] = double_to_pcm16(audio.samples[i]);
  return pcm;
}

inline AudioBuffer from_pcm16(const std::vector<std::int16_t>& pcm, std::uint32_t rate) {
  AudioBuffer audio;
  audio.sample_rate = rate;
  audio.samples.reserve(pcm.size());
  for (auto v : pcm) audio.samples.push_back(pcm16_to_double(v));
  return audio;
}

}  // namespace lcc::testing
