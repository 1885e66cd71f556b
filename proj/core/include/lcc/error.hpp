#pragma once

#include <stdexcept>
#include <string>

namespace lcc {

enum class Errc {
  invalid_argument,  // caller supplied out-of-range parameters
  malformed,         // file or stream bytes do not parse
  not_invertible,    // container cannot be decoded back to audio
  io,                // filesystem or socket failure
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace lcc
