#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "lcc/color.hpp"

namespace lcc {

using Metadata = std::map<std::string, std::string>;

/// RGB raster, row-major with row 0 at the top. Low frequencies are at the
/// bottom, so column pixel index i lives at row height - 1 - i.
struct ColorImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<Rgb8> pixels;
  Metadata metadata;
  bool unknown_provenance = false;

  ColorImage() = default;
  ColorImage(std::size_t w, std::size_t h) : width(w), height(h), pixels(w * h) {}

  Rgb8& at(std::size_t x, std::size_t y) { return pixels[y * width + x]; }
  const Rgb8& at(std::size_t x, std::size_t y) const { return pixels[y * width + x]; }

  /// Writes a bottom-to-top column into x.
  void set_column(std::size_t x, std::span<const Rgb8> column);
  std::vector<Rgb8> column(std::size_t x) const;
};

inline constexpr const char* kMetadataKey = "cspec:params";

/// Canonical form: one key=value per line, keys sorted, '\n' terminated.
std::string format_metadata(const Metadata& meta);
Metadata parse_metadata(const std::string& text);

std::vector<std::uint8_t> encode_png(const ColorImage& img);
ColorImage decode_png(std::span<const std::uint8_t> bytes);
void export_png(const ColorImage& img, const std::filesystem::path& path);
/// A missing "cspec:params" chunk yields an image with unknown_provenance set.
ColorImage import_png(const std::filesystem::path& path);

}  // namespace lcc
