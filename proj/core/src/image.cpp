#include "lcc/image.hpp"

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <sstream>

#include "lcc/audio.hpp"
#include "lcc/error.hpp"

namespace lcc {
namespace {

// libpng reports errors with longjmp, so the libpng calls live in functions that
// hold only trivially destructible locals after setjmp.

struct WriteSink {
  std::vector<std::uint8_t> bytes;
};

void write_to_sink(png_structp png, png_bytep data, png_size_t length) {
  auto* sink = static_cast<WriteSink*>(png_get_io_ptr(png));
  sink->bytes.insert(sink->bytes.end(), data, data + length);
}

void flush_noop(png_structp) {}

bool write_png_impl(const ColorImage& img, const std::string& text, png_bytepp rows,
                    WriteSink* sink) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }

  png_set_write_fn(png, sink, write_to_sink, flush_noop);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height),
               8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_text chunk;
  std::memset(&chunk, 0, sizeof chunk);
  if (!text.empty()) {
    chunk.compression = PNG_TEXT_COMPRESSION_NONE;
    chunk.key = const_cast<png_charp>(kMetadataKey);
    chunk.text = const_cast<png_charp>(text.c_str());
    chunk.text_length = text.size();
    png_set_text(png, info, &chunk, 1);
  }
  png_write_info(png, info);
  png_write_image(png, rows);
  png_write_end(png, info);
  png_destroy_write_struct(&png, &info);
  return true;
}

struct ReadSource {
  std::span<const std::uint8_t> bytes;
  std::size_t offset = 0;
  char message[128] = {};
};

// Keeps libpng quiet on stderr; the message ends up in the thrown error instead.
void record_error(png_structp png, png_const_charp msg) {
  auto* src = static_cast<ReadSource*>(png_get_error_ptr(png));
  std::snprintf(src->message, sizeof src->message, "%s", msg);
  png_longjmp(png, 1);
}

void ignore_warning(png_structp, png_const_charp) {}

void read_from_source(png_structp png, png_bytep out, png_size_t length) {
  auto* src = static_cast<ReadSource*>(png_get_io_ptr(png));
  if (src->offset + length > src->bytes.size()) png_error(png, "unexpected end of PNG data");
  std::memcpy(out, src->bytes.data() + src->offset, length);
  src->offset += length;
}

struct ReadResult {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  std::vector<std::uint8_t> rgb;
  std::vector<png_bytep> rows;
  bool has_text = false;
  std::string text;
};

void collect_text(png_structp png, png_infop info, ReadResult* out) {
  png_textp texts = nullptr;
  int count = 0;
  png_get_text(png, info, &texts, &count);
  for (int i = 0; i < count; ++i) {
    if (std::strcmp(texts[i].key, kMetadataKey) == 0) {
      out->has_text = true;
      out->text.assign(texts[i].text, texts[i].text_length);
    }
  }
}

bool read_png_impl(ReadSource* src, ReadResult* out) {
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, src, record_error, ignore_warning);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  png_infop end_info = png_create_info_struct(png);
  if (!info || !end_info) {
    png_destroy_read_struct(&png, &info, &end_info);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, &end_info);
    return false;
  }

  png_set_read_fn(png, src, read_from_source);
  png_read_info(png, info);
  png_set_expand(png);
  png_set_strip_16(png);
  png_set_strip_alpha(png);
  png_set_gray_to_rgb(png);
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  out->width = png_get_image_width(png, info);
  out->height = png_get_image_height(png, info);
  if (png_get_rowbytes(png, info) != static_cast<png_size_t>(out->width) * 3) {
    png_error(png, "unexpected row layout");
  }
  out->rgb.resize(static_cast<std::size_t>(out->width) * out->height * 3);
  out->rows.resize(out->height);
  for (png_uint_32 y = 0; y < out->height; ++y) {
    out->rows[y] = out->rgb.data() + static_cast<std::size_t>(y) * out->width * 3;
  }
  png_read_image(png, out->rows.data());
  png_read_end(png, end_info);
  collect_text(png, info, out);
  collect_text(png, end_info, out);
  png_destroy_read_struct(&png, &info, &end_info);
  return true;
}

}  // namespace

void ColorImage::set_column(std::size_t x, std::span<const Rgb8> column) {
  if (x >= width || column.size() != height) {
    throw Error(Errc::invalid_argument, "column does not fit the image");
  }
  for (std::size_t i = 0; i < height; ++i) at(x, height - 1 - i) = column[i];
}

std::vector<Rgb8> ColorImage::column(std::size_t x) const {
  std::vector<Rgb8> out(height);
  for (std::size_t i = 0; i < height; ++i) out[i] = at(x, height - 1 - i);
  return out;
}

std::string format_metadata(const Metadata& meta) {
  std::string out;
  for (const auto& [key, value] : meta) {
    if (key.find_first_of("=\n") != std::string::npos || value.find('\n') != std::string::npos) {
      throw Error(Errc::invalid_argument, "metadata entries may not contain '=' keys or newlines");
    }
    out += key;
    out += '=';
    out += value;
    out += '\n';
  }
  return out;
}

Metadata parse_metadata(const std::string& text) {
  Metadata meta;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(Errc::malformed, "metadata line without '='");
    meta[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return meta;
}

std::vector<std::uint8_t> encode_png(const ColorImage& img) {
  if (img.width == 0 || img.height == 0 || img.pixels.size() != img.width * img.height) {
    throw Error(Errc::invalid_argument, "image has no pixels");
  }
  static_assert(sizeof(Rgb8) == 3, "Rgb8 must be tightly packed");
  std::vector<png_bytep> rows(img.height);
  for (std::size_t y = 0; y < img.height; ++y) {
    rows[y] = const_cast<png_bytep>(reinterpret_cast<const png_byte*>(&img.pixels[y * img.width]));
  }
  const std::string text = img.metadata.empty() ? std::string() : format_metadata(img.metadata);
  WriteSink sink;
  if (!write_png_impl(img, text, rows.data(), &sink)) {
    throw Error(Errc::io, "PNG encoding failed");
  }
  return std::move(sink.bytes);
}

ColorImage decode_png(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
    throw Error(Errc::malformed, "malformed file: not a PNG");
  }
  ReadSource src{bytes, 0};
  ReadResult result;
  if (!read_png_impl(&src, &result)) {
    std::string detail = src.message[0] ? std::string(": ") + src.message : std::string();
    throw Error(Errc::malformed, "malformed file: corrupt PNG" + detail);
  }

  ColorImage img(result.width, result.height);
  std::memcpy(img.pixels.data(), result.rgb.data(), result.rgb.size());
  if (result.has_text) {
    img.metadata = parse_metadata(result.text);
  } else {
    img.unknown_provenance = true;
  }
  return img;
}

void export_png(const ColorImage& img, const std::filesystem::path& path) {
  write_file_bytes(path, encode_png(img));
}

ColorImage import_png(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return decode_png(bytes);
}

}  // namespace lcc
