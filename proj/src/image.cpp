// Copyright (c) the svs authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "svs/image.hpp"

#include <png.h>

#include <cstdio>
#include <memory>
#include <stdexcept>
#include <string>

namespace svs {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
  throw std::runtime_error(path.string() + ": " + what);
}

// Error paths jump back via setjmp without printing to stderr; our wrappers
// rethrow with file context instead.
void quiet_error(png_structp png, png_const_charp) { png_longjmp(png, 1); }
void quiet_warning(png_structp, png_const_charp) {}

// libpng reports errors through longjmp; keep the jmp target in a frame with
// no destructible locals between setjmp and the png_* calls.
struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;

  PngReader() {
    png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, quiet_error,
                                 quiet_warning);
    if (png) info = png_create_info_struct(png);
  }
  ~PngReader() { png_destroy_read_struct(&png, &info, nullptr); }
  PngReader(const PngReader&) = delete;
  PngReader& operator=(const PngReader&) = delete;
};

struct PngWriter {
  png_structp png = nullptr;
  png_infop info = nullptr;

  PngWriter() {
    png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, quiet_error,
                                  quiet_warning);
    if (png) info = png_create_info_struct(png);
  }
  ~PngWriter() { png_destroy_write_struct(&png, &info); }
  PngWriter(const PngWriter&) = delete;
  PngWriter& operator=(const PngWriter&) = delete;
};

int channels_for_color_type(int color_type) {
  switch (color_type) {
    case PNG_COLOR_TYPE_GRAY: return 1;
    case PNG_COLOR_TYPE_RGB: return 3;
    case PNG_COLOR_TYPE_PALETTE: return -3;
    case PNG_COLOR_TYPE_GRAY_ALPHA: return 2;
    case PNG_COLOR_TYPE_RGB_ALPHA: return 4;
    default: return 0;
  }
}

void read_header_checked(const std::filesystem::path& path, PngReader& reader,
                         std::FILE* file, RasterInfo* out) {
  if (!reader.png || !reader.info) fail(path, "libpng initialization failed");
  if (setjmp(png_jmpbuf(reader.png))) fail(path, "not a decodable PNG file");

  png_init_io(reader.png, file);
  png_read_info(reader.png, reader.info);

  out->width = static_cast<int>(png_get_image_width(reader.png, reader.info));
  out->height = static_cast<int>(png_get_image_height(reader.png, reader.info));
  out->bit_depth = png_get_bit_depth(reader.png, reader.info);
  out->channels = channels_for_color_type(png_get_color_type(reader.png, reader.info));
}

void check_supported(const std::filesystem::path& path, const RasterInfo& info) {
  if (info.bit_depth != 8)
    fail(path, "unsupported bit depth " + std::to_string(info.bit_depth) +
                   " (expected 8-bit samples; convert the source first)");
  if (info.channels != 1 && info.channels != 3)
    fail(path, "unsupported channel layout (expected 8-bit grayscale or RGB)");
}

}  // namespace

ImageBuffer::ImageBuffer(int w, int h, int c, std::uint8_t fill)
    : width(w), height(h), channels(c),
      samples(static_cast<std::size_t>(w) * h * c, fill) {
  validate();
}

void ImageBuffer::validate() const {
  if (width < 1 || height < 1)
    throw std::invalid_argument("image dimensions must be positive");
  if (channels != 1 && channels != 3)
    throw std::invalid_argument("image must have 1 or 3 channels");
  if (samples.size() != sample_count())
    throw std::invalid_argument("sample array size does not match dimensions");
}

ImageBuffer load_image(const std::filesystem::path& path) {
  FilePtr file(std::fopen(path.string().c_str(), "rb"));
  if (!file) fail(path, "cannot open for reading");

  unsigned char sig[8];
  if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
    fail(path, "not a PNG file");
  std::rewind(file.get());

  PngReader reader;
  RasterInfo info;
  read_header_checked(path, reader, file.get(), &info);
  check_supported(path, info);

  ImageBuffer img(info.width, info.height, info.channels);
  std::vector<png_bytep> rows(info.height);
  for (int y = 0; y < info.height; ++y)
    rows[y] = img.samples.data() +
              static_cast<std::size_t>(y) * info.width * info.channels;

  // Separate frame for the pixel-data jmp target: `rows` stays alive outside.
  if (setjmp(png_jmpbuf(reader.png))) fail(path, "corrupt PNG pixel data");
  png_set_interlace_handling(reader.png);
  png_read_update_info(reader.png, reader.info);
  png_read_image(reader.png, rows.data());
  png_read_end(reader.png, nullptr);
  return img;
}

std::uint64_t save_image(const ImageBuffer& img, const std::filesystem::path& path) {
  img.validate();
  if (path.empty()) throw std::runtime_error("save_image: empty output path");

  FilePtr file(std::fopen(path.string().c_str(), "wb"));
  if (!file) fail(path, "cannot open for writing");

  PngWriter writer;
  if (!writer.png || !writer.info) fail(path, "libpng initialization failed");

  std::vector<png_const_bytep> rows(img.height);
  for (int y = 0; y < img.height; ++y)
    rows[y] = img.samples.data() +
              static_cast<std::size_t>(y) * img.width * img.channels;

  if (setjmp(png_jmpbuf(writer.png))) fail(path, "PNG write failed");
  png_init_io(writer.png, file.get());
  // Fixed settings so equal buffers always produce byte-identical files.
  png_set_compression_level(writer.png, 6);
  png_set_filter(writer.png, 0, PNG_ALL_FILTERS);
  png_set_IHDR(writer.png, writer.info, img.width, img.height, 8,
               img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(writer.png, writer.info);
  png_write_image(writer.png, const_cast<png_bytepp>(rows.data()));
  png_write_end(writer.png, nullptr);

  if (std::fflush(file.get()) != 0) fail(path, "flush failed");
  const long size = std::ftell(file.get());
  if (size < 0) fail(path, "cannot determine written size");
  return static_cast<std::uint64_t>(size);
}

RasterInfo read_raster_info(const std::filesystem::path& path) {
  FilePtr file(std::fopen(path.string().c_str(), "rb"));
  if (!file) fail(path, "cannot open for reading");

  unsigned char sig[8];
  if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
    fail(path, "not a PNG file");
  std::rewind(file.get());

  PngReader reader;
  RasterInfo info;
  read_header_checked(path, reader, file.get(), &info);
  return info;
}

ImageBuffer crop(const ImageBuffer& img, int x0, int y0, int w, int h) {
  if (x0 < 0 || y0 < 0 || w < 1 || h < 1 || x0 + w > img.width ||
      y0 + h > img.height)
    throw std::invalid_argument("crop window outside image bounds");
  ImageBuffer out(w, h, img.channels);
  const std::size_t row_bytes = static_cast<std::size_t>(w) * img.channels;
  for (int y = 0; y < h; ++y) {
    const std::uint8_t* src =
        img.samples.data() +
        (static_cast<std::size_t>(y0 + y) * img.width + x0) * img.channels;
    std::copy(src, src + row_bytes,
              out.samples.data() + static_cast<std::size_t>(y) * row_bytes);
  }
  return out;
}

}  // namespace svs
