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

#ifndef SVS_IMAGE_HPP_
#define SVS_IMAGE_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

namespace svs {

// 8-bit raster, row-major, channel-interleaved. 1 (gray) or 3 (RGB) channels.
// Treated as immutable once filled; safe to share across threads.
struct ImageBuffer {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<std::uint8_t> samples;

  ImageBuffer() = default;
  ImageBuffer(int w, int h, int c, std::uint8_t fill = 0);

  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  std::size_t sample_count() const { return pixel_count() * channels; }

  std::uint8_t at(int x, int y, int c) const {
    return samples[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  std::uint8_t& at(int x, int y, int c) {
    return samples[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }

  bool same_shape(const ImageBuffer& other) const {
    return width == other.width && height == other.height &&
           channels == other.channels;
  }

  // Throws std::invalid_argument when the shape/sample invariants are broken.
  void validate() const;
};

// Decodes an 8-bit grayscale or RGB PNG. Rejects other bit depths and channel
// layouts instead of converting; callers must prepare such sources upstream.
ImageBuffer load_image(const std::filesystem::path& path);

// Lossless PNG encode. Returns the file size in bytes. load_image(save_image(x))
// reproduces x exactly.
std::uint64_t save_image(const ImageBuffer& img, const std::filesystem::path& path);

struct RasterInfo {
  int width = 0;
  int height = 0;
  int channels = 0;
  int bit_depth = 0;
};

// Reads PNG header fields without decoding pixel data.
RasterInfo read_raster_info(const std::filesystem::path& path);

ImageBuffer crop(const ImageBuffer& img, int x0, int y0, int w, int h);

}  // namespace svs

#endif  // SVS_IMAGE_HPP_
