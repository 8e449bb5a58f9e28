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

#ifndef SVS_TEST_SUPPORT_HPP_
#define SVS_TEST_SUPPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "svs/image.hpp"
#include "svs/kernels.hpp"
#include "svs/masks.hpp"

namespace svs::test {

std::filesystem::path source_dir();
std::filesystem::path data_dir();

// Fresh directory under the system temp root; removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

ImageBuffer random_image(std::mt19937_64& rng, int w, int h, int channels);

// Random quantized mask drawn from a small level set (always includes 1.0
// and at least one other level).
SaliencyMask random_quantized_mask(std::mt19937_64& rng, int w, int h);

// Direct 2-D convolution of the normalized Gaussian window, mirrored borders,
// rounded half-away-from-zero. Deliberately naive; this is the reference the
// separable implementation is checked against.
ImageBuffer reference_convolve_2d(const ImageBuffer& img, const KernelSpec& spec);

std::string read_file(const std::filesystem::path& path);

// Writes an executable shell script (for fake codec tools in tests).
void write_script(const std::filesystem::path& path, const std::string& body);

}  // namespace svs::test

#endif  // SVS_TEST_SUPPORT_HPP_
