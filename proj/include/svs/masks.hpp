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

#ifndef SVS_MASKS_HPP_
#define SVS_MASKS_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "svs/kernels.hpp"

namespace svs {

// Per-pixel normalized saliency in [0,1], quantized to a small level set.
// 1 = preserve, 0 = smooth maximally.
struct SaliencyMask {
  int width = 0;
  int height = 0;
  std::vector<double> levels;     // row-major
  std::vector<double> level_set;  // sorted distinct values in `levels`

  SaliencyMask() = default;
  SaliencyMask(int w, int h, double fill = 0.0);

  double at(int x, int y) const {
    return levels[static_cast<std::size_t>(y) * width + x];
  }
  double& at(int x, int y) {
    return levels[static_cast<std::size_t>(y) * width + x];
  }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width) * height;
  }

  void recompute_level_set();
  void validate() const;
};

struct Box {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;
};

struct BoxAnnotation {
  std::vector<Box> boxes;
  double dilation = 0.5;  // fraction of each box side to grow per direction
};

// Binary mask: saliency 1 on the left half (ceiling split), 0 on the right.
SaliencyMask make_half_mask(int w, int h);

// 4x4 grid of cells cycling through levels {0, 0.33, 0.66, 1}; cell (r,c)
// takes level index (r+c) mod 4. Cell sizes differ by at most one pixel.
SaliencyMask make_grid_mask(int w, int h);

struct PerlinParams {
  double persistence = 0.5;
  double lacunarity = 2.0;
  double base_cells = 8.0;  // lattice cells across each axis at the first octave
};

// Octave-summed gradient noise, min-max scaled to [0,255], then quantized to
// four bins by clearing the six least significant bits. Bin i maps to
// saliency (i+1)/4, so the level set is within {0.25, 0.5, 0.75, 1.0}.
// Deterministic for a fixed seed.
SaliencyMask make_perlin_mask(int w, int h, std::uint64_t seed, int octaves = 3,
                              const PerlinParams& params = {});

// Each box grows by `dilation` of its size per side (clamped to bounds); the
// union of dilated boxes takes `inside`, everything else `outside`.
SaliencyMask make_box_mask(int w, int h, const BoxAnnotation& ann,
                           double inside = 0.8, double outside = 0.0);

// Nearest-neighbor rescale; never introduces levels absent from the input.
SaliencyMask resample_mask(const SaliencyMask& mask, int w, int h);

// Pixel-area-weighted mean of the kernel widths the mask maps to.
double effective_kernel_width(const SaliencyMask& mask,
                              const KernelBank& bank = {});

// Grayscale PNG (value = round(255*s)) plus a "<path>.json" sidecar holding
// the exact level set so non-representable levels survive the round trip.
void save_mask(const SaliencyMask& mask, const std::filesystem::path& path);
SaliencyMask load_mask(const std::filesystem::path& path);

}  // namespace svs

#endif  // SVS_MASKS_HPP_
