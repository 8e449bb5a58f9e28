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

#ifndef SVS_COMPOSITE_HPP_
#define SVS_COMPOSITE_HPP_

#include <cstdint>
#include <vector>

#include "svs/kernels.hpp"
#include "svs/masks.hpp"

namespace svs {

// Sorted unique kernel widths mapped from a mask's level set, with one binary
// selection raster per width. Exactly one raster is set at every pixel.
struct CompositePlan {
  std::vector<int> kernel_widths;
  std::vector<std::vector<std::uint8_t>> binary_masks;  // parallel to widths

  std::size_t size() const { return kernel_widths.size(); }
};

// Maps each distinct saliency level through the width mapping; levels landing
// on the same width merge into one binary mask.
CompositePlan plan_composite(const SaliencyMask& mask, const KernelBank& bank = {});

// Raster of per-pixel mapped widths (same layout as the mask).
std::vector<int> per_pixel_width_map(const SaliencyMask& mask,
                                     const KernelBank& bank = {});

// Smooths the image once per planned width (each over the full image) and
// gathers the output per pixel through the plan's binary masks. Pixels whose
// width is 1 keep their input samples exactly. Cost is linear in the number
// of distinct widths.
ImageBuffer composite_smooth(const ImageBuffer& img, const SaliencyMask& mask,
                             const KernelBank& bank = {},
                             const SigmaRule& sigma_rule = {}, int workers = 1);

}  // namespace svs

#endif  // SVS_COMPOSITE_HPP_
