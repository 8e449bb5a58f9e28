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

#include "svs/composite.hpp"

#include <map>
#include <stdexcept>

namespace svs {

std::vector<int> per_pixel_width_map(const SaliencyMask& mask,
                                     const KernelBank& bank) {
  mask.validate();
  std::map<double, int> width_of;
  for (double level : mask.level_set)
    width_of[level] = kernel_width_for_saliency(level, bank);
  std::vector<int> widths(mask.pixel_count());
  for (std::size_t i = 0; i < widths.size(); ++i)
    widths[i] = width_of.at(mask.levels[i]);
  return widths;
}

CompositePlan plan_composite(const SaliencyMask& mask, const KernelBank& bank) {
  mask.validate();
  if (mask.level_set.empty())
    throw std::invalid_argument("cannot plan over an empty mask");

  const std::vector<int> widths = per_pixel_width_map(mask, bank);
  std::map<int, std::size_t> slot_of;  // width -> plan index, sorted by width
  for (int w : widths) slot_of.emplace(w, 0);
  CompositePlan plan;
  for (auto& [width, slot] : slot_of) {
    slot = plan.kernel_widths.size();
    plan.kernel_widths.push_back(width);
    plan.binary_masks.emplace_back(mask.pixel_count(), std::uint8_t{0});
  }
  for (std::size_t i = 0; i < widths.size(); ++i)
    plan.binary_masks[slot_of.at(widths[i])][i] = 1;
  return plan;
}

ImageBuffer composite_smooth(const ImageBuffer& img, const SaliencyMask& mask,
                             const KernelBank& bank, const SigmaRule& sigma_rule,
                             int workers) {
  img.validate();
  if (img.width != mask.width || img.height != mask.height)
    throw std::invalid_argument(
        "mask dimensions must match the image; resample the mask first");

  const CompositePlan plan = plan_composite(mask, bank);
  ImageBuffer out(img.width, img.height, img.channels);

  // One full-image smoothing pass per distinct width, materialized lazily and
  // released after its pixels are gathered.
  for (std::size_t slot = 0; slot < plan.size(); ++slot) {
    const int width = plan.kernel_widths[slot];
    const ImageBuffer smoothed =
        width == 1 ? img : convolve_uniform(img, sigma_rule.spec_for(width), workers);
    const std::vector<std::uint8_t>& select = plan.binary_masks[slot];
    const int c = img.channels;
    for (std::size_t p = 0; p < select.size(); ++p) {
      if (!select[p]) continue;
      const std::size_t base = p * c;
      for (int ch = 0; ch < c; ++ch)
        out.samples[base + ch] = smoothed.samples[base + ch];
    }
  }
  return out;
}

}  // namespace svs
