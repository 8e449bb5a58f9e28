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

#ifndef SVS_KERNELS_HPP_
#define SVS_KERNELS_HPP_

#include <string>
#include <vector>

#include "svs/image.hpp"

namespace svs {

// One smoothing level: an odd window width and its Gaussian spread.
// width == 1 is the identity kernel; sigma is ignored in that case.
struct KernelSpec {
  int width = 1;
  double sigma = 0.0;

  void validate() const;
};

// The admissible base widths. The saliency mapping uses only the set's
// cardinality; the set itself bounds the widths the mapping can produce.
struct KernelBank {
  std::vector<int> admissible = {3, 5, 7, 9, 11, 13, 15, 17};

  int cardinality() const { return static_cast<int>(admissible.size()); }
  int max_width() const { return 2 * cardinality() + 1; }
  void validate() const;
};

// Width -> sigma convention. "default" follows the common rule
// sigma = 0.3*((width-1)*0.5 - 1) + 0.8; "radius-div3" uses sigma = radius/3.
// `scale` multiplies the result so sensitivity can be studied per run.
struct SigmaRule {
  std::string name = "default";
  double scale = 1.0;

  double sigma_for(int width) const;
  KernelSpec spec_for(int width) const { return {width, sigma_for(width)}; }
};

// Maps a normalized saliency level in [0,1] to an odd kernel width:
// width(s) = 2*floor((1-s)*|bank|) + 1. Monotone non-increasing in s;
// s=1 yields 1 (no smoothing), s=0 yields the widest admissible window.
int kernel_width_for_saliency(double s, const KernelBank& bank = {});

// Normalized 1-D Gaussian taps at integer offsets [-r, r], r=(width-1)/2.
std::vector<double> gaussian_taps(const KernelSpec& spec);

// Normalized width×width Gaussian, row-major; the outer product of the 1-D
// taps with themselves. Sums to 1 and is symmetric in x, y, and x<->y.
std::vector<double> build_gaussian(const KernelSpec& spec);

// Mirror indexing without repeating the edge sample (…2 1 | 0 1 2 … n-1 | n-2…).
int mirror_index(int i, int n);

// Per-channel Gaussian smoothing with mirrored borders. Separable two-pass
// implementation with floating-point intermediates; samples are rounded
// half-away-from-zero once at the end. width == 1 returns an exact copy.
// Output is identical for any worker count.
ImageBuffer convolve_uniform(const ImageBuffer& img, const KernelSpec& spec,
                             int workers = 1);

}  // namespace svs

#endif  // SVS_KERNELS_HPP_
