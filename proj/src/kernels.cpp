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

#include "svs/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "svs/parallel.hpp"

namespace svs {

void KernelSpec::validate() const {
  if (width < 1 || width % 2 == 0)
    throw std::invalid_argument("kernel width must be odd and >= 1");
  if (width > 1 && !(sigma > 0.0))
    throw std::invalid_argument("sigma must be positive for width > 1");
}

void KernelBank::validate() const {
  if (admissible.empty())
    throw std::invalid_argument("kernel bank must not be empty");
  int prev = 1;
  for (int k : admissible) {
    if (k % 2 == 0 || k <= prev)
      throw std::invalid_argument(
          "kernel bank must be strictly increasing odd widths");
    prev = k;
  }
}

double SigmaRule::sigma_for(int width) const {
  if (width <= 1) return 0.0;
  const double radius = (width - 1) * 0.5;
  double sigma;
  if (name == "default") {
    sigma = 0.3 * (radius - 1.0) + 0.8;
  } else if (name == "radius-div3") {
    sigma = radius / 3.0;
  } else {
    throw std::invalid_argument("unknown sigma rule: " + name);
  }
  sigma *= scale;
  if (!(sigma > 0.0))
    throw std::invalid_argument("sigma rule produced non-positive sigma");
  return sigma;
}

int kernel_width_for_saliency(double s, const KernelBank& bank) {
  if (!(s >= 0.0 && s <= 1.0))
    throw std::invalid_argument("saliency level must be in [0, 1]");
  bank.validate();
  const int n = bank.cardinality();
  return 2 * static_cast<int>(std::floor((1.0 - s) * n)) + 1;
}

std::vector<double> gaussian_taps(const KernelSpec& spec) {
  spec.validate();
  if (spec.width == 1) return {1.0};
  const int r = (spec.width - 1) / 2;
  std::vector<double> taps(spec.width);
  double sum = 0.0;
  for (int x = -r; x <= r; ++x) {
    const double w = std::exp(-(static_cast<double>(x) * x) /
                              (2.0 * spec.sigma * spec.sigma));
    taps[x + r] = w;
    sum += w;
  }
  for (double& t : taps) t /= sum;
  return taps;
}

std::vector<double> build_gaussian(const KernelSpec& spec) {
  const std::vector<double> taps = gaussian_taps(spec);
  const int w = spec.width;
  std::vector<double> kernel(static_cast<std::size_t>(w) * w);
  for (int y = 0; y < w; ++y)
    for (int x = 0; x < w; ++x)
      kernel[static_cast<std::size_t>(y) * w + x] = taps[y] * taps[x];
  return kernel;
}

int mirror_index(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

namespace {

std::uint8_t round_to_u8(double v) {
  const double q = std::copysign(std::floor(std::abs(v) + 0.5), v);
  return static_cast<std::uint8_t>(std::clamp(q, 0.0, 255.0));
}

}  // namespace

ImageBuffer convolve_uniform(const ImageBuffer& img, const KernelSpec& spec,
                             int workers) {
  img.validate();
  spec.validate();
  if (spec.width == 1) return img;

  const std::vector<double> taps = gaussian_taps(spec);
  const int r = (spec.width - 1) / 2;
  const int w = img.width;
  const int h = img.height;
  const int c = img.channels;
  const std::size_t row_samples = static_cast<std::size_t>(w) * c;

  // Horizontal pass, keeping double intermediates until the final rounding.
  std::vector<double> mid(img.sample_count());
  parallel_for(0, h, workers, [&](std::int64_t y) {
    const std::uint8_t* src = img.samples.data() + y * row_samples;
    double* dst = mid.data() + y * row_samples;
    for (int x = 0; x < w; ++x) {
      for (int ch = 0; ch < c; ++ch) {
        double acc = 0.0;
        for (int t = -r; t <= r; ++t) {
          const int sx = mirror_index(x + t, w);
          acc += taps[t + r] * src[static_cast<std::size_t>(sx) * c + ch];
        }
        dst[static_cast<std::size_t>(x) * c + ch] = acc;
      }
    }
  });

  ImageBuffer out(w, h, c);
  parallel_for(0, h, workers, [&](std::int64_t y) {
    std::uint8_t* dst = out.samples.data() + y * row_samples;
    for (int x = 0; x < w; ++x) {
      for (int ch = 0; ch < c; ++ch) {
        double acc = 0.0;
        for (int t = -r; t <= r; ++t) {
          const int sy = mirror_index(static_cast<int>(y) + t, h);
          acc += taps[t + r] *
                 mid[sy * row_samples + static_cast<std::size_t>(x) * c + ch];
        }
        dst[static_cast<std::size_t>(x) * c + ch] = round_to_u8(acc);
      }
    }
  });
  return out;
}

}  // namespace svs
