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

#include "svs/masks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "json.hpp"
#include "svs/image.hpp"

namespace svs {

SaliencyMask::SaliencyMask(int w, int h, double fill)
    : width(w), height(h),
      levels(static_cast<std::size_t>(w) * h, fill), level_set{fill} {
  validate();
}

void SaliencyMask::recompute_level_set() {
  std::set<double> distinct(levels.begin(), levels.end());
  level_set.assign(distinct.begin(), distinct.end());
}

void SaliencyMask::validate() const {
  if (width < 1 || height < 1)
    throw std::invalid_argument("mask dimensions must be positive");
  if (levels.size() != pixel_count())
    throw std::invalid_argument("mask level array size mismatch");
  for (double v : levels)
    if (!(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument("mask levels must lie in [0, 1]");
  std::set<double> distinct(levels.begin(), levels.end());
  if (distinct.size() > 16)
    throw std::invalid_argument("mask has more than 16 distinct levels");
  if (!std::equal(distinct.begin(), distinct.end(), level_set.begin(),
                  level_set.end()))
    throw std::invalid_argument("level_set out of sync with mask data");
}

SaliencyMask make_half_mask(int w, int h) {
  if (w < 2 || h < 2)
    throw std::invalid_argument("half mask needs at least 2x2 pixels");
  SaliencyMask mask(w, h, 0.0);
  const int split = (w + 1) / 2;  // left half takes the extra column
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < split; ++x) mask.at(x, y) = 1.0;
  mask.recompute_level_set();
  return mask;
}

SaliencyMask make_grid_mask(int w, int h) {
  if (w < 4 || h < 4)
    throw std::invalid_argument("grid mask needs at least 4x4 pixels");
  static constexpr std::array<double, 4> kLevels = {0.0, 0.33, 0.66, 1.0};
  SaliencyMask mask(w, h, 0.0);
  for (int r = 0; r < 4; ++r) {
    const int y0 = r * h / 4, y1 = (r + 1) * h / 4;
    for (int c = 0; c < 4; ++c) {
      const int x0 = c * w / 4, x1 = (c + 1) * w / 4;
      const double level = kLevels[(r + c) % 4];
      for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) mask.at(x, y) = level;
    }
  }
  mask.recompute_level_set();
  return mask;
}

namespace {

// Classic lattice gradient noise with a seeded permutation table. The shuffle
// is hand-rolled so results do not depend on the standard library's
// std::shuffle implementation.
class GradientNoise {
 public:
  explicit GradientNoise(std::uint64_t seed) {
    std::array<std::uint8_t, 256> table;
    std::iota(table.begin(), table.end(), 0);
    std::mt19937_64 rng(seed);
    for (int i = 255; i > 0; --i) {
      const auto j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
      std::swap(table[i], table[j]);
    }
    for (int i = 0; i < 512; ++i) perm_[i] = table[i & 255];
  }

  double sample(double x, double y) const {
    const int xi = static_cast<int>(std::floor(x)) & 255;
    const int yi = static_cast<int>(std::floor(y)) & 255;
    const double xf = x - std::floor(x);
    const double yf = y - std::floor(y);
    const double u = fade(xf);
    const double v = fade(yf);

    const int aa = perm_[perm_[xi] + yi];
    const int ab = perm_[perm_[xi] + yi + 1];
    const int ba = perm_[perm_[xi + 1] + yi];
    const int bb = perm_[perm_[xi + 1] + yi + 1];

    const double x1 = lerp(grad(aa, xf, yf), grad(ba, xf - 1, yf), u);
    const double x2 = lerp(grad(ab, xf, yf - 1), grad(bb, xf - 1, yf - 1), u);
    return lerp(x1, x2, v);
  }

 private:
  static double fade(double t) { return t * t * t * (t * (t * 6 - 15) + 10); }
  static double lerp(double a, double b, double t) { return a + t * (b - a); }

  static double grad(int hash, double dx, double dy) {
    static constexpr std::array<std::array<double, 2>, 8> kDirs = {{
        {1, 1}, {-1, 1}, {1, -1}, {-1, -1}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
    const auto& d = kDirs[hash & 7];
    return d[0] * dx + d[1] * dy;
  }

  std::array<int, 512> perm_{};
};

}  // namespace

SaliencyMask make_perlin_mask(int w, int h, std::uint64_t seed, int octaves,
                              const PerlinParams& params) {
  if (w < 8 || h < 8)
    throw std::invalid_argument("perlin mask needs at least 8x8 pixels");
  if (octaves < 1) throw std::invalid_argument("octaves must be >= 1");

  const GradientNoise noise(seed);
  std::vector<double> field(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double total = 0.0, amplitude = 1.0, frequency = 1.0;
      for (int o = 0; o < octaves; ++o) {
        const double nx = (x + 0.5) / w * params.base_cells * frequency;
        const double ny = (y + 0.5) / h * params.base_cells * frequency;
        total += amplitude * noise.sample(nx, ny);
        amplitude *= params.persistence;
        frequency *= params.lacunarity;
      }
      field[static_cast<std::size_t>(y) * w + x] = total;
    }
  }

  const auto [mn, mx] = std::minmax_element(field.begin(), field.end());
  const double lo = *mn, hi = *mx;
  const double range = hi > lo ? hi - lo : 1.0;

  SaliencyMask mask(w, h, 0.0);
  for (std::size_t i = 0; i < field.size(); ++i) {
    const auto byte = static_cast<int>(
        std::lround((field[i] - lo) / range * 255.0));
    const int bin = std::clamp(byte, 0, 255) >> 6;  // drop the 6 low bits
    mask.levels[i] = (bin + 1) / 4.0;
  }
  mask.recompute_level_set();
  return mask;
}

SaliencyMask make_box_mask(int w, int h, const BoxAnnotation& ann,
                           double inside, double outside) {
  if (w < 1 || h < 1)
    throw std::invalid_argument("mask dimensions must be positive");
  if (ann.dilation < 0)
    throw std::invalid_argument("box dilation must be non-negative");
  if (!(inside >= 0 && inside <= 1) || !(outside >= 0 && outside <= 1))
    throw std::invalid_argument("saliency values must lie in [0, 1]");

  SaliencyMask mask(w, h, outside);
  for (const Box& b : ann.boxes) {
    if (b.w < 1 || b.h < 1)
      throw std::invalid_argument("box sides must be positive");
    const double grow_x = ann.dilation * b.w;
    const double grow_y = ann.dilation * b.h;
    const int x0 = std::max(0, static_cast<int>(std::floor(b.x - grow_x)));
    const int y0 = std::max(0, static_cast<int>(std::floor(b.y - grow_y)));
    const int x1 = std::min(w, static_cast<int>(std::ceil(b.x + b.w + grow_x)));
    const int y1 = std::min(h, static_cast<int>(std::ceil(b.y + b.h + grow_y)));
    for (int y = y0; y < y1; ++y)
      for (int x = x0; x < x1; ++x) mask.at(x, y) = inside;
  }
  mask.recompute_level_set();
  return mask;
}

SaliencyMask resample_mask(const SaliencyMask& mask, int w, int h) {
  mask.validate();
  if (w < 1 || h < 1)
    throw std::invalid_argument("target dimensions must be positive");
  if (w == mask.width && h == mask.height) return mask;

  SaliencyMask out(w, h, 0.0);
  for (int y = 0; y < h; ++y) {
    const int sy = static_cast<int>(static_cast<std::int64_t>(y) * mask.height / h);
    for (int x = 0; x < w; ++x) {
      const int sx = static_cast<int>(static_cast<std::int64_t>(x) * mask.width / w);
      out.at(x, y) = mask.at(sx, sy);
    }
  }
  out.recompute_level_set();
  return out;
}

double effective_kernel_width(const SaliencyMask& mask, const KernelBank& bank) {
  mask.validate();
  std::map<int, std::size_t> counts;
  std::map<double, int> width_of;
  for (double level : mask.level_set)
    width_of[level] = kernel_width_for_saliency(level, bank);
  for (double v : mask.levels) ++counts[width_of.at(v)];

  const double total = static_cast<double>(mask.pixel_count());
  double effective = 0.0;
  for (const auto& [width, count] : counts)
    effective += (static_cast<double>(count) / total) * width;
  return effective;
}

void save_mask(const SaliencyMask& mask, const std::filesystem::path& path) {
  mask.validate();
  std::map<int, double> byte_to_level;
  ImageBuffer raster(mask.width, mask.height, 1);
  for (std::size_t i = 0; i < mask.levels.size(); ++i) {
    const auto byte = static_cast<int>(std::lround(255.0 * mask.levels[i]));
    const auto [it, inserted] = byte_to_level.emplace(byte, mask.levels[i]);
    if (!inserted && it->second != mask.levels[i])
      throw std::runtime_error(
          "mask levels collide at 8 bits and cannot round-trip");
    raster.samples[i] = static_cast<std::uint8_t>(byte);
  }
  save_image(raster, path);

  nlohmann::json sidecar;
  sidecar["width"] = mask.width;
  sidecar["height"] = mask.height;
  sidecar["level_set"] = mask.level_set;
  std::ofstream out(path.string() + ".json");
  if (!out) throw std::runtime_error("cannot write mask sidecar for " + path.string());
  out << sidecar.dump(2) << "\n";
}

SaliencyMask load_mask(const std::filesystem::path& path) {
  const ImageBuffer raster = load_image(path);
  if (raster.channels != 1)
    throw std::runtime_error(path.string() + ": mask raster must be grayscale");

  std::vector<double> level_set;
  std::ifstream sidecar_in(path.string() + ".json");
  if (sidecar_in) {
    nlohmann::json sidecar = nlohmann::json::parse(sidecar_in);
    level_set = sidecar.at("level_set").get<std::vector<double>>();
  } else {
    // No sidecar: recover levels directly from the 8-bit raster.
    std::set<std::uint8_t> bytes(raster.samples.begin(), raster.samples.end());
    for (std::uint8_t b : bytes) level_set.push_back(b / 255.0);
  }

  SaliencyMask mask(raster.width, raster.height, 0.0);
  for (std::size_t i = 0; i < raster.samples.size(); ++i) {
    const double v = raster.samples[i] / 255.0;
    double best = level_set.front();
    for (double level : level_set)
      if (std::abs(level - v) < std::abs(best - v)) best = level;
    mask.levels[i] = best;
  }
  mask.recompute_level_set();
  mask.validate();
  return mask;
}

}  // namespace svs
