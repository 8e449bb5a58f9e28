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

#ifndef SVS_RECORDS_HPP_
#define SVS_RECORDS_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "svs/image.hpp"

namespace svs {

// One benchmark measurement. kernel_width holds the uniform width for
// uniform smoothing and the effective kernel width for saliency-driven runs.
struct MeasurementRecord {
  std::string image_id;
  std::string mask_type;  // empty for uniform smoothing
  std::string policy;     // "uniform" or "saliency"
  double kernel_width = 1.0;
  std::string encoder;
  double param_raw = 0.0;
  double param_scaled = 0.0;
  double bpp_original = 0.0;
  double bpp_processed = 0.0;
  double rate_reduction_pct = 0.0;
  double mse_global = 0.0;
  std::map<double, double> mse_per_level;
  std::map<double, double> bpp_per_level;

  bool operator==(const MeasurementRecord&) const = default;
};

// Mean squared error over included pixels and channels, in 8-bit sample
// units. `region` (one flag per pixel) restricts the mean; an all-zero
// region is an error.
double compute_mse(const ImageBuffer& a, const ImageBuffer& b,
                   const std::vector<std::uint8_t>* region = nullptr);

// 8 * file_bytes / (w * h).
double compute_bpp(std::uint64_t file_bytes, int w, int h);

double rate_reduction_pct(double bpp_original, double bpp_processed);

// Deflate-based storage-rate estimate for a pixel subset: the region's
// samples are gathered in row-major order and compressed on their own.
double region_bpp_estimate(const ImageBuffer& img,
                           const std::vector<std::uint8_t>& region);

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

extern const std::vector<std::string> kRecordCsvColumns;

std::string record_to_csv_row(const MeasurementRecord& r);
std::string record_csv_header();

void write_records_csv(const std::vector<MeasurementRecord>& records,
                       const std::filesystem::path& path);
std::vector<MeasurementRecord> read_records_csv(const std::filesystem::path& path);

// 64-bit FNV-1a, used for config hashes and determinism checks.
std::uint64_t fnv1a64(const void* data, std::size_t size);
std::uint64_t fnv1a64(const std::string& s);

}  // namespace svs

#endif  // SVS_RECORDS_HPP_
