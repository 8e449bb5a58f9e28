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

#ifndef SVS_BENCH_HPP_
#define SVS_BENCH_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "svs/codecs.hpp"
#include "svs/kernels.hpp"
#include "svs/masks.hpp"
#include "svs/records.hpp"

namespace svs {

struct MaskSpec {
  std::string type;  // half | grid | perlin | box
  std::string name;  // record label; defaults to type
  std::uint64_t seed = 0;
  int octaves = 3;
  PerlinParams perlin;
  BoxAnnotation boxes;
  double inside = 0.8;
  double outside = 0.0;
};

struct SmoothingPolicy {
  std::string type;         // "uniform" | "saliency"
  std::vector<int> widths;  // uniform only
};

struct EncoderSweep {
  EncoderAdapter adapter;
  std::vector<double> params;
};

// Declarative benchmark matrix: inputs × masks × smoothing × encoders × params.
struct RunConfig {
  std::filesystem::path input_root;
  std::optional<int> tile;
  std::filesystem::path output_dir;
  std::uint64_t seed = 0;
  int workers = 0;  // 0 = hardware concurrency
  bool keep_artifacts = true;
  SigmaRule sigma_rule;
  KernelBank bank;
  std::vector<MaskSpec> masks;
  std::vector<SmoothingPolicy> smoothing;
  std::vector<EncoderSweep> encoders;

  void validate() const;
};

RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);
nlohmann::json run_config_to_json(const RunConfig& cfg);

// Generates one configured mask at the given dimensions (the run seed is
// folded into perlin seeding).
SaliencyMask build_mask(const MaskSpec& spec, int w, int h, std::uint64_t run_seed);

struct RunResult {
  std::vector<MeasurementRecord> records;
  std::vector<std::string> failures;
  std::vector<std::string> dropped_encoders;
  std::filesystem::path records_csv;
  std::filesystem::path manifest_json;
};

// Executes the full matrix. Every work item's records are appended to
// <output_dir>/records.csv in a deterministic order as cells finish; adapters
// whose tools are missing are dropped up front (the run degrades to the
// built-in lossless baseline rather than producing wrong numbers). Failures
// are isolated per record and collected, never fatal to other cells.
RunResult run_matrix(const RunConfig& cfg);

struct SummaryTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const;
};

// Groups records by the named fields and reports count/mean/median for the
// numeric metrics. With per_level=true each record explodes into one row per
// saliency level first, adding the "saliency_level" field and per-level
// metrics. Unknown group fields throw.
SummaryTable summarize(const std::vector<MeasurementRecord>& records,
                       const std::vector<std::string>& group_by,
                       bool per_level = false);

}  // namespace svs

#endif  // SVS_BENCH_HPP_
