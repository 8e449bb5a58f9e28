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

#ifndef SVS_CODECS_HPP_
#define SVS_CODECS_HPP_

#include <cstdint>
#include <filesystem>
#include <string>

#include "svs/image.hpp"

namespace svs {

enum class ParamKind { kQuality, kRate };

ParamKind param_kind_from_string(const std::string& s);
std::string to_string(ParamKind kind);

// External codec driven through command templates. Placeholders {input},
// {output} and {param} are substituted per whitespace-split token, so paths
// never pass through a shell. Empty templates select the built-in lossless
// PNG baseline.
struct EncoderAdapter {
  std::string name;
  std::string extension;        // artifact extension; defaults to name
  std::string encode_template;  // needs {input} {output} {param}
  std::string decode_template;  // needs {input} {output}
  ParamKind param_kind = ParamKind::kQuality;
  double param_min = 0.0;
  double param_max = 100.0;
  bool deterministic = true;
  double timeout_sec = 300.0;

  bool is_builtin_lossless() const { return encode_template.empty(); }
  std::string artifact_extension() const {
    return extension.empty() ? name : extension;
  }
  void validate() const;
};

// The zero-dependency baseline: encode re-saves as PNG, decode reads it back.
EncoderAdapter lossless_baseline();

struct EncodedArtifact {
  std::filesystem::path path;
  std::uint64_t bytes = 0;
  std::string encoder;
  double param_raw = 0.0;
  double param_scaled = 0.0;
};

// Places encoder parameters on a common 0-100 quality axis: quality values
// pass through; rate values map linearly and decreasingly with rate=1 -> 100
// and the configured maximum rate -> 0.
double rescale_param(double param_raw, ParamKind kind, double param_min,
                     double param_max);

// Encodes the raster file at img_path into out_dir via the adapter template.
// Fails on missing tools, nonzero exits, timeouts, and empty outputs.
EncodedArtifact encode(const std::filesystem::path& img_path,
                       const EncoderAdapter& adapter, double param_raw,
                       const std::filesystem::path& out_dir);

// Decodes an artifact back to pixels (through the decode template for
// external adapters). The temporary decoded raster is removed afterwards.
ImageBuffer decode(const EncodedArtifact& artifact, const EncoderAdapter& adapter);

// True when the adapter's executables resolve (always true for the baseline).
bool adapter_tool_available(const EncoderAdapter& adapter);

}  // namespace svs

#endif  // SVS_CODECS_HPP_
