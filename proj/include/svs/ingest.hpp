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

#ifndef SVS_INGEST_HPP_
#define SVS_INGEST_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace svs {

struct ManifestEntry {
  std::string path;  // relative to the ingest root
  int width = 0;
  int height = 0;
  std::uint64_t bytes = 0;  // source size on disk
};

struct SkippedFile {
  std::string path;
  std::string reason;
};

// One unit of processing work: a whole image, or a tile window into it.
// Offsets are logical; pixel data stays in the parent file.
struct WorkUnit {
  int entry = 0;  // index into DatasetManifest::entries
  int x0 = 0;
  int y0 = 0;
  int width = 0;
  int height = 0;
};

struct DatasetManifest {
  std::string root;
  std::vector<ManifestEntry> entries;
  std::vector<SkippedFile> skipped;
  std::vector<WorkUnit> units;

  nlohmann::json to_json() const;
  static DatasetManifest from_json(const nlohmann::json& j);
};

// Recursively enumerates supported rasters under root in lexicographic path
// order. Per-file decode problems are recorded in `skipped`, not thrown. With
// a tile size, each image splits into row-major tile windows; edge tiles are
// smaller and every pixel is covered exactly once.
DatasetManifest ingest_directory(const std::filesystem::path& root,
                                 std::optional<int> tile = std::nullopt);

// Tile windows for a single w×h image (row-major; edge tiles clipped).
std::vector<WorkUnit> tile_windows(int entry, int w, int h, int tile);

}  // namespace svs

#endif  // SVS_INGEST_HPP_
