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

#include "svs/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>

#include "svs/image.hpp"

namespace svs {
namespace {

bool has_supported_extension(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".png";
}

// A well-formed PNG ends with the fixed 12-byte IEND chunk. Checking it
// catches truncated files at ingest time without decoding pixel data; CRC
// damage deeper in the stream still surfaces (and is isolated) at load time.
void check_png_trailer(const std::filesystem::path& p) {
  static constexpr unsigned char kIend[12] = {0x00, 0x00, 0x00, 0x00, 'I',
                                              'E',  'N',  'D',  0xAE, 0x42,
                                              0x60, 0x82};
  std::ifstream in(p, std::ios::binary);
  in.seekg(0, std::ios::end);
  const std::streamoff size = in.tellg();
  unsigned char tail[12];
  if (size < 12) throw std::runtime_error("truncated PNG");
  in.seekg(size - 12);
  in.read(reinterpret_cast<char*>(tail), 12);
  if (!in || !std::equal(tail, tail + 12, kIend))
    throw std::runtime_error("truncated PNG (missing IEND)");
}

}  // namespace

nlohmann::json DatasetManifest::to_json() const {
  nlohmann::json j;
  j["root"] = root;
  j["entries"] = nlohmann::json::array();
  for (const auto& e : entries)
    j["entries"].push_back({{"path", e.path},
                            {"width", e.width},
                            {"height", e.height},
                            {"bytes", e.bytes}});
  j["skipped"] = nlohmann::json::array();
  for (const auto& s : skipped)
    j["skipped"].push_back({{"path", s.path}, {"reason", s.reason}});
  j["units"] = nlohmann::json::array();
  for (const auto& u : units)
    j["units"].push_back({{"entry", u.entry},
                          {"x0", u.x0},
                          {"y0", u.y0},
                          {"width", u.width},
                          {"height", u.height}});
  return j;
}

DatasetManifest DatasetManifest::from_json(const nlohmann::json& j) {
  DatasetManifest m;
  m.root = j.value("root", std::string());
  for (const auto& e : j.at("entries"))
    m.entries.push_back({e.at("path").get<std::string>(), e.at("width").get<int>(),
                         e.at("height").get<int>(), e.at("bytes").get<std::uint64_t>()});
  for (const auto& s : j.value("skipped", nlohmann::json::array()))
    m.skipped.push_back({s.at("path").get<std::string>(), s.at("reason").get<std::string>()});
  for (const auto& u : j.value("units", nlohmann::json::array()))
    m.units.push_back({u.at("entry").get<int>(), u.at("x0").get<int>(),
                       u.at("y0").get<int>(), u.at("width").get<int>(),
                       u.at("height").get<int>()});
  return m;
}

std::vector<WorkUnit> tile_windows(int entry, int w, int h, int tile) {
  if (tile < 1) throw std::invalid_argument("tile size must be positive");
  std::vector<WorkUnit> units;
  for (int y = 0; y < h; y += tile) {
    for (int x = 0; x < w; x += tile) {
      units.push_back({entry, x, y, std::min(tile, w - x), std::min(tile, h - y)});
    }
  }
  return units;
}

DatasetManifest ingest_directory(const std::filesystem::path& root,
                                 std::optional<int> tile) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root))
    throw std::runtime_error("ingest: not a directory: " + root.string());

  std::vector<fs::path> files;
  for (const auto& de : fs::recursive_directory_iterator(root)) {
    if (de.is_regular_file() && has_supported_extension(de.path()))
      files.push_back(de.path());
  }
  std::sort(files.begin(), files.end(),
            [&](const fs::path& a, const fs::path& b) {
              return a.lexically_relative(root).generic_string() <
                     b.lexically_relative(root).generic_string();
            });

  DatasetManifest manifest;
  manifest.root = root.string();
  for (const auto& f : files) {
    const std::string rel = f.lexically_relative(root).generic_string();
    try {
      const RasterInfo info = read_raster_info(f);
      check_png_trailer(f);
      if (info.width < 1 || info.height < 1)
        throw std::runtime_error("degenerate dimensions");
      const auto entry_index = static_cast<int>(manifest.entries.size());
      manifest.entries.push_back(
          {rel, info.width, info.height, fs::file_size(f)});
      if (tile) {
        auto tiles = tile_windows(entry_index, info.width, info.height, *tile);
        manifest.units.insert(manifest.units.end(), tiles.begin(), tiles.end());
      } else {
        manifest.units.push_back({entry_index, 0, 0, info.width, info.height});
      }
    } catch (const std::exception& e) {
      manifest.skipped.push_back({rel, e.what()});
    }
  }
  return manifest;
}

}  // namespace svs
