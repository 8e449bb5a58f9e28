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

#include "svs/records.hpp"

#include <zlib.h>

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace svs {

const std::vector<std::string> kRecordCsvColumns = {
    "image_id",      "mask_type",  "policy",        "kernel_width",
    "encoder",       "param_raw",  "param_scaled",  "bpp_original",
    "bpp_processed", "rate_reduction_pct", "mse_global", "mse_per_level",
    "bpp_per_level"};

double compute_mse(const ImageBuffer& a, const ImageBuffer& b,
                   const std::vector<std::uint8_t>* region) {
  a.validate();
  b.validate();
  if (!a.same_shape(b))
    throw std::invalid_argument("MSE requires matching dimensions and channels");
  if (region && region->size() != a.pixel_count())
    throw std::invalid_argument("region raster does not match image dimensions");

  // Sample differences are 8-bit, so the squared-error sum fits a uint64
  // exactly; integer accumulation keeps the per-level decomposition identity
  // exact instead of summation-order dependent.
  std::uint64_t sum = 0;
  std::size_t included_pixels = 0;
  const int c = a.channels;
  for (std::size_t p = 0; p < a.pixel_count(); ++p) {
    if (region && !(*region)[p]) continue;
    ++included_pixels;
    const std::size_t base = p * c;
    for (int ch = 0; ch < c; ++ch) {
      const std::int64_t d = static_cast<std::int64_t>(a.samples[base + ch]) -
                             static_cast<std::int64_t>(b.samples[base + ch]);
      sum += static_cast<std::uint64_t>(d * d);
    }
  }
  if (included_pixels == 0) throw std::invalid_argument("empty MSE region");
  return static_cast<double>(sum) /
         (static_cast<double>(included_pixels) * c);
}

double compute_bpp(std::uint64_t file_bytes, int w, int h) {
  if (w < 1 || h < 1) throw std::invalid_argument("bpp needs a positive area");
  return 8.0 * static_cast<double>(file_bytes) /
         (static_cast<double>(w) * static_cast<double>(h));
}

double rate_reduction_pct(double bpp_original, double bpp_processed) {
  if (!(bpp_original > 0))
    throw std::invalid_argument("original bpp must be positive");
  return 100.0 * (1.0 - bpp_processed / bpp_original);
}

double region_bpp_estimate(const ImageBuffer& img,
                           const std::vector<std::uint8_t>& region) {
  img.validate();
  if (region.size() != img.pixel_count())
    throw std::invalid_argument("region raster does not match image dimensions");

  std::vector<std::uint8_t> gathered;
  const int c = img.channels;
  for (std::size_t p = 0; p < region.size(); ++p) {
    if (!region[p]) continue;
    const std::size_t base = p * c;
    for (int ch = 0; ch < c; ++ch) gathered.push_back(img.samples[base + ch]);
  }
  if (gathered.empty()) throw std::invalid_argument("empty region");

  uLongf compressed_size = compressBound(static_cast<uLong>(gathered.size()));
  std::vector<std::uint8_t> compressed(compressed_size);
  const int rc = compress2(compressed.data(), &compressed_size, gathered.data(),
                           static_cast<uLong>(gathered.size()), 6);
  if (rc != Z_OK) throw std::runtime_error("deflate failed on region samples");

  const std::size_t region_pixels = gathered.size() / c;
  return 8.0 * static_cast<double>(compressed_size) /
         static_cast<double>(region_pixels);
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& s) {
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::runtime_error("bad numeric CSV field: '" + s + "'");
  return v;
}

std::string format_level_map(const std::map<double, double>& m) {
  std::string out;
  for (const auto& [level, value] : m) {
    if (!out.empty()) out += ';';
    out += format_double(level);
    out += ':';
    out += format_double(value);
  }
  return out;
}

std::map<double, double> parse_level_map(const std::string& s) {
  std::map<double, double> m;
  if (s.empty()) return m;
  std::istringstream in(s);
  std::string pair;
  while (std::getline(in, pair, ';')) {
    const auto colon = pair.find(':');
    if (colon == std::string::npos)
      throw std::runtime_error("bad level map field: '" + s + "'");
    m[parse_double(pair.substr(0, colon))] = parse_double(pair.substr(colon + 1));
  }
  return m;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

std::string record_csv_header() {
  std::string out;
  for (const auto& col : kRecordCsvColumns) {
    if (!out.empty()) out += ',';
    out += col;
  }
  return out;
}

std::string record_to_csv_row(const MeasurementRecord& r) {
  const std::vector<std::string> fields = {
      csv_escape(r.image_id),
      csv_escape(r.mask_type),
      csv_escape(r.policy),
      format_double(r.kernel_width),
      csv_escape(r.encoder),
      format_double(r.param_raw),
      format_double(r.param_scaled),
      format_double(r.bpp_original),
      format_double(r.bpp_processed),
      format_double(r.rate_reduction_pct),
      format_double(r.mse_global),
      format_level_map(r.mse_per_level),
      format_level_map(r.bpp_per_level)};
  std::string out;
  for (const auto& f : fields) {
    if (!out.empty()) out += ',';
    out += f;
  }
  return out;
}

void write_records_csv(const std::vector<MeasurementRecord>& records,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << record_csv_header() << "\n";
  for (const auto& r : records) out << record_to_csv_row(r) << "\n";
}

std::vector<MeasurementRecord> read_records_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error(path.string() + ": empty records file");
  if (line != record_csv_header())
    throw std::runtime_error(path.string() + ": unexpected CSV header");

  std::vector<MeasurementRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != kRecordCsvColumns.size())
      throw std::runtime_error(path.string() + ": malformed CSV row");
    MeasurementRecord r;
    r.image_id = f[0];
    r.mask_type = f[1];
    r.policy = f[2];
    r.kernel_width = parse_double(f[3]);
    r.encoder = f[4];
    r.param_raw = parse_double(f[5]);
    r.param_scaled = parse_double(f[6]);
    r.bpp_original = parse_double(f[7]);
    r.bpp_processed = parse_double(f[8]);
    r.rate_reduction_pct = parse_double(f[9]);
    r.mse_global = parse_double(f[10]);
    r.mse_per_level = parse_level_map(f[11]);
    r.bpp_per_level = parse_level_map(f[12]);
    records.push_back(std::move(r));
  }
  return records;
}

std::uint64_t fnv1a64(const void* data, std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= bytes[i];
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

}  // namespace svs
