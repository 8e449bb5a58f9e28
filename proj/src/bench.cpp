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

#include "svs/bench.hpp"

#include <png.h>
#include <zlib.h>

#include <chrono>
#include <condition_variable>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>

#include "svs/composite.hpp"
#include "svs/ingest.hpp"
#include "svs/parallel.hpp"

namespace svs {
namespace {

SigmaRule parse_sigma_rule(const nlohmann::json& j) {
  SigmaRule rule;
  if (j.is_string()) {
    rule.name = j.get<std::string>();
  } else if (j.is_object()) {
    rule.name = j.value("name", std::string("default"));
    rule.scale = j.value("scale", 1.0);
  } else {
    throw std::invalid_argument("sigma_rule must be a string or object");
  }
  rule.sigma_for(3);  // reject unknown names early
  return rule;
}

MaskSpec parse_mask_spec(const nlohmann::json& j) {
  MaskSpec spec;
  spec.type = j.at("type").get<std::string>();
  if (spec.type != "half" && spec.type != "grid" && spec.type != "perlin" &&
      spec.type != "box")
    throw std::invalid_argument("unknown mask type: " + spec.type);
  spec.name = j.value("name", spec.type);
  spec.seed = j.value("seed", std::uint64_t{0});
  spec.octaves = j.value("octaves", 3);
  spec.perlin.persistence = j.value("persistence", spec.perlin.persistence);
  spec.perlin.lacunarity = j.value("lacunarity", spec.perlin.lacunarity);
  spec.perlin.base_cells = j.value("base_cells", spec.perlin.base_cells);
  spec.boxes.dilation = j.value("dilation", spec.boxes.dilation);
  spec.inside = j.value("inside", spec.inside);
  spec.outside = j.value("outside", spec.outside);
  for (const auto& b : j.value("boxes", nlohmann::json::array())) {
    if (!b.is_array() || b.size() != 4)
      throw std::invalid_argument("box entries must be [x, y, w, h]");
    spec.boxes.boxes.push_back(
        {b[0].get<int>(), b[1].get<int>(), b[2].get<int>(), b[3].get<int>()});
  }
  return spec;
}

EncoderSweep parse_encoder(const nlohmann::json& j) {
  EncoderSweep sweep;
  auto& a = sweep.adapter;
  a.name = j.at("name").get<std::string>();
  a.extension = j.value("extension", std::string());
  a.encode_template = j.value("encode_template", std::string());
  a.decode_template = j.value("decode_template", std::string());
  a.param_kind = param_kind_from_string(j.value("param_kind", std::string("quality")));
  if (j.contains("param_range")) {
    const auto& r = j.at("param_range");
    if (!r.is_array() || r.size() != 2)
      throw std::invalid_argument("param_range must be [min, max]");
    a.param_min = r[0].get<double>();
    a.param_max = r[1].get<double>();
  }
  a.deterministic = j.value("deterministic", true);
  a.timeout_sec = j.value("timeout_sec", 300.0);
  a.validate();
  sweep.params = j.value("params", std::vector<double>{});
  if (sweep.params.empty())
    throw std::invalid_argument("adapter '" + a.name + "': params list is empty");
  for (double p : sweep.params)
    rescale_param(p, a.param_kind, a.param_min, a.param_max);
  return sweep;
}

}  // namespace

void RunConfig::validate() const {
  if (input_root.empty() || !std::filesystem::is_directory(input_root))
    throw std::invalid_argument("input_root is not a directory: " +
                                input_root.string());
  if (output_dir.empty())
    throw std::invalid_argument("output_dir must be set");
  if (smoothing.empty())
    throw std::invalid_argument("at least one smoothing policy is required");
  if (tile && *tile < 1) throw std::invalid_argument("tile size must be positive");
  bank.validate();
  bool wants_masks = false;
  for (const auto& p : smoothing) {
    if (p.type == "uniform") {
      if (p.widths.empty())
        throw std::invalid_argument("uniform policy needs a widths list");
      for (int w : p.widths)
        if (w < 1 || w % 2 == 0)
          throw std::invalid_argument("uniform widths must be odd and >= 1");
    } else if (p.type == "saliency") {
      wants_masks = true;
    } else {
      throw std::invalid_argument("unknown smoothing policy: " + p.type);
    }
  }
  if (wants_masks && masks.empty())
    throw std::invalid_argument("saliency policy configured but no masks given");
  std::set<std::string> mask_names;
  for (const auto& m : masks)
    if (!mask_names.insert(m.name).second)
      throw std::invalid_argument("duplicate mask name: " + m.name);
  for (const auto& e : encoders) e.adapter.validate();
}

RunConfig parse_run_config(const nlohmann::json& j) {
  RunConfig cfg;
  cfg.input_root = j.at("input_root").get<std::string>();
  if (j.contains("tile") && !j.at("tile").is_null())
    cfg.tile = j.at("tile").get<int>();
  cfg.output_dir = j.at("output_dir").get<std::string>();
  cfg.seed = j.value("seed", std::uint64_t{0});
  cfg.workers = j.value("workers", 0);
  cfg.keep_artifacts = j.value("keep_artifacts", true);
  if (j.contains("sigma_rule")) cfg.sigma_rule = parse_sigma_rule(j.at("sigma_rule"));
  if (j.contains("kernel_bank"))
    cfg.bank.admissible = j.at("kernel_bank").get<std::vector<int>>();
  for (const auto& m : j.value("masks", nlohmann::json::array()))
    cfg.masks.push_back(parse_mask_spec(m));
  for (const auto& p : j.at("smoothing")) {
    SmoothingPolicy policy;
    policy.type = p.at("type").get<std::string>();
    policy.widths = p.value("widths", std::vector<int>{});
    cfg.smoothing.push_back(std::move(policy));
  }
  for (const auto& e : j.value("encoders", nlohmann::json::array()))
    cfg.encoders.push_back(parse_encoder(e));
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path.string());
  return parse_run_config(nlohmann::json::parse(in));
}

nlohmann::json run_config_to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["input_root"] = cfg.input_root.string();
  if (cfg.tile) j["tile"] = *cfg.tile;
  j["output_dir"] = cfg.output_dir.string();
  j["seed"] = cfg.seed;
  j["workers"] = cfg.workers;
  j["keep_artifacts"] = cfg.keep_artifacts;
  j["sigma_rule"] = {{"name", cfg.sigma_rule.name}, {"scale", cfg.sigma_rule.scale}};
  j["kernel_bank"] = cfg.bank.admissible;
  j["masks"] = nlohmann::json::array();
  for (const auto& m : cfg.masks) {
    nlohmann::json mj = {{"type", m.type},       {"name", m.name},
                         {"seed", m.seed},       {"octaves", m.octaves},
                         {"persistence", m.perlin.persistence},
                         {"lacunarity", m.perlin.lacunarity},
                         {"base_cells", m.perlin.base_cells},
                         {"dilation", m.boxes.dilation},
                         {"inside", m.inside},   {"outside", m.outside}};
    mj["boxes"] = nlohmann::json::array();
    for (const auto& b : m.boxes.boxes) mj["boxes"].push_back({b.x, b.y, b.w, b.h});
    j["masks"].push_back(std::move(mj));
  }
  j["smoothing"] = nlohmann::json::array();
  for (const auto& p : cfg.smoothing)
    j["smoothing"].push_back({{"type", p.type}, {"widths", p.widths}});
  j["encoders"] = nlohmann::json::array();
  for (const auto& e : cfg.encoders) {
    j["encoders"].push_back({{"name", e.adapter.name},
                             {"extension", e.adapter.extension},
                             {"encode_template", e.adapter.encode_template},
                             {"decode_template", e.adapter.decode_template},
                             {"param_kind", to_string(e.adapter.param_kind)},
                             {"param_range", {e.adapter.param_min, e.adapter.param_max}},
                             {"deterministic", e.adapter.deterministic},
                             {"timeout_sec", e.adapter.timeout_sec},
                             {"params", e.params}});
  }
  return j;
}

SaliencyMask build_mask(const MaskSpec& spec, int w, int h, std::uint64_t run_seed) {
  if (spec.type == "half") return make_half_mask(w, h);
  if (spec.type == "grid") return make_grid_mask(w, h);
  if (spec.type == "perlin")
    return make_perlin_mask(w, h, run_seed + spec.seed, spec.octaves, spec.perlin);
  if (spec.type == "box")
    return make_box_mask(w, h, spec.boxes, spec.inside, spec.outside);
  throw std::invalid_argument("unknown mask type: " + spec.type);
}

namespace {

// Flushes cell outputs to the CSV/log in cell-index order no matter which
// worker finishes first, keeping output files deterministic and durably
// appended as the run progresses.
class OrderedSink {
 public:
  OrderedSink(std::ofstream csv, std::ofstream log)
      : csv_(std::move(csv)), log_(std::move(log)) {}

  void deliver(std::size_t cell, std::vector<MeasurementRecord> records,
               std::vector<std::string> failures) {
    std::lock_guard<std::mutex> lock(mutex_);
    pending_[cell] = {std::move(records), std::move(failures)};
    while (true) {
      auto it = pending_.find(next_);
      if (it == pending_.end()) break;
      for (const auto& r : it->second.first) {
        csv_ << record_to_csv_row(r) << "\n";
        all_records_.push_back(r);
      }
      for (const auto& f : it->second.second) {
        log_ << f << "\n";
        all_failures_.push_back(f);
      }
      csv_.flush();
      log_.flush();
      pending_.erase(it);
      ++next_;
    }
  }

  std::vector<MeasurementRecord> take_records() { return std::move(all_records_); }
  std::vector<std::string> take_failures() { return std::move(all_failures_); }

 private:
  std::mutex mutex_;
  std::ofstream csv_;
  std::ofstream log_;
  std::size_t next_ = 0;
  std::map<std::size_t, std::pair<std::vector<MeasurementRecord>,
                                  std::vector<std::string>>> pending_;
  std::vector<MeasurementRecord> all_records_;
  std::vector<std::string> all_failures_;
};

struct PolicyInstance {
  std::string policy;            // "uniform" | "saliency"
  int uniform_width = 1;         // uniform only
  const MaskSpec* mask = nullptr;  // saliency only

  std::string label() const {
    return policy == "uniform" ? "uniform K=" + std::to_string(uniform_width)
                               : "saliency mask=" + mask->name;
  }
};

struct OriginalAsset {
  std::string image_id;
  ImageBuffer pixels;
  std::filesystem::path png_path;
  std::uint64_t png_bytes = 0;
  // bytes of each encoded original, parallel to the flat (encoder, param)
  // enumeration; 0 marks a failed encode (isolated per parameter)
  std::vector<std::uint64_t> encoded_bytes;
  std::vector<std::string> encode_failures;  // parallel; empty when ok
  bool failed = false;
  std::string failure;
};

std::string unit_id(const DatasetManifest& manifest, const WorkUnit& unit,
                    bool tiled) {
  const auto& entry = manifest.entries[unit.entry];
  if (!tiled) return entry.path;
  return entry.path + "#" + std::to_string(unit.x0) + "_" +
         std::to_string(unit.y0) + "_" + std::to_string(unit.width) + "x" +
         std::to_string(unit.height);
}

std::string sanitize_for_filename(std::string s) {
  for (char& ch : s)
    if (ch == '/' || ch == '\\' || ch == '#' || ch == ' ') ch = '_';
  return s;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc;
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

}  // namespace

RunResult run_matrix(const RunConfig& cfg) {
  namespace fs = std::filesystem;
  cfg.validate();

  const fs::path out_root = cfg.output_dir;
  const fs::path csv_path = out_root / "records.csv";
  if (fs::exists(csv_path))
    throw std::runtime_error(csv_path.string() +
                             " already exists; choose a fresh output directory");
  fs::create_directories(out_root);
  fs::create_directories(out_root / "originals");
  fs::create_directories(out_root / "processed");
  fs::create_directories(out_root / "artifacts");

  const std::string started = utc_timestamp();

  // Missing tools degrade the run to the built-in baseline, loudly.
  std::vector<EncoderSweep> encoders;
  std::vector<std::string> dropped;
  for (const auto& sweep : cfg.encoders) {
    if (adapter_tool_available(sweep.adapter)) {
      encoders.push_back(sweep);
    } else {
      dropped.push_back(sweep.adapter.name);
      std::cerr << "warning: encoder '" << sweep.adapter.name
                << "' tool not found; continuing with remaining encoders\n";
    }
  }

  DatasetManifest dataset = ingest_directory(cfg.input_root, cfg.tile);
  if (dataset.units.empty())
    throw std::runtime_error("no usable inputs under " + cfg.input_root.string());
  for (const auto& s : dataset.skipped)
    std::cerr << "warning: skipped input " << s.path << ": " << s.reason << "\n";
  {
    std::ofstream mf(out_root / "dataset_manifest.json");
    mf << dataset.to_json().dump(2) << "\n";
  }

  std::vector<PolicyInstance> policies;
  for (const auto& p : cfg.smoothing) {
    if (p.type == "uniform") {
      for (int w : p.widths) policies.push_back({"uniform", w, nullptr});
    } else {
      for (const auto& m : cfg.masks) policies.push_back({"saliency", 1, &m});
    }
  }

  // Stage 1: decode and losslessly re-encode every original once; that file
  // is the rate baseline and the input handed to external encoders.
  std::vector<OriginalAsset> originals(dataset.units.size());
  parallel_for(0, static_cast<std::int64_t>(dataset.units.size()), cfg.workers,
               [&](std::int64_t i) {
    const WorkUnit& unit = dataset.units[i];
    OriginalAsset& asset = originals[i];
    asset.image_id = unit_id(dataset, unit, cfg.tile.has_value());
    try {
      const fs::path src = cfg.input_root / dataset.entries[unit.entry].path;
      ImageBuffer full = load_image(src);
      asset.pixels = (cfg.tile && (unit.width != full.width ||
                                   unit.height != full.height))
                         ? crop(full, unit.x0, unit.y0, unit.width, unit.height)
                         : std::move(full);
      asset.png_path = out_root / "originals" /
                       (sanitize_for_filename(asset.image_id) + ".png");
      asset.png_bytes = save_image(asset.pixels, asset.png_path);
      for (const auto& sweep : encoders) {
        for (double param : sweep.params) {
          try {
            const EncodedArtifact art =
                encode(asset.png_path, sweep.adapter, param,
                       out_root / "artifacts" / "originals");
            asset.encoded_bytes.push_back(art.bytes);
            asset.encode_failures.emplace_back();
            if (!cfg.keep_artifacts) fs::remove(art.path);
          } catch (const std::exception& e) {
            asset.encoded_bytes.push_back(0);
            asset.encode_failures.emplace_back(e.what());
          }
        }
      }
    } catch (const std::exception& e) {
      asset.failed = true;
      asset.failure = e.what();
    }
  });

  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot write " + csv_path.string());
  csv << record_csv_header() << "\n";
  csv.flush();
  std::ofstream log(out_root / "failures.log");
  OrderedSink sink(std::move(csv), std::move(log));

  const std::size_t n_policies = policies.size();
  const std::size_t n_cells = dataset.units.size() * n_policies;

  parallel_for(0, static_cast<std::int64_t>(n_cells), cfg.workers,
               [&](std::int64_t cell) {
    const std::size_t unit_index = static_cast<std::size_t>(cell) / n_policies;
    const PolicyInstance& policy = policies[cell % n_policies];
    const OriginalAsset& asset = originals[unit_index];

    std::vector<MeasurementRecord> records;
    std::vector<std::string> failures;
    if (asset.failed) {
      failures.push_back("input " + asset.image_id + ": " + asset.failure);
      sink.deliver(cell, std::move(records), std::move(failures));
      return;
    }

    try {
      const ImageBuffer& original = asset.pixels;
      const int w = original.width, h = original.height;

      std::optional<SaliencyMask> mask;
      ImageBuffer processed;
      double kernel_width = 1.0;
      std::string mask_type;
      if (policy.policy == "uniform") {
        kernel_width = policy.uniform_width;
        processed = convolve_uniform(
            original, cfg.sigma_rule.spec_for(policy.uniform_width));
      } else {
        mask = build_mask(*policy.mask, w, h, cfg.seed);
        kernel_width = effective_kernel_width(*mask, cfg.bank);
        mask_type = policy.mask->name;
        processed = composite_smooth(original, *mask, cfg.bank, cfg.sigma_rule);
      }

      const std::string file_tag =
          sanitize_for_filename(asset.image_id) + "." +
          (policy.policy == "uniform"
               ? "uniform_k" + std::to_string(policy.uniform_width)
               : "saliency_" + sanitize_for_filename(policy.mask->name));
      const fs::path processed_png = out_root / "processed" / (file_tag + ".png");
      const std::uint64_t processed_bytes = save_image(processed, processed_png);

      // Built-in lossless baseline row.
      MeasurementRecord base;
      base.image_id = asset.image_id;
      base.mask_type = mask_type;
      base.policy = policy.policy;
      base.kernel_width = kernel_width;
      base.encoder = "png";
      base.param_raw = 0.0;
      base.param_scaled = 100.0;
      base.bpp_original = compute_bpp(asset.png_bytes, w, h);
      base.bpp_processed = compute_bpp(processed_bytes, w, h);
      base.rate_reduction_pct =
          rate_reduction_pct(base.bpp_original, base.bpp_processed);
      base.mse_global = compute_mse(original, processed);
      if (mask) {
        for (double level : mask->level_set) {
          std::vector<std::uint8_t> region(mask->pixel_count(), 0);
          for (std::size_t p = 0; p < region.size(); ++p)
            region[p] = mask->levels[p] == level ? 1 : 0;
          base.mse_per_level[level] = compute_mse(original, processed, &region);
          base.bpp_per_level[level] = region_bpp_estimate(processed, region);
        }
      }
      records.push_back(base);

      // External encoder rows: encode the processed image and compare to the
      // matching encoded original at the same parameter.
      std::size_t flat_param = 0;
      for (const auto& sweep : encoders) {
        for (double param : sweep.params) {
          const std::size_t flat = flat_param++;
          const std::uint64_t original_encoded_bytes = asset.encoded_bytes[flat];
          if (original_encoded_bytes == 0) {
            failures.push_back("cell " + asset.image_id + " " + policy.label() +
                               " encoder " + sweep.adapter.name + " param " +
                               format_double(param) + ": original encode failed: " +
                               asset.encode_failures[flat]);
            continue;
          }
          try {
            const EncodedArtifact art =
                encode(processed_png, sweep.adapter, param,
                       out_root / "artifacts" / file_tag);
            ImageBuffer decoded = decode(art, sweep.adapter);
            if (!decoded.same_shape(original))
              throw std::runtime_error("decoded dimensions differ from source");
            MeasurementRecord r = base;
            r.encoder = sweep.adapter.name;
            r.param_raw = art.param_raw;
            r.param_scaled = art.param_scaled;
            r.bpp_original = compute_bpp(original_encoded_bytes, w, h);
            r.bpp_processed = compute_bpp(art.bytes, w, h);
            r.rate_reduction_pct =
                rate_reduction_pct(r.bpp_original, r.bpp_processed);
            r.mse_global = compute_mse(original, decoded);
            r.mse_per_level.clear();
            r.bpp_per_level.clear();
            if (mask) {
              for (double level : mask->level_set) {
                std::vector<std::uint8_t> region(mask->pixel_count(), 0);
                for (std::size_t p = 0; p < region.size(); ++p)
                  region[p] = mask->levels[p] == level ? 1 : 0;
                r.mse_per_level[level] = compute_mse(original, decoded, &region);
              }
            }
            records.push_back(std::move(r));
            if (!cfg.keep_artifacts) fs::remove(art.path);
          } catch (const std::exception& e) {
            failures.push_back("cell " + asset.image_id + " " + policy.label() +
                               " encoder " + sweep.adapter.name + " param " +
                               format_double(param) + ": " + e.what());
          }
        }
      }
    } catch (const std::exception& e) {
      failures.push_back("cell " + asset.image_id + " " + policy.label() + ": " +
                         e.what());
    }
    sink.deliver(cell, std::move(records), std::move(failures));
  });

  RunResult result;
  result.records = sink.take_records();
  result.failures = sink.take_failures();
  result.dropped_encoders = dropped;
  result.records_csv = csv_path;
  result.manifest_json = out_root / "run_manifest.json";

  if (result.records.empty())
    throw std::runtime_error("all inputs failed; see " +
                             (out_root / "failures.log").string());

  nlohmann::json manifest;
  manifest["config"] = run_config_to_json(cfg);
  char hash_hex[17];
  std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                static_cast<unsigned long long>(
                    fnv1a64(run_config_to_json(cfg).dump())));
  manifest["config_hash"] = hash_hex;
  manifest["seed"] = cfg.seed;
  manifest["versions"] = {{"libpng", PNG_LIBPNG_VER_STRING},
                          {"zlib", ZLIB_VERSION}};
  manifest["started_utc"] = started;
  manifest["finished_utc"] = utc_timestamp();
  manifest["records"] = result.records.size();
  manifest["failures"] = result.failures;
  manifest["dropped_encoders"] = dropped;
  std::ofstream mf(result.manifest_json);
  mf << manifest.dump(2) << "\n";

  return result;
}

}  // namespace svs
