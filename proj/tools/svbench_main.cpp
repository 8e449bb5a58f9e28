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

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "svs/bench.hpp"
#include "svs/composite.hpp"

namespace {

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

svs::BoxAnnotation parse_boxes(const std::string& text, double dilation) {
  svs::BoxAnnotation ann;
  ann.dilation = dilation;
  std::istringstream groups(text);
  std::string group;
  while (std::getline(groups, group, ';')) {
    if (group.empty()) continue;
    std::istringstream in(group);
    std::string field;
    std::vector<int> v;
    while (std::getline(in, field, ',')) v.push_back(std::stoi(field));
    if (v.size() != 4)
      throw CLI::ValidationError("--boxes", "each box must be x,y,w,h");
    ann.boxes.push_back({v[0], v[1], v[2], v[3]});
  }
  return ann;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Saliency-driven variable-rate smoothing benchmark"};
  app.require_subcommand(1);

  int workers = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  app.add_option("--workers", workers, "Worker threads (0 = hardware)");
  app.add_option("--seed", seed, "Run seed (overrides config)")
      ->each([&](const std::string&) { seed_set = true; });

  // run
  auto* run = app.add_subcommand("run", "Execute a benchmark matrix");
  std::string config_path;
  std::string output_override;
  run->add_option("--config", config_path, "Run config JSON")->required();
  run->add_option("--output-dir", output_override, "Override output directory");

  // summarize
  auto* summ = app.add_subcommand("summarize", "Aggregate a records CSV");
  std::string records_path, group_by_csv, summary_out;
  bool per_level = false;
  summ->add_option("--records", records_path, "records.csv from a run")->required();
  summ->add_option("--group-by", group_by_csv, "Comma-separated fields")->required();
  summ->add_flag("--per-level", per_level, "Explode per-saliency-level metrics");
  summ->add_option("--out", summary_out, "Write CSV here instead of stdout");

  // mask
  auto* mask_cmd = app.add_subcommand("mask", "Generate a saliency mask");
  std::string mask_type, mask_out, boxes_text;
  int mw = 512, mh = 512, octaves = 3;
  double dilation = 0.5, inside = 0.8, outside = 0.0;
  mask_cmd->add_option("--type", mask_type, "half|grid|perlin|box")->required();
  mask_cmd->add_option("--out", mask_out, "Output PNG path")->required();
  mask_cmd->add_option("--width", mw, "Mask width");
  mask_cmd->add_option("--height", mh, "Mask height");
  mask_cmd->add_option("--octaves", octaves, "Perlin octaves");
  mask_cmd->add_option("--boxes", boxes_text, "Boxes as x,y,w,h;x,y,w,h;...");
  mask_cmd->add_option("--dilation", dilation, "Box growth per side (fraction)");
  mask_cmd->add_option("--inside", inside, "Saliency inside boxes");
  mask_cmd->add_option("--outside", outside, "Saliency outside boxes");

  // smooth
  auto* smooth = app.add_subcommand("smooth", "Composite-smooth one image");
  std::string image_path, mask_path, smooth_out, sigma_name = "default";
  double sigma_scale = 1.0;
  smooth->add_option("--image", image_path, "Input PNG")->required();
  smooth->add_option("--mask", mask_path, "Saliency mask PNG")->required();
  smooth->add_option("--out", smooth_out, "Output PNG")->required();
  smooth->add_option("--sigma-rule", sigma_name, "default|radius-div3");
  smooth->add_option("--sigma-scale", sigma_scale, "Sigma multiplier");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      svs::RunConfig cfg = svs::load_run_config(config_path);
      if (workers > 0) cfg.workers = workers;
      if (seed_set) cfg.seed = seed;
      if (!output_override.empty()) cfg.output_dir = output_override;
      const svs::RunResult result = svs::run_matrix(cfg);
      std::cout << result.records.size() << " records -> "
                << result.records_csv.string() << "\n";
      if (!result.failures.size()) return 0;
      std::cerr << result.failures.size() << " cell failure(s); see "
                << (cfg.output_dir / "failures.log").string() << "\n";
      return 0;
    }

    if (*summ) {
      const auto records = svs::read_records_csv(records_path);
      const auto table =
          svs::summarize(records, split_list(group_by_csv), per_level);
      if (summary_out.empty()) {
        std::cout << table.to_csv();
      } else {
        std::ofstream out(summary_out);
        if (!out) throw std::runtime_error("cannot write " + summary_out);
        out << table.to_csv();
        std::cout << table.rows.size() << " groups -> " << summary_out << "\n";
      }
      return 0;
    }

    if (*mask_cmd) {
      svs::SaliencyMask m;
      if (mask_type == "half") {
        m = svs::make_half_mask(mw, mh);
      } else if (mask_type == "grid") {
        m = svs::make_grid_mask(mw, mh);
      } else if (mask_type == "perlin") {
        m = svs::make_perlin_mask(mw, mh, seed, octaves);
      } else if (mask_type == "box") {
        m = svs::make_box_mask(mw, mh, parse_boxes(boxes_text, dilation),
                               inside, outside);
      } else {
        throw std::runtime_error("unknown mask type: " + mask_type);
      }
      svs::save_mask(m, mask_out);
      std::cout << "wrote " << mask_out << " (levels:";
      for (double v : m.level_set) std::cout << " " << svs::format_double(v);
      std::cout << ")\n";
      return 0;
    }

    if (*smooth) {
      const svs::ImageBuffer img = svs::load_image(image_path);
      svs::SaliencyMask m = svs::load_mask(mask_path);
      if (m.width != img.width || m.height != img.height)
        m = svs::resample_mask(m, img.width, img.height);
      const svs::SigmaRule rule{sigma_name, sigma_scale};
      const svs::ImageBuffer out =
          svs::composite_smooth(img, m, svs::KernelBank{}, rule, workers);
      svs::save_image(out, smooth_out);
      std::cout << "wrote " << smooth_out << " (effective kernel width "
                << svs::format_double(svs::effective_kernel_width(m)) << ")\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
