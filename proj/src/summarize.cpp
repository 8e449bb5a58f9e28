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

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

#include "svs/bench.hpp"

namespace svs {
namespace {

struct FlatRow {
  const MeasurementRecord* rec;
  double saliency_level = -1.0;  // per-level mode only
  double mse = 0.0;              // per-level MSE in per-level mode
  double bpp_contrib = 0.0;
};

double mean(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

using KeyFn = std::function<std::string(const FlatRow&)>;
using MetricFn = std::function<double(const FlatRow&)>;

}  // namespace

std::string SummaryTable::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out += ',';
    out += columns[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

SummaryTable summarize(const std::vector<MeasurementRecord>& records,
                       const std::vector<std::string>& group_by,
                       bool per_level) {
  if (records.empty()) throw std::invalid_argument("no records to summarize");

  std::map<std::string, KeyFn> key_fns = {
      {"image_id", [](const FlatRow& r) { return r.rec->image_id; }},
      {"mask_type", [](const FlatRow& r) { return r.rec->mask_type; }},
      {"policy", [](const FlatRow& r) { return r.rec->policy; }},
      {"encoder", [](const FlatRow& r) { return r.rec->encoder; }},
      {"kernel_width",
       [](const FlatRow& r) { return format_double(r.rec->kernel_width); }},
      {"param_raw",
       [](const FlatRow& r) { return format_double(r.rec->param_raw); }},
      {"param_scaled",
       [](const FlatRow& r) { return format_double(r.rec->param_scaled); }},
  };
  if (per_level)
    key_fns.emplace("saliency_level", [](const FlatRow& r) {
      return format_double(r.saliency_level);
    });

  std::vector<std::pair<std::string, MetricFn>> metrics;
  if (per_level) {
    metrics = {
        {"mse_level", [](const FlatRow& r) { return r.mse; }},
        {"bpp_level", [](const FlatRow& r) { return r.bpp_contrib; }},
        {"rate_reduction_pct",
         [](const FlatRow& r) { return r.rec->rate_reduction_pct; }},
    };
  } else {
    metrics = {
        {"kernel_width", [](const FlatRow& r) { return r.rec->kernel_width; }},
        {"bpp_original", [](const FlatRow& r) { return r.rec->bpp_original; }},
        {"bpp_processed", [](const FlatRow& r) { return r.rec->bpp_processed; }},
        {"rate_reduction_pct",
         [](const FlatRow& r) { return r.rec->rate_reduction_pct; }},
        {"mse_global", [](const FlatRow& r) { return r.rec->mse_global; }},
    };
  }

  std::vector<KeyFn> group_fns;
  for (const auto& field : group_by) {
    const auto it = key_fns.find(field);
    if (it == key_fns.end())
      throw std::invalid_argument("unknown group-by field: " + field);
    group_fns.push_back(it->second);
  }

  std::vector<FlatRow> rows;
  for (const auto& rec : records) {
    if (per_level) {
      for (const auto& [level, mse] : rec.mse_per_level) {
        FlatRow row{&rec, level, mse, 0.0};
        const auto bpp_it = rec.bpp_per_level.find(level);
        if (bpp_it != rec.bpp_per_level.end()) row.bpp_contrib = bpp_it->second;
        rows.push_back(row);
      }
    } else {
      rows.push_back({&rec});
    }
  }
  if (rows.empty())
    throw std::invalid_argument(
        "per-level summary requested but records carry no per-level data");

  // Group keys sort lexicographically by field order, so output is stable.
  std::map<std::vector<std::string>, std::vector<const FlatRow*>> groups;
  for (const auto& row : rows) {
    std::vector<std::string> key;
    key.reserve(group_fns.size());
    for (const auto& fn : group_fns) key.push_back(fn(row));
    groups[key].push_back(&row);
  }

  SummaryTable table;
  table.columns = group_by;
  table.columns.push_back("count");
  for (const auto& [name, fn] : metrics) {
    table.columns.push_back("mean_" + name);
    table.columns.push_back("median_" + name);
  }

  for (const auto& [key, members] : groups) {
    std::vector<std::string> out = key;
    out.push_back(std::to_string(members.size()));
    for (const auto& [name, fn] : metrics) {
      std::vector<double> values;
      values.reserve(members.size());
      for (const FlatRow* m : members) values.push_back(fn(*m));
      out.push_back(format_double(mean(values)));
      out.push_back(format_double(median(values)));
    }
    table.rows.push_back(std::move(out));
  }
  return table;
}

}  // namespace svs
