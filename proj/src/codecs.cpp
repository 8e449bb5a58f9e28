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

#include "svs/codecs.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

#include "svs/subprocess.hpp"

namespace svs {
namespace {

void require_placeholder(const std::string& tmpl, const std::string& key,
                         const std::string& adapter_name) {
  if (tmpl.find("{" + key + "}") == std::string::npos)
    throw std::invalid_argument("adapter '" + adapter_name +
                                "': template is missing {" + key + "}");
}

std::string format_param(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::vector<std::string> instantiate(const std::string& tmpl,
                                     const std::string& input,
                                     const std::string& output,
                                     const std::string& param) {
  std::vector<std::string> argv = split_command(tmpl);
  for (auto& tok : argv) {
    tok = substitute_placeholder(tok, "input", input);
    tok = substitute_placeholder(tok, "output", output);
    tok = substitute_placeholder(tok, "param", param);
  }
  return argv;
}

void run_tool_or_throw(const std::vector<std::string>& argv, double timeout_sec,
                       const std::string& what) {
  if (!executable_exists(argv.front()))
    throw std::runtime_error(what + ": executable '" + argv.front() +
                             "' not found; install it or fix the adapter "
                             "command template");
  const CommandResult r = run_command(argv, timeout_sec);
  if (r.timed_out)
    throw std::runtime_error(what + ": timed out after " +
                             format_param(timeout_sec) + "s");
  if (r.exit_code != 0)
    throw std::runtime_error(what + ": '" + argv.front() +
                             "' exited with code " + std::to_string(r.exit_code));
}

}  // namespace

ParamKind param_kind_from_string(const std::string& s) {
  if (s == "quality") return ParamKind::kQuality;
  if (s == "rate") return ParamKind::kRate;
  throw std::invalid_argument("unknown param kind: " + s);
}

std::string to_string(ParamKind kind) {
  return kind == ParamKind::kQuality ? "quality" : "rate";
}

void EncoderAdapter::validate() const {
  if (name.empty()) throw std::invalid_argument("adapter name must not be empty");
  if (!(param_min <= param_max))
    throw std::invalid_argument("adapter '" + name + "': empty param range");
  if (is_builtin_lossless()) return;
  require_placeholder(encode_template, "input", name);
  require_placeholder(encode_template, "output", name);
  require_placeholder(encode_template, "param", name);
  require_placeholder(decode_template, "input", name);
  require_placeholder(decode_template, "output", name);
  if (param_kind == ParamKind::kRate && param_min < 1.0)
    throw std::invalid_argument("adapter '" + name +
                                "': rate parameters start at 1");
  if (param_kind == ParamKind::kQuality &&
      (param_min < 0.0 || param_max > 100.0))
    throw std::invalid_argument("adapter '" + name +
                                "': quality range must lie within [0, 100]");
  if (!(timeout_sec > 0))
    throw std::invalid_argument("adapter '" + name + "': timeout must be positive");
}

EncoderAdapter lossless_baseline() {
  EncoderAdapter a;
  a.name = "png";
  a.extension = "png";
  a.param_kind = ParamKind::kQuality;
  a.param_min = 0.0;
  a.param_max = 100.0;
  return a;
}

double rescale_param(double param_raw, ParamKind kind, double param_min,
                     double param_max) {
  if (!(param_raw >= param_min && param_raw <= param_max))
    throw std::invalid_argument("parameter " + format_param(param_raw) +
                                " outside the configured range [" +
                                format_param(param_min) + ", " +
                                format_param(param_max) + "]");
  if (kind == ParamKind::kQuality) return param_raw;
  if (!(param_max > 1.0))
    throw std::invalid_argument("rate rescaling needs a maximum rate > 1");
  return 100.0 * (param_max - param_raw) / (param_max - 1.0);
}

EncodedArtifact encode(const std::filesystem::path& img_path,
                       const EncoderAdapter& adapter, double param_raw,
                       const std::filesystem::path& out_dir) {
  adapter.validate();
  const double scaled =
      rescale_param(param_raw, adapter.param_kind, adapter.param_min,
                    adapter.param_max);

  std::filesystem::create_directories(out_dir);
  const std::string stem = img_path.stem().string();
  const std::filesystem::path out =
      out_dir / (stem + "." + adapter.name + "_p" + format_param(param_raw) +
                 "." + adapter.artifact_extension());

  if (adapter.is_builtin_lossless()) {
    const ImageBuffer img = load_image(img_path);
    const std::uint64_t bytes = save_image(img, out);
    return {out, bytes, adapter.name, param_raw, scaled};
  }

  const auto argv = instantiate(adapter.encode_template, img_path.string(),
                                out.string(), format_param(param_raw));
  run_tool_or_throw(argv, adapter.timeout_sec,
                    "encode " + img_path.filename().string() + " with " +
                        adapter.name);

  std::error_code ec;
  const auto bytes = std::filesystem::file_size(out, ec);
  if (ec || bytes == 0) {
    std::filesystem::remove(out, ec);
    throw std::runtime_error("encode with " + adapter.name +
                             " produced no output for " + img_path.string());
  }
  return {out, bytes, adapter.name, param_raw, scaled};
}

ImageBuffer decode(const EncodedArtifact& artifact, const EncoderAdapter& adapter) {
  if (!std::filesystem::exists(artifact.path))
    throw std::runtime_error("artifact missing: " + artifact.path.string());
  if (adapter.is_builtin_lossless()) return load_image(artifact.path);

  const std::filesystem::path decoded = artifact.path.string() + ".dec.png";
  const auto argv = instantiate(adapter.decode_template, artifact.path.string(),
                                decoded.string(), "");
  run_tool_or_throw(argv, adapter.timeout_sec,
                    "decode " + artifact.path.filename().string() + " with " +
                        adapter.name);
  std::error_code ec;
  if (!std::filesystem::exists(decoded) ||
      std::filesystem::file_size(decoded, ec) == 0) {
    throw std::runtime_error("decode with " + adapter.name +
                             " produced no output for " + artifact.path.string());
  }
  ImageBuffer img = load_image(decoded);
  std::filesystem::remove(decoded, ec);
  return img;
}

bool adapter_tool_available(const EncoderAdapter& adapter) {
  if (adapter.is_builtin_lossless()) return true;
  const auto enc = split_command(adapter.encode_template);
  const auto dec = split_command(adapter.decode_template);
  return !enc.empty() && !dec.empty() && executable_exists(enc.front()) &&
         executable_exists(dec.front());
}

}  // namespace svs
