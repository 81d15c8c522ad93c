/* Copyright 2026 The ActionPipe Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef ACTIONPIPE_CONFIG_HPP_
#define ACTIONPIPE_CONFIG_HPP_

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <type_traits>
#include <string_view>
#include <thread>
#include <vector>

#include "actionpipe/error.hpp"
#include "actionpipe/flow.hpp"
#include "actionpipe/grid_search.hpp"
#include "actionpipe/manifest.hpp"
#include "actionpipe/temporal.hpp"

namespace actionpipe {

enum class ExtractorKind : uint8_t { Mock, File };

struct PipelineConfig {
  size_t s1 = 128;      // shorter side after resizing
  size_t frames = 40;   // temporal length T
  double alpha = 0.5;   // power-norm exponent
  size_t pca_dim = 1500;  // 0 disables PCA
  std::vector<double> c_grid = default_c_grid();
  size_t folds = 5;
  bool flow_scaling = true;
  FlowScaleMode flow_scale_mode = FlowScaleMode::Piecewise;
  CropFillMode crop_fill = CropFillMode::Figure;
  std::string flow_algorithm = "horn-schunck";
  HornSchunckParams flow_params;
  ExtractorKind extractor = ExtractorKind::Mock;
  size_t feature_dim = 16;
  std::filesystem::path feature_file;  // input vectors for the file extractor
  uint64_t seed = 0;
  size_t threads = 0;  // 0: ACTIONPIPE_THREADS, then 1
  bool group_check = true;
  std::filesystem::path manifest;
  std::filesystem::path labels;
  std::filesystem::path out = "actionpipe_out";

  void validate() const {
    detail::require(s1 >= 16, "s1 must be >= 16");
    detail::require(frames >= 2, "t must be >= 2");
    detail::require(alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0, 1]");
    detail::require(!c_grid.empty(), "c-grid must not be empty");
    for (double c : c_grid) detail::require(c > 0, "c-grid values must be positive");
    detail::require(folds >= 2, "folds must be >= 2");
    detail::require(flow_algorithm == "horn-schunck", "unknown flow algorithm '" + flow_algorithm + "'");
    detail::require(feature_dim >= 1, "feature-dim must be >= 1");
    detail::require(extractor != ExtractorKind::File || !feature_file.empty(),
                    "the file extractor needs --feature-file");
  }

  size_t resolved_threads() const {
    if (threads > 0) return threads;
    if (const char* env = std::getenv("ACTIONPIPE_THREADS")) {
      try {
        const long n = std::stol(env);
        if (n > 0) return static_cast<size_t>(n);
      } catch (const std::exception&) {
      }
    }
    return 1;
  }
};

namespace config_detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "0" || v == "no") return false;
  throw InvalidArgument("bad boolean for " + key + ": '" + v + "'");
}

template <typename T>
T parse_number(const std::string& key, const std::string& v) {
  if constexpr (std::is_unsigned_v<T>) {
    if (v.find('-') != std::string::npos) throw InvalidArgument("bad number for " + key + ": '" + v + "'");
  }
  std::istringstream in(v);
  T out{};
  in >> out;
  if (!in || !in.eof()) throw InvalidArgument("bad number for " + key + ": '" + v + "'");
  return out;
}

}  // namespace config_detail

inline std::vector<double> parse_c_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = config_detail::trim(item);
    if (!item.empty()) grid.push_back(config_detail::parse_number<double>("c-grid", item));
  }
  detail::require(!grid.empty(), "c-grid must list at least one value");
  return grid;
}

inline CropFillMode parse_crop_fill(const std::string& v) {
  if (v == "figure") return CropFillMode::Figure;
  if (v == "repeat-last") return CropFillMode::RepeatLast;
  throw InvalidArgument("crop-fill must be 'figure' or 'repeat-last', got '" + v + "'");
}

inline FlowScaleMode parse_flow_scale_mode(const std::string& v) {
  if (v == "piecewise") return FlowScaleMode::Piecewise;
  if (v == "ratio") return FlowScaleMode::Ratio;
  throw InvalidArgument("flow-scale-mode must be 'piecewise' or 'ratio', got '" + v + "'");
}

inline ExtractorKind parse_extractor(const std::string& v) {
  if (v == "mock") return ExtractorKind::Mock;
  if (v == "file") return ExtractorKind::File;
  throw InvalidArgument("extractor must be 'mock' or 'file', got '" + v + "'");
}

// Applies one `key = value` setting; keys match the long CLI flag names.
inline void apply_setting(PipelineConfig& cfg, const std::string& key, const std::string& value) {
  using config_detail::parse_bool;
  using config_detail::parse_number;
  if (key == "s1") cfg.s1 = parse_number<size_t>(key, value);
  else if (key == "t") cfg.frames = parse_number<size_t>(key, value);
  else if (key == "alpha") cfg.alpha = parse_number<double>(key, value);
  else if (key == "pca-dim") cfg.pca_dim = parse_number<size_t>(key, value);
  else if (key == "c-grid") cfg.c_grid = parse_c_grid(value);
  else if (key == "folds") cfg.folds = parse_number<size_t>(key, value);
  else if (key == "flow-scaling") cfg.flow_scaling = parse_bool(key, value);
  else if (key == "flow-scale-mode") cfg.flow_scale_mode = parse_flow_scale_mode(value);
  else if (key == "crop-fill") cfg.crop_fill = parse_crop_fill(value);
  else if (key == "flow-algorithm") cfg.flow_algorithm = value;
  else if (key == "flow-levels") cfg.flow_params.levels = parse_number<int>(key, value);
  else if (key == "flow-iterations") cfg.flow_params.iterations = parse_number<int>(key, value);
  else if (key == "flow-smoothness") cfg.flow_params.smoothness = parse_number<double>(key, value);
  else if (key == "extractor") cfg.extractor = parse_extractor(value);
  else if (key == "feature-dim") cfg.feature_dim = parse_number<size_t>(key, value);
  else if (key == "feature-file") cfg.feature_file = value;
  else if (key == "seed") cfg.seed = parse_number<uint64_t>(key, value);
  else if (key == "threads") cfg.threads = parse_number<size_t>(key, value);
  else if (key == "group-check") cfg.group_check = parse_bool(key, value);
  else if (key == "manifest") cfg.manifest = value;
  else if (key == "labels") cfg.labels = value;
  else if (key == "out") cfg.out = value;
  else throw InvalidArgument("unknown config key '" + key + "'");
}

// UTF-8 `key = value` lines; '#' starts a comment line.
inline void load_config_file(PipelineConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path.string());
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = config_detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": expected 'key = value'");
    apply_setting(cfg, config_detail::trim(t.substr(0, eq)), config_detail::trim(t.substr(eq + 1)));
  }
}

}  // namespace actionpipe

#endif  // ACTIONPIPE_CONFIG_HPP_
