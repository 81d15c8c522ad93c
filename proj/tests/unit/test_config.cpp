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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "actionpipe/config.hpp"

namespace ap = actionpipe;
namespace fs = std::filesystem;

TEST(Config, Defaults) {
  const ap::PipelineConfig cfg;
  EXPECT_EQ(cfg.s1, 128u);
  EXPECT_EQ(cfg.frames, 40u);
  EXPECT_EQ(cfg.alpha, 0.5);
  EXPECT_EQ(cfg.c_grid, ap::default_c_grid());
  EXPECT_TRUE(cfg.flow_scaling);
  EXPECT_EQ(cfg.crop_fill, ap::CropFillMode::Figure);
  EXPECT_NO_THROW(cfg.validate());
}

TEST(Config, FileAndSettings) {
  const auto path = fs::temp_directory_path() / "actionpipe_unit_config.txt";
  std::ofstream(path) << "# comment\n"
                         "s1 = 176\n"
                         "  t=30  \n"
                         "\n"
                         "c-grid = 0.1, 1,10\n"
                         "flow-scaling = off\n"
                         "crop-fill = repeat-last\n"
                         "flow-scale-mode = ratio\n";
  ap::PipelineConfig cfg;
  ap::load_config_file(cfg, path);
  EXPECT_EQ(cfg.s1, 176u);
  EXPECT_EQ(cfg.frames, 30u);
  EXPECT_EQ(cfg.c_grid, (std::vector<double>{0.1, 1, 10}));
  EXPECT_FALSE(cfg.flow_scaling);
  EXPECT_EQ(cfg.crop_fill, ap::CropFillMode::RepeatLast);
  EXPECT_EQ(cfg.flow_scale_mode, ap::FlowScaleMode::Ratio);

  std::ofstream(path) << "s1 128\n";
  EXPECT_THROW(ap::load_config_file(cfg, path), ap::FormatError);
  std::ofstream(path) << "colour = red\n";
  EXPECT_THROW(ap::load_config_file(cfg, path), ap::InvalidArgument);
  EXPECT_THROW(ap::load_config_file(cfg, "/nonexistent/cfg"), ap::IoError);
}

TEST(Config, BadValues) {
  ap::PipelineConfig cfg;
  EXPECT_THROW(ap::apply_setting(cfg, "s1", "abc"), ap::InvalidArgument);
  EXPECT_THROW(ap::apply_setting(cfg, "s1", "12x"), ap::InvalidArgument);
  EXPECT_THROW(ap::apply_setting(cfg, "crop-fill", "sideways"), ap::InvalidArgument);
  EXPECT_THROW(ap::apply_setting(cfg, "c-grid", "1,abc"), ap::InvalidArgument);
  EXPECT_THROW(ap::apply_setting(cfg, "t", "-5"), ap::InvalidArgument);
  EXPECT_THROW(ap::apply_setting(cfg, "extractor", "i3d"), ap::InvalidArgument);
}

TEST(Config, Validation) {
  ap::PipelineConfig cfg;
  cfg.s1 = 8;
  EXPECT_THROW(cfg.validate(), ap::InvalidArgument);
  cfg = {};
  cfg.frames = 1;
  EXPECT_THROW(cfg.validate(), ap::InvalidArgument);
  cfg = {};
  cfg.alpha = 0;
  EXPECT_THROW(cfg.validate(), ap::InvalidArgument);
  cfg = {};
  cfg.extractor = ap::ExtractorKind::File;
  EXPECT_THROW(cfg.validate(), ap::InvalidArgument);
  cfg = {};
  cfg.flow_algorithm = "farneback";
  EXPECT_THROW(cfg.validate(), ap::InvalidArgument);
}

TEST(Config, ThreadFallback) {
  ap::PipelineConfig cfg;
  ::setenv("ACTIONPIPE_THREADS", "3", 1);
  EXPECT_EQ(cfg.resolved_threads(), 3u);
  cfg.threads = 2;
  EXPECT_EQ(cfg.resolved_threads(), 2u);
  ::unsetenv("ACTIONPIPE_THREADS");
  cfg.threads = 0;
  EXPECT_EQ(cfg.resolved_threads(), 1u);
}
