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

// Desk-scale stand-in for an action dataset: clips of a textured background
// with one moving square whose motion pattern is the class.

#ifndef ACTIONPIPE_SYNTHETIC_HPP_
#define ACTIONPIPE_SYNTHETIC_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "actionpipe/error.hpp"
#include "actionpipe/manifest.hpp"
#include "actionpipe/rng.hpp"
#include "actionpipe/video.hpp"
#include "actionpipe/video_io.hpp"

namespace actionpipe {

struct MotionClass {
  std::string name;
  double dx = 0;  // pixels per frame
  double dy = 0;
  bool blinking = false;
  double intensity = 180;  // nominal square brightness
};

// Class c of an n-class corpus. The first six are the canonical set; later
// classes walk around the compass at alternating speeds.
inline MotionClass motion_class(size_t c) {
  static const MotionClass base[] = {
      {"right-slow", 1, 0, false, 150},     {"right-fast", 3, 0, false, 170}, {"down-slow", 0, 1, false, 190},
      {"down-fast", 0, 3, false, 210},      {"static-blinking", 0, 0, true, 230}, {"diagonal", 2, 2, false, 250},
      {"left-slow", -1, 0, false, 160},     {"up-slow", 0, -1, false, 200},   {"left-fast", -3, 0, false, 180},
      {"up-fast", 0, -3, false, 220},       {"anti-diagonal", -2, 2, false, 240},
  };
  constexpr size_t kBase = sizeof(base) / sizeof(base[0]);
  if (c < kBase) return base[c];
  const double angle = static_cast<double>(c) * 2.399963229728653;  // golden angle
  const double speed = 1.0 + static_cast<double>(c % 3);
  return {"motion-" + std::to_string(c), speed * std::cos(angle), speed * std::sin(angle), false,
          140.0 + static_cast<double>((c * 37) % 110)};
}

struct SyntheticSpec {
  size_t n_classes = 6;
  size_t clips_per_class = 20;
  size_t frames = 16;
  size_t frame_jitter = 0;  // clip length drawn uniformly from frames +- jitter
  size_t rows = 72;
  size_t cols = 96;
  size_t n_groups = 10;
  PersonSplitCounts split{5, 0, 5};
  uint64_t seed = 0;
};

struct SyntheticCorpus {
  std::vector<Video<uint8_t>> videos;  // parallel to manifest.records
  SplitManifest manifest;
  LabelMap labels;
};

inline Video<uint8_t> render_clip(const MotionClass& motion, size_t frames, size_t rows, size_t cols, uint64_t seed) {
  rng::SplitMix gen(seed);
  const size_t side = std::max<size_t>(3, std::min(rows, cols) / 6 + gen.below(std::min(rows, cols) / 12 + 1));
  const double x0 = gen.uniform(0, static_cast<double>(cols));
  const double y0 = gen.uniform(0, static_cast<double>(rows));
  const double level = std::clamp(motion.intensity + gen.uniform(-25, 25), 0.0, 255.0);
  const double tint[3] = {gen.uniform(0.8, 1.0), gen.uniform(0.8, 1.0), gen.uniform(0.8, 1.0)};
  const double speed_jitter = gen.uniform(0.85, 1.15);
  const int blink_phase = static_cast<int>(gen.below(4));

  std::vector<double> background(rows * cols);
  for (double& b : background) b = gen.uniform(20, 70);

  Video<uint8_t> video(frames, rows, cols, 3);
  for (size_t t = 0; t < frames; ++t) {
    const double cx = x0 + motion.dx * speed_jitter * static_cast<double>(t);
    const double cy = y0 + motion.dy * speed_jitter * static_cast<double>(t);
    const bool visible = !motion.blinking || ((static_cast<int>(t) + blink_phase) / 2) % 2 == 0;
    const long left = static_cast<long>(std::floor(cx)), top = static_cast<long>(std::floor(cy));
    for (size_t r = 0; r < rows; ++r) {
      for (size_t c = 0; c < cols; ++c) {
        // Toroidal wrap keeps the square in frame for any speed and length.
        const long dr = ((static_cast<long>(r) - top) % static_cast<long>(rows) + static_cast<long>(rows)) %
                        static_cast<long>(rows);
        const long dc = ((static_cast<long>(c) - left) % static_cast<long>(cols) + static_cast<long>(cols)) %
                        static_cast<long>(cols);
        const bool inside = visible && dr < static_cast<long>(side) && dc < static_cast<long>(side);
        const double noise = gen.uniform(-4, 4);
        for (size_t k = 0; k < 3; ++k) {
          const double value = inside ? level * tint[k] + noise : background[r * cols + c] + noise;
          video.at(t, r, c, k) = static_cast<uint8_t>(std::clamp(std::lround(value), 0L, 255L));
        }
      }
    }
  }
  return video;
}

inline SyntheticCorpus generate_synthetic_dataset(const SyntheticSpec& spec) {
  detail::require(spec.n_classes >= 2, "synthetic corpus needs at least two classes");
  detail::require(spec.clips_per_class >= 1, "need at least one clip per class");
  detail::require(spec.rows >= 8 && spec.cols >= 8, "synthetic frames must be at least 8x8");
  detail::require(spec.frames >= 2 && spec.frames > spec.frame_jitter + 1, "clip length must stay >= 2 frames");
  detail::require(spec.n_groups >= 1, "need at least one group");

  SyntheticCorpus corpus;
  SplitManifest all;
  for (size_t c = 0; c < spec.n_classes; ++c) corpus.labels.names.push_back(motion_class(c).name);
  std::vector<Video<uint8_t>> videos;
  for (size_t c = 0; c < spec.n_classes; ++c) {
    const MotionClass motion = motion_class(c);
    for (size_t j = 0; j < spec.clips_per_class; ++j) {
      const uint64_t clip_seed = rng::counter_hash(spec.seed, c, j);
      rng::SplitMix len_gen(clip_seed ^ 0x1e4f);
      const size_t frames = spec.frames - spec.frame_jitter + len_gen.below(2 * spec.frame_jitter + 1);
      videos.push_back(render_clip(motion, frames, spec.rows, spec.cols, clip_seed));
      char id[64];
      std::snprintf(id, sizeof(id), "%s_%03zu", motion.name.c_str(), j);
      char group[32];
      std::snprintf(group, sizeof(group), "p%02zu", j % spec.n_groups);
      all.records.push_back({id, std::string("videos/") + id + ".argv", motion.name, Split::Train, group});
    }
  }
  const size_t wanted = spec.split.train + spec.split.val + spec.split.test;
  if (wanted == 0) {
    corpus.manifest = std::move(all);
    corpus.videos = std::move(videos);
    return corpus;
  }
  corpus.manifest = person_split(all, spec.split, spec.seed);
  // Keep videos aligned with the (possibly filtered) manifest.
  size_t next = 0;
  for (size_t i = 0; i < all.records.size() && next < corpus.manifest.records.size(); ++i)
    if (all.records[i].video_id == corpus.manifest.records[next].video_id) {
      corpus.videos.push_back(std::move(videos[i]));
      ++next;
    }
  return corpus;
}

// Writes videos/<id>.argv, manifest.tsv and labels.tsv under `dir`.
inline void write_synthetic_dataset(const SyntheticCorpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "videos");
  for (size_t i = 0; i < corpus.videos.size(); ++i) write_argv(corpus.videos[i], dir / corpus.manifest.records[i].path);
  corpus.manifest.write(dir / "manifest.tsv");
  corpus.labels.write(dir / "labels.tsv");
}

}  // namespace actionpipe

#endif  // ACTIONPIPE_SYNTHETIC_HPP_
