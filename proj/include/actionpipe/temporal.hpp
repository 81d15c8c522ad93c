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

#ifndef ACTIONPIPE_TEMPORAL_HPP_
#define ACTIONPIPE_TEMPORAL_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "actionpipe/error.hpp"
#include "actionpipe/video.hpp"

namespace actionpipe {

// How a clip shorter than the target length is lengthened.
enum class CropFillMode : uint8_t {
  Figure,      // in-order duplication, earlier frames get the extra copies
  RepeatLast,  // append copies of the last frame
};

// Maps each of the target_len output frames to a source frame index.
struct SamplingPlan {
  size_t source_len = 0;
  size_t target_len = 0;
  std::vector<size_t> indices;
  friend bool operator==(const SamplingPlan&, const SamplingPlan&) = default;
};

// indices[j] = floor(j * source_len / target_len). Covers all three cases:
// duplication when source_len < target_len, equal spacing when longer, and
// identity when equal.
inline SamplingPlan sample_indices(size_t source_len, size_t target_len) {
  detail::require(source_len >= 1, "sample_indices: source length must be >= 1");
  detail::require(target_len >= 1, "sample_indices: target length must be >= 1");
  SamplingPlan plan{source_len, target_len, std::vector<size_t>(target_len)};
  for (size_t j = 0; j < target_len; ++j) {
    plan.indices[j] = static_cast<size_t>((static_cast<uint64_t>(j) * source_len) / target_len);
  }
  return plan;
}

// Same as sample_indices except that short clips are padded with the last frame.
inline SamplingPlan sample_indices(size_t source_len, size_t target_len, CropFillMode mode) {
  if (mode == CropFillMode::Figure || source_len >= target_len) return sample_indices(source_len, target_len);
  detail::require(source_len >= 1 && target_len >= 1, "sample_indices: lengths must be >= 1");
  SamplingPlan plan{source_len, target_len, std::vector<size_t>(target_len)};
  for (size_t j = 0; j < target_len; ++j) plan.indices[j] = std::min(j, source_len - 1);
  return plan;
}

template <typename T>
Video<T> apply_plan(const Video<T>& video, const SamplingPlan& plan) {
  detail::require(plan.source_len == video.frames(),
                  "sampling plan built for " + std::to_string(plan.source_len) + " frames applied to a video of " +
                      std::to_string(video.frames()));
  Video<T> out(plan.target_len, video.rows(), video.cols(), video.channels());
  for (size_t j = 0; j < plan.target_len; ++j) {
    const auto src = video.frame(plan.indices[j]);
    std::copy(src.begin(), src.end(), out.frame(j).begin());
  }
  return out;
}

inline RgbVideo apply_plan(const RgbVideo& video, const SamplingPlan& plan) {
  return {apply_plan(video.pixels, plan), video.domain};
}

}  // namespace actionpipe

#endif  // ACTIONPIPE_TEMPORAL_HPP_
