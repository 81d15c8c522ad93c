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

// Per-crop descriptors and the encoding chain that turns ten of them into one
// video representation.

#ifndef ACTIONPIPE_FEATURES_HPP_
#define ACTIONPIPE_FEATURES_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "actionpipe/error.hpp"
#include "actionpipe/geometry.hpp"

namespace actionpipe {

enum class Stream : uint8_t { Rgb = 0, Flow = 1 };

inline const char* stream_name(Stream s) { return s == Stream::Rgb ? "rgb" : "flow"; }

struct FeatureVector {
  std::vector<float> values;

  size_t dim() const { return values.size(); }
  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

inline constexpr size_t kCropsPerStream = 5;
inline constexpr size_t kCropsPerVideo = 2 * kCropsPerStream;

// Slot of a (stream, crop) pair inside the concatenated vector:
// RGB tl,tr,bl,br,center then flow tl,tr,bl,br,center.
inline size_t crop_slot(Stream s, CropPosition p) {
  return static_cast<size_t>(s) * kCropsPerStream + static_cast<size_t>(p);
}

enum class EncodingStage : uint8_t { Concatenated = 0, Normalized = 1, Reduced = 2 };

struct EncodedSample {
  std::string video_id;
  int label = -1;
  std::vector<double> vector;
  EncodingStage stage = EncodingStage::Concatenated;

  friend bool operator==(const EncodedSample&, const EncodedSample&) = default;
};

// Ten crop descriptors of one stream pair, in crop order.
struct CropFeatures {
  std::array<FeatureVector, kCropsPerStream> rgb;
  std::array<FeatureVector, kCropsPerStream> flow;
};

inline EncodedSample concatenate(const CropFeatures& crops, std::string video_id = {}, int label = -1) {
  const size_t d = crops.rgb[0].dim();
  detail::require(d >= 1, "feature vectors must be non-empty");
  EncodedSample out{std::move(video_id), label, {}, EncodingStage::Concatenated};
  out.vector.reserve(kCropsPerVideo * d);
  for (const auto* block : {&crops.rgb, &crops.flow}) {
    for (const FeatureVector& f : *block) {
      detail::require(f.dim() == d, "all ten crop vectors must share one dimension");
      for (float x : f.values) {
        detail::require(std::isfinite(x), "feature vector has a non-finite component");
        out.vector.push_back(x);
      }
    }
  }
  return out;
}

// Inverse of concatenate on the raw layout: block i holds slot i.
inline std::array<std::vector<double>, kCropsPerVideo> split_blocks(const EncodedSample& sample) {
  detail::require(sample.stage == EncodingStage::Concatenated, "only concatenated samples can be split");
  detail::require(sample.vector.size() % kCropsPerVideo == 0, "length is not a multiple of ten");
  const size_t d = sample.vector.size() / kCropsPerVideo;
  std::array<std::vector<double>, kCropsPerVideo> blocks;
  for (size_t i = 0; i < kCropsPerVideo; ++i)
    blocks[i].assign(sample.vector.begin() + static_cast<long>(i * d), sample.vector.begin() + static_cast<long>((i + 1) * d));
  return blocks;
}

inline double signed_power(double x, double alpha) {
  if (x == 0.0) return 0.0;
  return std::copysign(std::pow(std::fabs(x), alpha), x);
}

// sign(x)|x|^alpha per component.
inline EncodedSample power_normalize(const EncodedSample& sample, double alpha) {
  detail::require(alpha > 0.0 && alpha <= 1.0, "power-norm exponent must lie in (0, 1]");
  detail::require(sample.stage == EncodingStage::Concatenated, "power normalization applies to concatenated samples");
  EncodedSample out = sample;
  out.stage = EncodingStage::Normalized;
  for (double& x : out.vector) {
    detail::require(std::isfinite(x), "cannot power-normalize a non-finite component");
    if (alpha != 1.0) x = signed_power(x, alpha);
  }
  return out;
}

}  // namespace actionpipe

#endif  // ACTIONPIPE_FEATURES_HPP_
