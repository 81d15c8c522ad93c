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

// Video tensors and the per-pixel conversions that act on them.

#ifndef ACTIONPIPE_VIDEO_HPP_
#define ACTIONPIPE_VIDEO_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "actionpipe/error.hpp"

namespace actionpipe {

// Dense frame-major, row-major, channel-interleaved tensor of shape
// frames x rows x cols x channels.
template <typename T>
class Video {
 public:
  using value_type = T;

  Video() = default;
  Video(size_t frames, size_t rows, size_t cols, size_t channels, T fill = T{})
      : frames_(frames), rows_(rows), cols_(cols), channels_(channels),
        data_(frames * rows * cols * channels, fill) {}
  Video(size_t frames, size_t rows, size_t cols, size_t channels, std::vector<T> data)
      : frames_(frames), rows_(rows), cols_(cols), channels_(channels), data_(std::move(data)) {
    detail::require(data_.size() == frames * rows * cols * channels,
                    "video data length does not match its extents");
  }

  size_t frames() const { return frames_; }
  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  size_t channels() const { return channels_; }
  size_t frame_size() const { return rows_ * cols_ * channels_; }
  bool empty() const { return data_.empty(); }

  T& at(size_t t, size_t r, size_t c, size_t ch) { return data_[index(t, r, c, ch)]; }
  const T& at(size_t t, size_t r, size_t c, size_t ch) const { return data_[index(t, r, c, ch)]; }

  std::span<T> frame(size_t t) { return {data_.data() + t * frame_size(), frame_size()}; }
  std::span<const T> frame(size_t t) const { return {data_.data() + t * frame_size(), frame_size()}; }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  bool same_shape(const Video& other) const {
    return frames_ == other.frames_ && rows_ == other.rows_ && cols_ == other.cols_ &&
           channels_ == other.channels_;
  }
  friend bool operator==(const Video& a, const Video& b) { return a.same_shape(b) && a.data_ == b.data_; }

 private:
  size_t index(size_t t, size_t r, size_t c, size_t ch) const {
    return ((t * rows_ + r) * cols_ + c) * channels_ + ch;
  }

  size_t frames_ = 0;
  size_t rows_ = 0;
  size_t cols_ = 0;
  size_t channels_ = 0;
  std::vector<T> data_;
};

// Single 8-bit intensity frame.
struct GrayFrame {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<uint8_t> data;

  GrayFrame() = default;
  GrayFrame(size_t r, size_t c, uint8_t fill = 0) : rows(r), cols(c), data(r * c, fill) {}
  GrayFrame(size_t r, size_t c, std::vector<uint8_t> d) : rows(r), cols(c), data(std::move(d)) {
    detail::require(rows >= 1 && cols >= 1, "gray frame must be at least 1x1");
    detail::require(data.size() == rows * cols, "gray frame data length does not match extents");
  }

  uint8_t operator()(size_t r, size_t c) const { return data[r * cols + c]; }
  uint8_t& operator()(size_t r, size_t c) { return data[r * cols + c]; }
  friend bool operator==(const GrayFrame&, const GrayFrame&) = default;
};

using GrayVideo = Video<uint8_t>;

// Raw8 samples are integral values in [0,255]; Unit samples lie in [0,1].
enum class ValueDomain : uint8_t { Raw8, Unit };

// Three-channel video tagged with the value domain of its samples.
struct RgbVideo {
  Video<float> pixels;
  ValueDomain domain = ValueDomain::Raw8;

  size_t frames() const { return pixels.frames(); }
  size_t rows() const { return pixels.rows(); }
  size_t cols() const { return pixels.cols(); }
  friend bool operator==(const RgbVideo&, const RgbVideo&) = default;
};

inline RgbVideo make_rgb_video(Video<uint8_t> raw) {
  detail::require(raw.channels() == 3, "RGB video needs 3 channels");
  detail::require(raw.frames() >= 1, "RGB video needs at least one frame");
  std::vector<float> values(raw.data().begin(), raw.data().end());
  return {Video<float>(raw.frames(), raw.rows(), raw.cols(), 3, std::move(values)), ValueDomain::Raw8};
}

// Rec. 601 luma, rounded to nearest and clamped to [0,255].
inline uint8_t luma(float r, float g, float b) {
  const double y = 0.299 * r + 0.587 * g + 0.114 * b;
  return static_cast<uint8_t>(std::clamp(std::lround(y), 0L, 255L));
}

// Converts frame t of a Raw8 RGB video to grayscale.
inline GrayFrame to_grayscale(const RgbVideo& video, size_t t) {
  detail::require(video.domain == ValueDomain::Raw8, "to_grayscale expects Raw8 samples");
  detail::require(t < video.frames(), "frame index out of range");
  GrayFrame out(video.rows(), video.cols());
  const auto px = video.pixels.frame(t);
  for (size_t i = 0; i < out.data.size(); ++i) out.data[i] = luma(px[3 * i], px[3 * i + 1], px[3 * i + 2]);
  return out;
}

inline GrayVideo to_grayscale(const RgbVideo& video) {
  GrayVideo out(video.frames(), video.rows(), video.cols(), 1);
  for (size_t t = 0; t < video.frames(); ++t) {
    const GrayFrame g = to_grayscale(video, t);
    std::copy(g.data.begin(), g.data.end(), out.frame(t).begin());
  }
  return out;
}

inline GrayFrame gray_frame(const GrayVideo& video, size_t t) {
  detail::require(video.channels() == 1, "gray video must have one channel");
  const auto f = video.frame(t);
  return GrayFrame(video.rows(), video.cols(), std::vector<uint8_t>(f.begin(), f.end()));
}

// Divides every sample by 255. Rejects input that is already normalized.
inline RgbVideo normalize_pixels(const RgbVideo& video) {
  detail::require(video.domain == ValueDomain::Raw8, "video is already normalized to the unit interval");
  RgbVideo out{video.pixels, ValueDomain::Unit};
  for (float& x : out.pixels.data()) x = static_cast<float>(static_cast<double>(x) / 255.0);
  return out;
}

// Inverse of normalize_pixels: x*255 rounded back to 8-bit.
inline Video<uint8_t> denormalize_pixels(const RgbVideo& video) {
  detail::require(video.domain == ValueDomain::Unit, "denormalize expects Unit samples");
  const auto& p = video.pixels;
  Video<uint8_t> out(p.frames(), p.rows(), p.cols(), p.channels());
  for (size_t i = 0; i < p.data().size(); ++i) {
    out.data()[i] = static_cast<uint8_t>(std::clamp(std::lround(p.data()[i] * 255.0), 0L, 255L));
  }
  return out;
}

}  // namespace actionpipe

#endif  // ACTIONPIPE_VIDEO_HPP_
