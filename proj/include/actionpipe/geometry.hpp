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

// Spatial geometry: shorter-side bilinear resizing and the five-crop rule.

#ifndef ACTIONPIPE_GEOMETRY_HPP_
#define ACTIONPIPE_GEOMETRY_HPP_

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "actionpipe/error.hpp"
#include "actionpipe/video.hpp"

namespace actionpipe {

struct Extent {
  size_t rows = 0;
  size_t cols = 0;
  friend bool operator==(const Extent&, const Extent&) = default;
};

// Output extent when the shorter side is scaled to `shorter`. The long side is
// rounded half-up.
inline Extent shorter_side_extent(size_t rows, size_t cols, size_t shorter) {
  detail::require(shorter >= 2, "target shorter side must be >= 2");
  detail::require(rows >= 2 && cols >= 2, "cannot resize a degenerate frame (rows or cols < 2)");
  const size_t short_in = std::min(rows, cols);
  auto scale_long = [&](size_t extent) { return (2 * extent * shorter + short_in) / (2 * short_in); };
  if (rows <= cols) return {shorter, scale_long(cols)};
  return {scale_long(rows), shorter};
}

// Bilinear resampling of every frame and channel with corner-aligned sample
// mapping: output pixel i maps to input coordinate i*(in-1)/(out-1).
template <typename T>
Video<T> resize_bilinear(const Video<T>& video, Extent out) {
  detail::require(video.rows() >= 2 && video.cols() >= 2, "cannot resize a degenerate frame (rows or cols < 2)");
  detail::require(out.rows >= 1 && out.cols >= 1, "resize target must be non-empty");
  if (out.rows == video.rows() && out.cols == video.cols()) return video;

  struct Tap {
    size_t lo, hi;
    double w;
  };
  auto taps = [](size_t in, size_t n) {
    std::vector<Tap> result(n);
    const double step = n > 1 ? static_cast<double>(in - 1) / static_cast<double>(n - 1) : 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double x = static_cast<double>(i) * step;
      size_t lo = static_cast<size_t>(std::floor(x));
      if (lo >= in - 1) lo = in - 2;
      result[i] = {lo, lo + 1, x - static_cast<double>(lo)};
    }
    return result;
  };
  const auto row_taps = taps(video.rows(), out.rows);
  const auto col_taps = taps(video.cols(), out.cols);

  const size_t ch = video.channels();
  Video<T> result(video.frames(), out.rows, out.cols, ch);
  for (size_t t = 0; t < video.frames(); ++t) {
    for (size_t r = 0; r < out.rows; ++r) {
      const Tap& ry = row_taps[r];
      for (size_t c = 0; c < out.cols; ++c) {
        const Tap& cx = col_taps[c];
        for (size_t k = 0; k < ch; ++k) {
          const double top = (1.0 - cx.w) * video.at(t, ry.lo, cx.lo, k) + cx.w * video.at(t, ry.lo, cx.hi, k);
          const double bottom = (1.0 - cx.w) * video.at(t, ry.hi, cx.lo, k) + cx.w * video.at(t, ry.hi, cx.hi, k);
          result.at(t, r, c, k) = static_cast<T>((1.0 - ry.w) * top + ry.w * bottom);
        }
      }
    }
  }
  return result;
}

template <typename T>
Video<T> resize_shorter_side(const Video<T>& video, size_t shorter) {
  return resize_bilinear(video, shorter_side_extent(video.rows(), video.cols(), shorter));
}

inline RgbVideo resize_shorter_side(const RgbVideo& video, size_t shorter) {
  return {resize_shorter_side(video.pixels, shorter), video.domain};
}

enum class CropPosition : uint8_t { TopLeft = 0, TopRight = 1, BottomLeft = 2, BottomRight = 3, Center = 4 };

inline constexpr std::array<CropPosition, 5> kCropOrder = {CropPosition::TopLeft, CropPosition::TopRight,
                                                           CropPosition::BottomLeft, CropPosition::BottomRight,
                                                           CropPosition::Center};

inline const char* crop_name(CropPosition p) {
  switch (p) {
    case CropPosition::TopLeft: return "tl";
    case CropPosition::TopRight: return "tr";
    case CropPosition::BottomLeft: return "bl";
    case CropPosition::BottomRight: return "br";
    case CropPosition::Center: return "center";
  }
  return "?";
}

struct CropOffset {
  size_t row = 0;
  size_t col = 0;
  friend bool operator==(const CropOffset&, const CropOffset&) = default;
};

// Square crop side and the five top-left anchors, indexed by CropPosition.
struct CropGeometry {
  size_t side = 0;
  std::array<CropOffset, 5> offsets{};
  Extent frame;

  const CropOffset& at(CropPosition p) const { return offsets[static_cast<size_t>(p)]; }
};

inline size_t crop_side(size_t shorter) { return (7 * shorter) / 8; }

inline CropGeometry five_crop_geometry(size_t rows, size_t cols, size_t shorter) {
  const size_t side = crop_side(shorter);
  detail::require(side >= 1, "crop side must be >= 1");
  detail::require(rows >= side && cols >= side,
                  "frame " + std::to_string(rows) + "x" + std::to_string(cols) + " is smaller than crop side " +
                      std::to_string(side));
  const size_t dr = rows - side;
  const size_t dc = cols - side;
  CropGeometry g;
  g.side = side;
  g.frame = {rows, cols};
  g.offsets = {CropOffset{0, 0}, CropOffset{0, dc}, CropOffset{dr, 0}, CropOffset{dr, dc}, CropOffset{dr / 2, dc / 2}};
  return g;
}

template <typename T>
Video<T> crop(const Video<T>& video, CropOffset at, size_t side) {
  detail::require(at.row + side <= video.rows() && at.col + side <= video.cols(), "crop exceeds frame extent");
  const size_t ch = video.channels();
  Video<T> out(video.frames(), side, side, ch);
  for (size_t t = 0; t < video.frames(); ++t) {
    for (size_t r = 0; r < side; ++r) {
      const T* src = &video.at(t, at.row + r, at.col, 0);
      std::copy(src, src + side * ch, &out.at(t, r, 0, 0));
    }
  }
  return out;
}

template <typename T>
std::array<Video<T>, 5> apply_crops(const Video<T>& video, const CropGeometry& geometry) {
  detail::require(geometry.frame == Extent{video.rows(), video.cols()},
                  "crop geometry was computed for a different frame extent");
  std::array<Video<T>, 5> out;
  for (size_t i = 0; i < 5; ++i) out[i] = crop(video, geometry.offsets[i], geometry.side);
  return out;
}

inline std::array<RgbVideo, 5> apply_crops(const RgbVideo& video, const CropGeometry& geometry) {
  auto crops = apply_crops(video.pixels, geometry);
  std::array<RgbVideo, 5> out;
  for (size_t i = 0; i < 5; ++i) out[i] = {std::move(crops[i]), video.domain};
  return out;
}

}  // namespace actionpipe

#endif  // ACTIONPIPE_GEOMETRY_HPP_
