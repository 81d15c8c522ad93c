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

// Dense optical flow between grayscale frames and resolution-aware rescaling
// of flow magnitudes.

#ifndef ACTIONPIPE_FLOW_HPP_
#define ACTIONPIPE_FLOW_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "actionpipe/error.hpp"
#include "actionpipe/geometry.hpp"
#include "actionpipe/video.hpp"

namespace actionpipe {

// Horizontal (u) and vertical (v) displacement planes, row-major.
struct FlowField {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<float> u;
  std::vector<float> v;

  FlowField() = default;
  FlowField(size_t r, size_t c) : rows(r), cols(c), u(r * c, 0.0f), v(r * c, 0.0f) {}

  friend bool operator==(const FlowField&, const FlowField&) = default;
};

struct FlowVideo {
  std::vector<FlowField> fields;

  size_t frames() const { return fields.size(); }
  size_t rows() const { return fields.empty() ? 0 : fields.front().rows; }
  size_t cols() const { return fields.empty() ? 0 : fields.front().cols; }
  friend bool operator==(const FlowVideo&, const FlowVideo&) = default;
};

// Two-channel interleaved view (channel 0 = u, channel 1 = v).
inline Video<float> to_video(const FlowVideo& flow) {
  Video<float> out(flow.frames(), flow.rows(), flow.cols(), 2);
  for (size_t t = 0; t < flow.frames(); ++t) {
    const FlowField& f = flow.fields[t];
    detail::require(f.rows == flow.rows() && f.cols == flow.cols(), "flow fields must share one extent");
    auto dst = out.frame(t);
    for (size_t i = 0; i < f.u.size(); ++i) {
      dst[2 * i] = f.u[i];
      dst[2 * i + 1] = f.v[i];
    }
  }
  return out;
}

inline FlowVideo flow_from_video(const Video<float>& video) {
  detail::require(video.channels() == 2, "flow video must have 2 channels");
  FlowVideo out;
  out.fields.reserve(video.frames());
  for (size_t t = 0; t < video.frames(); ++t) {
    FlowField f(video.rows(), video.cols());
    const auto src = video.frame(t);
    for (size_t i = 0; i < f.u.size(); ++i) {
      f.u[i] = src[2 * i];
      f.v[i] = src[2 * i + 1];
    }
    out.fields.push_back(std::move(f));
  }
  return out;
}

// Pluggable dense estimator: maps a pair of equally sized frames to a field.
class FlowEstimator {
 public:
  virtual ~FlowEstimator() = default;
  virtual FlowField estimate(const GrayFrame& prev, const GrayFrame& next) const = 0;
  virtual std::string id() const = 0;
};

struct HornSchunckParams {
  double smoothness = 15.0;  // in intensity units on the 0..255 scale
  int levels = 3;
  int iterations = 100;  // per level
  int warps = 1;         // re-linearizations per level; iterations are split across them
  double level_scale = 0.5;
};

namespace flow_detail {

struct Plane {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<double> px;

  Plane() = default;
  Plane(size_t r, size_t c, double fill = 0.0) : rows(r), cols(c), px(r * c, fill) {}
  double& operator()(size_t r, size_t c) { return px[r * cols + c]; }
  double operator()(size_t r, size_t c) const { return px[r * cols + c]; }
  // Replicated-border access.
  double clamped(long r, long c) const {
    r = std::clamp(r, 0L, static_cast<long>(rows) - 1);
    c = std::clamp(c, 0L, static_cast<long>(cols) - 1);
    return px[static_cast<size_t>(r) * cols + static_cast<size_t>(c)];
  }
  double bilinear(double y, double x) const {
    y = std::clamp(y, 0.0, static_cast<double>(rows - 1));
    x = std::clamp(x, 0.0, static_cast<double>(cols - 1));
    const long r0 = static_cast<long>(std::floor(y));
    const long c0 = static_cast<long>(std::floor(x));
    const double fy = y - static_cast<double>(r0);
    const double fx = x - static_cast<double>(c0);
    const double top = (1 - fx) * clamped(r0, c0) + fx * clamped(r0, c0 + 1);
    const double bottom = (1 - fx) * clamped(r0 + 1, c0) + fx * clamped(r0 + 1, c0 + 1);
    return (1 - fy) * top + fy * bottom;
  }
};

inline Plane to_plane(const GrayFrame& f) {
  Plane p(f.rows, f.cols);
  for (size_t i = 0; i < f.data.size(); ++i) p.px[i] = f.data[i];
  return p;
}

// Separable [1 4 6 4 1]/16 blur with replicated borders.
inline Plane binomial_blur(const Plane& in) {
  static constexpr double k[5] = {1 / 16.0, 4 / 16.0, 6 / 16.0, 4 / 16.0, 1 / 16.0};
  Plane tmp(in.rows, in.cols), out(in.rows, in.cols);
  for (size_t r = 0; r < in.rows; ++r)
    for (size_t c = 0; c < in.cols; ++c) {
      double s = 0;
      for (int d = -2; d <= 2; ++d) s += k[d + 2] * in.clamped(static_cast<long>(r), static_cast<long>(c) + d);
      tmp(r, c) = s;
    }
  for (size_t r = 0; r < in.rows; ++r)
    for (size_t c = 0; c < in.cols; ++c) {
      double s = 0;
      for (int d = -2; d <= 2; ++d) s += k[d + 2] * tmp.clamped(static_cast<long>(r) + d, static_cast<long>(c));
      out(r, c) = s;
    }
  return out;
}

inline size_t scaled_extent(size_t n, double scale) {
  return std::max<size_t>(1, static_cast<size_t>(std::lround(static_cast<double>(n) * scale)));
}

// Resamples `in` to (rows, cols) with pixel-center alignment.
inline Plane resample(const Plane& in, size_t rows, size_t cols) {
  Plane out(rows, cols);
  const double sy = static_cast<double>(in.rows) / static_cast<double>(rows);
  const double sx = static_cast<double>(in.cols) / static_cast<double>(cols);
  for (size_t r = 0; r < rows; ++r)
    for (size_t c = 0; c < cols; ++c)
      out(r, c) = in.bilinear((static_cast<double>(r) + 0.5) * sy - 0.5, (static_cast<double>(c) + 0.5) * sx - 0.5);
  return out;
}

// Weighted 8-neighbour average used by the Horn-Schunck update.
inline double neighbour_mean(const Plane& p, size_t r, size_t c) {
  const long y = static_cast<long>(r), x = static_cast<long>(c);
  const double edge = p.clamped(y - 1, x) + p.clamped(y + 1, x) + p.clamped(y, x - 1) + p.clamped(y, x + 1);
  const double diag =
      p.clamped(y - 1, x - 1) + p.clamped(y - 1, x + 1) + p.clamped(y + 1, x - 1) + p.clamped(y + 1, x + 1);
  return edge / 6.0 + diag / 12.0;
}

inline void refine_level(const Plane& first, const Plane& second, Plane& u, Plane& v, const HornSchunckParams& hs) {
  const size_t rows = first.rows, cols = first.cols;
  const double alpha2 = hs.smoothness * hs.smoothness;
  const int warps = std::max(1, hs.warps);
  Plane ix(rows, cols), iy(rows, cols), it(rows, cols), warped(rows, cols);
  Plane u_next(rows, cols), v_next(rows, cols);

  for (int w = 0; w < warps; ++w) {
    const Plane u0 = u, v0 = v;
    for (size_t r = 0; r < rows; ++r)
      for (size_t c = 0; c < cols; ++c)
        warped(r, c) = second.bilinear(static_cast<double>(r) + v0(r, c), static_cast<double>(c) + u0(r, c));
    for (size_t r = 0; r < rows; ++r) {
      const long y = static_cast<long>(r);
      for (size_t c = 0; c < cols; ++c) {
        const long x = static_cast<long>(c);
        ix(r, c) = 0.25 * (first.clamped(y, x + 1) - first.clamped(y, x - 1) + warped.clamped(y, x + 1) -
                           warped.clamped(y, x - 1));
        iy(r, c) = 0.25 * (first.clamped(y + 1, x) - first.clamped(y - 1, x) + warped.clamped(y + 1, x) -
                           warped.clamped(y - 1, x));
        it(r, c) = warped(r, c) - first(r, c);
      }
    }
    const int iterations = hs.iterations / warps + (w < hs.iterations % warps ? 1 : 0);
    for (int n = 0; n < iterations; ++n) {
      for (size_t r = 0; r < rows; ++r)
        for (size_t c = 0; c < cols; ++c) {
          const double ubar = neighbour_mean(u, r, c);
          const double vbar = neighbour_mean(v, r, c);
          const double gx = ix(r, c), gy = iy(r, c);
          const double t = (gx * (ubar - u0(r, c)) + gy * (vbar - v0(r, c)) + it(r, c)) / (alpha2 + gx * gx + gy * gy);
          u_next(r, c) = ubar - gx * t;
          v_next(r, c) = vbar - gy * t;
        }
      std::swap(u.px, u_next.px);
      std::swap(v.px, v_next.px);
    }
  }
}

}  // namespace flow_detail

// Coarse-to-fine Horn-Schunck with bilinear warping of the second frame.
class HornSchunckEstimator final : public FlowEstimator {
 public:
  HornSchunckEstimator() = default;
  explicit HornSchunckEstimator(HornSchunckParams params) : params_(params) {
    detail::require(params_.smoothness > 0, "smoothness must be positive");
    detail::require(params_.levels >= 1 && params_.iterations >= 1, "levels and iterations must be >= 1");
    detail::require(params_.level_scale > 0 && params_.level_scale < 1, "level scale must lie in (0,1)");
  }

  const HornSchunckParams& params() const { return params_; }
  std::string id() const override { return "horn-schunck"; }

  FlowField estimate(const GrayFrame& prev, const GrayFrame& next) const override {
    using flow_detail::Plane;
    std::vector<Plane> first{flow_detail::binomial_blur(flow_detail::to_plane(prev))};
    std::vector<Plane> second{flow_detail::binomial_blur(flow_detail::to_plane(next))};
    for (int l = 1; l < params_.levels; ++l) {
      const size_t r = flow_detail::scaled_extent(first.back().rows, params_.level_scale);
      const size_t c = flow_detail::scaled_extent(first.back().cols, params_.level_scale);
      if (r < 2 || c < 2) break;
      first.push_back(flow_detail::resample(flow_detail::binomial_blur(first.back()), r, c));
      second.push_back(flow_detail::resample(flow_detail::binomial_blur(second.back()), r, c));
    }

    Plane u(first.back().rows, first.back().cols), v(first.back().rows, first.back().cols);
    for (size_t l = first.size(); l-- > 0;) {
      const Plane& a = first[l];
      if (u.rows != a.rows || u.cols != a.cols) {
        const double fy = static_cast<double>(a.rows) / static_cast<double>(u.rows);
        const double fx = static_cast<double>(a.cols) / static_cast<double>(u.cols);
        u = flow_detail::resample(u, a.rows, a.cols);
        v = flow_detail::resample(v, a.rows, a.cols);
        for (double& x : u.px) x *= fx;
        for (double& y : v.px) y *= fy;
      }
      flow_detail::refine_level(a, second[l], u, v, params_);
    }

    FlowField out(prev.rows, prev.cols);
    for (size_t i = 0; i < out.u.size(); ++i) {
      out.u[i] = static_cast<float>(u.px[i]);
      out.v[i] = static_cast<float>(v.px[i]);
    }
    return out;
  }

 private:
  HornSchunckParams params_;
};

inline constexpr size_t kMinFlowExtent = 8;

inline FlowField compute_flow(const GrayFrame& prev, const GrayFrame& next, const FlowEstimator& estimator) {
  detail::require(prev.rows == next.rows && prev.cols == next.cols, "flow frames must have identical extents");
  detail::require(prev.rows >= kMinFlowExtent && prev.cols >= kMinFlowExtent, "flow frames must be at least 8x8");
  return estimator.estimate(prev, next);
}

inline FlowField compute_flow(const GrayFrame& prev, const GrayFrame& next) {
  return compute_flow(prev, next, HornSchunckEstimator{});
}

// Field i is the flow from frame i to frame i+1.
inline FlowVideo compute_flow_video(const GrayVideo& video, const FlowEstimator& estimator) {
  detail::require(video.frames() >= 2, "flow needs at least two frames");
  FlowVideo out;
  out.fields.reserve(video.frames() - 1);
  GrayFrame prev = gray_frame(video, 0);
  for (size_t t = 1; t < video.frames(); ++t) {
    GrayFrame next = gray_frame(video, t);
    out.fields.push_back(compute_flow(prev, next, estimator));
    prev = std::move(next);
  }
  return out;
}

inline FlowVideo compute_flow_video(const GrayVideo& video) {
  return compute_flow_video(video, HornSchunckEstimator{});
}

struct ScalePair {
  double s_x = 1.0;
  double s_y = 1.0;
  friend bool operator==(const ScalePair&, const ScalePair&) = default;
};

enum class FlowScaleMode : uint8_t {
  Piecewise,  // three-branch rule, applied verbatim
  Ratio,      // new/old extent in both directions
};

// Scale factor for one axis going from `old_extent` to `new_extent` pixels.
inline double axis_scale(size_t old_extent, size_t new_extent, FlowScaleMode mode = FlowScaleMode::Piecewise) {
  detail::require(old_extent >= 1 && new_extent >= 1, "scale factors need non-zero extents");
  const double o = static_cast<double>(old_extent);
  const double n = static_cast<double>(new_extent);
  if (mode == FlowScaleMode::Ratio) return n / o;
  if (new_extent < old_extent) return 1.0 - (o - n) / o;
  if (new_extent > old_extent) return 1.0 + (o - n) / n;
  return 1.0;
}

inline ScalePair scale_factors(size_t rows_old, size_t cols_old, size_t rows_new, size_t cols_new,
                               FlowScaleMode mode = FlowScaleMode::Piecewise) {
  return {axis_scale(cols_old, cols_new, mode), axis_scale(rows_old, rows_new, mode)};
}

inline FlowVideo rescale_flow(const FlowVideo& flow, ScalePair s) {
  detail::require(std::isfinite(s.s_x) && std::isfinite(s.s_y), "scale factors must be finite");
  FlowVideo out = flow;
  for (FlowField& f : out.fields) {
    for (float& x : f.u) x = static_cast<float>(x * s.s_x);
    for (float& y : f.v) y = static_cast<float>(y * s.s_y);
  }
  return out;
}

// Spatial resize of each field; magnitudes are left untouched.
inline FlowVideo resize_shorter_side(const FlowVideo& flow, size_t shorter) {
  return flow_from_video(resize_shorter_side(to_video(flow), shorter));
}

inline std::array<FlowVideo, 5> apply_crops(const FlowVideo& flow, const CropGeometry& geometry) {
  auto crops = apply_crops(to_video(flow), geometry);
  std::array<FlowVideo, 5> out;
  for (size_t i = 0; i < 5; ++i) out[i] = flow_from_video(crops[i]);
  return out;
}

}  // namespace actionpipe

#endif  // ACTIONPIPE_FLOW_HPP_
