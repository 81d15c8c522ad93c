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

#include <cmath>
#include <random>

#include "actionpipe/flow.hpp"
#include "fixtures.hpp"

namespace ap = actionpipe;

TEST(Flow, IdenticalFramesGiveZero) {
  const auto f = fixtures::random_texture(40, 48, 3);
  const auto flow = ap::compute_flow(f, f);
  EXPECT_LT(fixtures::max_magnitude(flow), 1e-6);
}

TEST(Flow, ConstantFramesGiveZero) {
  const ap::GrayFrame a(16, 16, 90), b(16, 16, 140);
  EXPECT_LT(fixtures::max_magnitude(ap::compute_flow(a, b)), 1e-6);
}

TEST(Flow, ShiftRight) {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const auto a = fixtures::random_texture(64, 64, seed);
    const auto s = fixtures::interior(ap::compute_flow(a, fixtures::shifted(a, 2, 0)), 4);
    EXPECT_GE(s.mean_u, 1.6);
    EXPECT_LE(s.mean_u, 2.4);
    EXPECT_LT(s.mean_abs_v, 0.4);
  }
}

TEST(Flow, ShiftDown) {
  const auto a = fixtures::random_texture(64, 64, 21);
  const auto flow = ap::compute_flow(a, fixtures::shifted(a, 0, 2));
  double mean_v = 0, mean_abs_u = 0;
  size_t n = 0;
  for (size_t r = 4; r < 60; ++r)
    for (size_t c = 4; c < 60; ++c) {
      mean_v += flow.v[r * 64 + c];
      mean_abs_u += std::fabs(flow.u[r * 64 + c]);
      ++n;
    }
  EXPECT_NEAR(mean_v / static_cast<double>(n), 2.0, 0.4);
  EXPECT_LT(mean_abs_u / static_cast<double>(n), 0.4);
}

TEST(Flow, NegatedShiftNegatesMean) {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const auto a = fixtures::random_texture(64, 64, 100 + seed);
    const double right = fixtures::interior(ap::compute_flow(a, fixtures::shifted(a, 2, 0)), 4).mean_u;
    const double left = fixtures::interior(ap::compute_flow(a, fixtures::shifted(a, -2, 0)), 4).mean_u;
    EXPECT_NEAR(right, -left, 0.3);
  }
}

TEST(Flow, Deterministic) {
  const auto a = fixtures::random_texture(32, 40, 1);
  const auto b = fixtures::shifted(a, 1, 1);
  EXPECT_EQ(ap::compute_flow(a, b), ap::compute_flow(a, b));
}

TEST(Flow, RejectsBadInput) {
  EXPECT_THROW(ap::compute_flow(ap::GrayFrame(16, 16), ap::GrayFrame(16, 17)), ap::InvalidArgument);
  EXPECT_THROW(ap::compute_flow(ap::GrayFrame(7, 16), ap::GrayFrame(7, 16)), ap::InvalidArgument);
}

TEST(FlowVideo, CountsAndShift) {
  const auto base = fixtures::random_texture(48, 48, 9);
  ap::GrayVideo video(3, 48, 48, 1);
  for (size_t t = 0; t < 3; ++t) {
    const auto f = fixtures::shifted(base, static_cast<long>(t), 0);
    std::copy(f.data.begin(), f.data.end(), video.frame(t).begin());
  }
  const auto flow = ap::compute_flow_video(video);
  ASSERT_EQ(flow.frames(), 2u);
  for (const auto& f : flow.fields) EXPECT_NEAR(fixtures::interior(f, 3).mean_u, 1.0, 0.25);
}

TEST(FlowVideo, IdenticalPairAndErrors) {
  ap::GrayVideo two(2, 16, 16, 1);
  const auto tex = fixtures::random_texture(16, 16, 2);
  std::copy(tex.data.begin(), tex.data.end(), two.frame(0).begin());
  std::copy(tex.data.begin(), tex.data.end(), two.frame(1).begin());
  const auto flow = ap::compute_flow_video(two);
  ASSERT_EQ(flow.frames(), 1u);
  EXPECT_LT(fixtures::max_magnitude(flow.fields[0]), 1e-6);
  EXPECT_THROW(ap::compute_flow_video(ap::GrayVideo(1, 16, 16, 1)), ap::InvalidArgument);
  EXPECT_EQ(ap::compute_flow_video(ap::GrayVideo(6, 8, 8, 1)).frames(), 5u);
}

TEST(ScaleFactors, Examples) {
  EXPECT_EQ(ap::axis_scale(200, 100), 0.5);
  EXPECT_EQ(ap::axis_scale(100, 100), 1.0);
  EXPECT_EQ(ap::axis_scale(100, 200), 0.5);
  EXPECT_EQ(ap::axis_scale(100, 200, ap::FlowScaleMode::Ratio), 2.0);
  const auto s = ap::scale_factors(240, 320, 128, 171);
  EXPECT_NEAR(s.s_x, 171.0 / 320.0, 1e-12);
  EXPECT_NEAR(s.s_y, 128.0 / 240.0, 1e-12);
}

TEST(ScaleFactors, Branches) {
  std::mt19937_64 gen(42);
  std::uniform_int_distribution<size_t> extent(1, 4000);
  for (int i = 0; i < 1000; ++i) {
    const size_t ro = extent(gen), co = extent(gen), rn = extent(gen), cn = extent(gen);
    const auto s = ap::scale_factors(ro, co, rn, cn);
    const double o = static_cast<double>(co), n = static_cast<double>(cn);
    if (cn < co) {
      EXPECT_LT(std::fabs(s.s_x - n / o), 1e-12);
    } else if (cn > co) {
      EXPECT_NEAR(s.s_x, 1.0 + (o - n) / n, 1e-15);
    } else {
      EXPECT_EQ(s.s_x, 1.0);
    }
    EXPECT_GT(s.s_x, 0.0);
    EXPECT_GT(s.s_y, 0.0);
  }
  EXPECT_THROW(ap::scale_factors(0, 1, 1, 1), ap::InvalidArgument);
}

namespace {

ap::FlowVideo uniform_flow(size_t frames, size_t rows, size_t cols, float u, float v) {
  ap::FlowVideo flow;
  for (size_t t = 0; t < frames; ++t) {
    ap::FlowField f(rows, cols);
    std::fill(f.u.begin(), f.u.end(), u);
    std::fill(f.v.begin(), f.v.end(), v);
    flow.fields.push_back(f);
  }
  return flow;
}

}  // namespace

TEST(RescaleFlow, Examples) {
  const auto f = uniform_flow(2, 3, 4, 4.0f, 2.0f);
  EXPECT_EQ(ap::rescale_flow(f, {1.0, 1.0}), f);
  EXPECT_EQ(ap::rescale_flow(f, {0.5, 0.25}), uniform_flow(2, 3, 4, 2.0f, 0.5f));
  const auto zero = uniform_flow(1, 2, 2, 0.0f, 0.0f);
  EXPECT_EQ(ap::rescale_flow(zero, {3.7, -0.2}), zero);
  EXPECT_THROW(ap::rescale_flow(f, {NAN, 1.0}), ap::InvalidArgument);
}

TEST(RescaleFlow, Linearity) {
  std::mt19937_64 gen(5);
  std::normal_distribution<float> normal(0.0f, 3.0f);
  ap::FlowVideo f = uniform_flow(2, 8, 8, 0, 0);
  for (auto& field : f.fields) {
    for (auto& x : field.u) x = normal(gen);
    for (auto& x : field.v) x = normal(gen);
  }
  // Power-of-two factors compose without rounding.
  const ap::ScalePair s{0.5, 2.0}, t{0.25, 0.125};
  EXPECT_EQ(ap::rescale_flow(ap::rescale_flow(f, s), t), ap::rescale_flow(f, {s.s_x * t.s_x, s.s_y * t.s_y}));
  // General factors agree to float rounding.
  const ap::ScalePair a{0.7, 1.3}, b{0.55, 0.9};
  const auto two = ap::rescale_flow(ap::rescale_flow(f, a), b);
  const auto one = ap::rescale_flow(f, {a.s_x * b.s_x, a.s_y * b.s_y});
  for (size_t k = 0; k < two.fields.size(); ++k)
    for (size_t i = 0; i < two.fields[k].u.size(); ++i) {
      EXPECT_NEAR(two.fields[k].u[i], one.fields[k].u[i], 4e-7 * (1 + std::fabs(one.fields[k].u[i])));
      EXPECT_NEAR(two.fields[k].v[i], one.fields[k].v[i], 4e-7 * (1 + std::fabs(one.fields[k].v[i])));
    }
}

TEST(FlowGeometry, ResizeKeepsMagnitudes) {
  const auto f = uniform_flow(2, 24, 32, 1.5f, -0.5f);
  const auto r = ap::resize_shorter_side(f, 12);
  EXPECT_EQ(r.rows(), 12u);
  EXPECT_EQ(r.cols(), 16u);
  EXPECT_EQ(r, uniform_flow(2, 12, 16, 1.5f, -0.5f));
  const auto crops = ap::apply_crops(r, ap::five_crop_geometry(12, 16, 12));
  for (const auto& c : crops) EXPECT_EQ(c, uniform_flow(2, 10, 10, 1.5f, -0.5f));
}

TEST(FlowGeometry, VideoViewRoundTrip) {
  auto f = uniform_flow(2, 3, 4, 0, 0);
  for (size_t i = 0; i < 12; ++i) {
    f.fields[1].u[i] = static_cast<float>(i);
    f.fields[1].v[i] = -static_cast<float>(i);
  }
  const auto v = ap::to_video(f);
  EXPECT_EQ(v.channels(), 2u);
  EXPECT_EQ(v.at(1, 1, 2, 0), 6.0f);
  EXPECT_EQ(v.at(1, 1, 2, 1), -6.0f);
  EXPECT_EQ(ap::flow_from_video(v), f);
}
