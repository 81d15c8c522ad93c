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

#include <cstdint>
#include <random>
#include <set>

#include "actionpipe/geometry.hpp"
#include "actionpipe/video.hpp"

namespace ap = actionpipe;

namespace {

ap::RgbVideo solid(size_t frames, size_t rows, size_t cols, uint8_t r, uint8_t g, uint8_t b) {
  ap::Video<uint8_t> raw(frames, rows, cols, 3);
  for (size_t i = 0; i < raw.data().size(); i += 3) {
    raw.data()[i] = r;
    raw.data()[i + 1] = g;
    raw.data()[i + 2] = b;
  }
  return ap::make_rgb_video(std::move(raw));
}

ap::RgbVideo random_rgb(size_t frames, size_t rows, size_t cols, uint64_t seed) {
  std::mt19937_64 gen(seed);
  ap::Video<uint8_t> raw(frames, rows, cols, 3);
  for (auto& x : raw.data()) x = static_cast<uint8_t>(gen() & 0xff);
  return ap::make_rgb_video(std::move(raw));
}

}  // namespace

TEST(Grayscale, BlackAndWhite) {
  const auto black = ap::to_grayscale(solid(1, 4, 5, 0, 0, 0), 0);
  const auto white = ap::to_grayscale(solid(1, 4, 5, 255, 255, 255), 0);
  for (auto px : black.data) EXPECT_EQ(px, 0);
  for (auto px : white.data) EXPECT_EQ(px, 255);
}

TEST(Grayscale, PureRed) {
  EXPECT_EQ(ap::to_grayscale(solid(1, 1, 1, 255, 0, 0), 0).data[0], 76);
  EXPECT_EQ(ap::luma(255, 0, 0), 76);
}

TEST(Grayscale, GrayDiagonalIsFixed) {
  for (int v = 0; v < 256; ++v) {
    const auto u = static_cast<uint8_t>(v);
    EXPECT_EQ(ap::luma(u, u, u), u) << v;
  }
}

TEST(Grayscale, BoundedOnRandomInput) {
  const auto video = random_rgb(3, 7, 9, 11);
  const auto gray = ap::to_grayscale(video);
  ASSERT_EQ(gray.frames(), 3u);
  ASSERT_EQ(gray.channels(), 1u);
  for (size_t t = 0; t < 3; ++t) {
    for (size_t r = 0; r < 7; ++r)
      for (size_t c = 0; c < 9; ++c) {
        const double y = 0.299 * video.pixels.at(t, r, c, 0) + 0.587 * video.pixels.at(t, r, c, 1) +
                         0.114 * video.pixels.at(t, r, c, 2);
        EXPECT_LE(std::abs(gray.at(t, r, c, 0) - y), 0.5 + 1e-9);
      }
  }
}

TEST(Grayscale, RejectsUnitDomain) {
  const auto unit = ap::normalize_pixels(solid(1, 2, 2, 1, 2, 3));
  EXPECT_THROW(ap::to_grayscale(unit, 0), ap::InvalidArgument);
}

TEST(Normalize, ExampleValues) {
  ap::Video<uint8_t> raw(1, 1, 1, 3);
  raw.data() = {255, 0, 128};
  const auto unit = ap::normalize_pixels(ap::make_rgb_video(raw));
  EXPECT_EQ(unit.domain, ap::ValueDomain::Unit);
  EXPECT_FLOAT_EQ(unit.pixels.data()[0], 1.0f);
  EXPECT_FLOAT_EQ(unit.pixels.data()[1], 0.0f);
  EXPECT_NEAR(unit.pixels.data()[2], 128.0 / 255.0, 1e-7);
}

TEST(Normalize, RejectsDoubleNormalization) {
  const auto unit = ap::normalize_pixels(solid(1, 2, 2, 9, 9, 9));
  EXPECT_THROW(ap::normalize_pixels(unit), ap::InvalidArgument);
}

TEST(Normalize, RoundTripIsExact) {
  const auto video = random_rgb(4, 6, 8, 3);
  ap::Video<uint8_t> raw(4, 6, 8, 3);
  for (size_t i = 0; i < raw.data().size(); ++i) raw.data()[i] = static_cast<uint8_t>(video.pixels.data()[i]);
  const auto unit = ap::normalize_pixels(video);
  for (float x : unit.pixels.data()) {
    EXPECT_GE(x, 0.0f);
    EXPECT_LE(x, 1.0f);
  }
  EXPECT_EQ(ap::denormalize_pixels(unit), raw);
}

TEST(Resize, ExampleExtents) {
  EXPECT_EQ(ap::shorter_side_extent(128, 128, 128), (ap::Extent{128, 128}));
  EXPECT_EQ(ap::shorter_side_extent(240, 320, 128), (ap::Extent{128, 171}));
  EXPECT_EQ(ap::shorter_side_extent(480, 640, 256), (ap::Extent{256, 341}));
  EXPECT_EQ(ap::shorter_side_extent(320, 240, 128), (ap::Extent{171, 128}));
}

TEST(Resize, RoundHalfUp) {
  // 3 * 3 / 2 = 4.5 rounds up to 5.
  EXPECT_EQ(ap::shorter_side_extent(2, 3, 3), (ap::Extent{3, 5}));
}

TEST(Resize, IdentityLeavesValues) {
  const auto video = random_rgb(2, 128, 128, 5);
  EXPECT_EQ(ap::resize_shorter_side(video, 128), video);
}

TEST(Resize, IdempotentAtTarget) {
  const auto video = random_rgb(1, 30, 47, 6);
  const auto once = ap::resize_shorter_side(video, 20);
  EXPECT_EQ(once.rows(), 20u);
  EXPECT_EQ(once.cols(), 31u);
  EXPECT_EQ(ap::resize_shorter_side(once, 20), once);
}

TEST(Resize, CornersAligned) {
  const auto video = random_rgb(1, 10, 14, 7);
  const auto out = ap::resize_shorter_side(video, 25);
  for (size_t ch = 0; ch < 3; ++ch) {
    EXPECT_FLOAT_EQ(out.pixels.at(0, 0, 0, ch), video.pixels.at(0, 0, 0, ch));
    EXPECT_FLOAT_EQ(out.pixels.at(0, out.rows() - 1, out.cols() - 1, ch), video.pixels.at(0, 9, 13, ch));
  }
}

TEST(Resize, LinearRampStaysLinear) {
  ap::Video<float> ramp(1, 3, 5, 1);
  for (size_t r = 0; r < 3; ++r)
    for (size_t c = 0; c < 5; ++c) ramp.at(0, r, c, 0) = static_cast<float>(c);
  const auto out = ap::resize_bilinear(ramp, {5, 9});
  for (size_t c = 0; c < 9; ++c) EXPECT_NEAR(out.at(0, 2, c, 0), 0.5 * static_cast<double>(c), 1e-6);
}

TEST(Resize, RejectsDegenerate) {
  EXPECT_THROW(ap::resize_shorter_side(ap::Video<float>(1, 1, 5, 3), 4), ap::InvalidArgument);
  EXPECT_THROW(ap::resize_shorter_side(ap::Video<float>(1, 5, 5, 3), 1), ap::InvalidArgument);
}

TEST(CropGeometry, Examples) {
  EXPECT_EQ(ap::crop_side(128), 112u);
  const auto g = ap::five_crop_geometry(128, 171, 128);
  EXPECT_EQ(g.side, 112u);
  EXPECT_EQ(g.at(ap::CropPosition::Center), (ap::CropOffset{8, 29}));
  EXPECT_EQ(g.at(ap::CropPosition::TopLeft), (ap::CropOffset{0, 0}));
  EXPECT_EQ(g.at(ap::CropPosition::TopRight), (ap::CropOffset{0, 59}));
  EXPECT_EQ(g.at(ap::CropPosition::BottomLeft), (ap::CropOffset{16, 0}));
  EXPECT_EQ(g.at(ap::CropPosition::BottomRight), (ap::CropOffset{16, 59}));
}

TEST(CropGeometry, FrameEqualsCrop) {
  const auto g = ap::five_crop_geometry(7, 7, 8);
  EXPECT_EQ(g.side, 7u);
  for (const auto& o : g.offsets) EXPECT_EQ(o, (ap::CropOffset{0, 0}));
}

TEST(CropGeometry, RejectsSmallFrame) {
  EXPECT_THROW(ap::five_crop_geometry(100, 171, 128), ap::InvalidArgument);
}

TEST(CropGeometry, CropsFitAndCoverCorners) {
  for (size_t s1 = 16; s1 <= 80; s1 += 7) {
    for (size_t extra = 0; extra < 40; extra += 9) {
      const size_t rows = s1, cols = s1 + extra;
      const auto g = ap::five_crop_geometry(rows, cols, s1);
      for (const auto& o : g.offsets) {
        EXPECT_LE(o.row + g.side, rows);
        EXPECT_LE(o.col + g.side, cols);
      }
      auto covers = [&](size_t r, size_t c) {
        for (const auto& o : g.offsets)
          if (r >= o.row && r < o.row + g.side && c >= o.col && c < o.col + g.side) return true;
        return false;
      };
      EXPECT_TRUE(covers(0, 0));
      EXPECT_TRUE(covers(0, cols - 1));
      EXPECT_TRUE(covers(rows - 1, 0));
      EXPECT_TRUE(covers(rows - 1, cols - 1));
    }
  }
}

TEST(ApplyCrops, FullFrameCropsAreCopies) {
  const auto video = random_rgb(2, 7, 7, 8);
  const auto crops = ap::apply_crops(video, ap::five_crop_geometry(7, 7, 8));
  for (const auto& c : crops) EXPECT_EQ(c, video);
}

TEST(ApplyCrops, MarkerOnlyInTopLeft) {
  ap::Video<uint8_t> v(1, 20, 24, 1, 0);
  v.at(0, 0, 0, 0) = 200;
  const auto crops = ap::apply_crops(v, ap::five_crop_geometry(20, 24, 16));
  for (size_t i = 0; i < 5; ++i) {
    const bool has = std::count(crops[i].data().begin(), crops[i].data().end(), 200) > 0;
    EXPECT_EQ(has, i == 0) << i;
  }
}

TEST(ApplyCrops, TopRightColumns) {
  ap::Video<float> v(1, 128, 171, 1);
  for (size_t r = 0; r < 128; ++r)
    for (size_t c = 0; c < 171; ++c) v.at(0, r, c, 0) = static_cast<float>(c);
  const auto g = ap::five_crop_geometry(128, 171, 128);
  const auto crops = ap::apply_crops(v, g);
  const auto& tr = crops[static_cast<size_t>(ap::CropPosition::TopRight)];
  EXPECT_EQ(tr.rows(), 112u);
  EXPECT_EQ(tr.cols(), 112u);
  EXPECT_EQ(tr.at(0, 0, 0, 0), 59.0f);
  EXPECT_EQ(tr.at(0, 111, 111, 0), 170.0f);
}

TEST(ApplyCrops, ShapeAndGeometryMismatch) {
  const auto video = random_rgb(3, 20, 30, 9);
  const auto g = ap::five_crop_geometry(20, 30, 16);
  for (const auto& c : ap::apply_crops(video, g)) {
    EXPECT_EQ(c.frames(), 3u);
    EXPECT_EQ(c.pixels.channels(), 3u);
    EXPECT_EQ(c.pixels.data().size(), 3u * 14 * 14 * 3);
  }
  EXPECT_THROW(ap::apply_crops(random_rgb(1, 21, 30, 1), g), ap::InvalidArgument);
}

TEST(VideoTypes, RejectsBadData) {
  EXPECT_THROW(ap::Video<float>(1, 2, 2, 3, std::vector<float>(5)), ap::InvalidArgument);
  EXPECT_THROW(ap::GrayFrame(2, 2, std::vector<uint8_t>(3)), ap::InvalidArgument);
  EXPECT_THROW(ap::make_rgb_video(ap::Video<uint8_t>(1, 2, 2, 1)), ap::InvalidArgument);
}
