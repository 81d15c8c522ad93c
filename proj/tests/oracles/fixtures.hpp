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

// Synthetic inputs shared by the flow tests and the acceptance suite.

#ifndef ACTIONPIPE_TESTS_FIXTURES_HPP_
#define ACTIONPIPE_TESTS_FIXTURES_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "actionpipe/flow.hpp"
#include "actionpipe/video.hpp"

namespace fixtures {

inline actionpipe::GrayFrame random_texture(size_t rows, size_t cols, uint64_t seed) {
  std::mt19937_64 gen(seed);
  actionpipe::GrayFrame f(rows, cols);
  for (auto& px : f.data) px = static_cast<uint8_t>(gen() & 0xff);
  return f;
}

// Content moves by (dx, dy) pixels; borders wrap.
inline actionpipe::GrayFrame shifted(const actionpipe::GrayFrame& f, long dx, long dy) {
  actionpipe::GrayFrame out(f.rows, f.cols);
  const long rows = static_cast<long>(f.rows), cols = static_cast<long>(f.cols);
  for (long r = 0; r < rows; ++r)
    for (long c = 0; c < cols; ++c)
      out(static_cast<size_t>(r), static_cast<size_t>(c)) =
          f(static_cast<size_t>(((r - dy) % rows + rows) % rows), static_cast<size_t>(((c - dx) % cols + cols) % cols));
  return out;
}

struct InteriorStats {
  double mean_u = 0;
  double mean_abs_v = 0;
  double mean_v = 0;
};

// Means over pixels at least `margin` away from every border.
inline InteriorStats interior(const actionpipe::FlowField& f, size_t margin) {
  InteriorStats s;
  size_t n = 0;
  for (size_t r = margin; r + margin < f.rows; ++r)
    for (size_t c = margin; c + margin < f.cols; ++c) {
      const size_t i = r * f.cols + c;
      s.mean_u += f.u[i];
      s.mean_v += f.v[i];
      s.mean_abs_v += std::fabs(f.v[i]);
      ++n;
    }
  s.mean_u /= static_cast<double>(n);
  s.mean_v /= static_cast<double>(n);
  s.mean_abs_v /= static_cast<double>(n);
  return s;
}

inline double max_magnitude(const actionpipe::FlowField& f) {
  double m = 0;
  for (size_t i = 0; i < f.u.size(); ++i) m = std::max(m, std::hypot(static_cast<double>(f.u[i]), static_cast<double>(f.v[i])));
  return m;
}

}  // namespace fixtures

#endif  // ACTIONPIPE_TESTS_FIXTURES_HPP_
