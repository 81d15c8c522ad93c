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

#include <map>
#include <set>

#include "actionpipe/grid_search.hpp"
#include "oracles.hpp"

namespace ap = actionpipe;

TEST(Folds, StratifiedAndDeterministic) {
  std::vector<int> labels;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 12 + k; ++i) labels.push_back(k);
  const auto a = ap::stratified_folds(labels, 3, 5, 7);
  EXPECT_EQ(a, ap::stratified_folds(labels, 3, 5, 7));
  EXPECT_NE(a, ap::stratified_folds(labels, 3, 5, 8));
  std::map<std::pair<int, size_t>, size_t> per;
  for (size_t i = 0; i < labels.size(); ++i) {
    ASSERT_LT(a[i], 5u);
    ++per[{labels[i], a[i]}];
  }
  for (int k = 0; k < 3; ++k) {
    size_t lo = 100, hi = 0;
    for (size_t f = 0; f < 5; ++f) {
      lo = std::min(lo, per[{k, f}]);
      hi = std::max(hi, per[{k, f}]);
    }
    EXPECT_LE(hi - lo, 1u);
  }
}

TEST(Folds, TooFewSamples) {
  const std::vector<int> labels{0, 0, 0, 0, 0, 1, 1, 1, 1};
  EXPECT_THROW(ap::stratified_folds(labels, 2, 5, 0), ap::InvalidArgument);
}

class GridFixture : public ::testing::Test {
 protected:
  void SetUp() override {
    set = oracle::gaussian_clusters(11);
    x = ap::DenseMatrix::from_rows(set.x);
  }
  oracle::ClusterSet set;
  ap::DenseMatrix x;
};

TEST_F(GridFixture, SingleValue) {
  const std::vector<double> grid{0.5};
  const auto r = ap::grid_search_c(x, set.y, 3, grid);
  EXPECT_EQ(r.chosen_c, 0.5);
  ASSERT_EQ(r.mean_accuracy.size(), 1u);
}

TEST_F(GridFixture, DuplicateGrid) {
  const std::vector<double> grid{1.0, 1.0};
  const auto r = ap::grid_search_c(x, set.y, 3, grid);
  EXPECT_EQ(r.chosen_c, 1.0);
  EXPECT_EQ(r.candidates, grid);
  EXPECT_EQ(r.mean_accuracy[0], r.mean_accuracy[1]);
}

TEST_F(GridFixture, SeparableSetDefaultGrid) {
  const auto& grid = ap::default_c_grid();
  const auto r = ap::grid_search_c(x, set.y, 3, grid, 5, 3);
  ASSERT_EQ(r.mean_accuracy.size(), grid.size());
  double best = 0;
  for (double a : r.mean_accuracy) {
    EXPECT_GE(a, 0.95);
    best = std::max(best, a);
  }
  EXPECT_EQ(r.best_accuracy, best);
  for (size_t g = 0; g < grid.size(); ++g) {
    if (r.mean_accuracy[g] == best) {
      EXPECT_EQ(r.chosen_c, grid[g]);
      break;
    }
  }
  EXPECT_EQ(r, ap::grid_search_c(x, set.y, 3, grid, 5, 3));
}

TEST_F(GridFixture, TieGoesToSmallerC) {
  // Unordered grid: the answer is the smallest value among the best, not the first listed.
  const std::vector<double> grid{100.0, 10.0, 1.0};
  const auto r = ap::grid_search_c(x, set.y, 3, grid);
  EXPECT_EQ(r.mean_accuracy[0], r.mean_accuracy[2]);
  EXPECT_EQ(r.chosen_c, 1.0);
}

TEST_F(GridFixture, Errors) {
  const std::vector<double> empty;
  EXPECT_THROW(ap::grid_search_c(x, set.y, 3, empty), ap::InvalidArgument);
  const std::vector<double> bad{-1.0};
  EXPECT_THROW(ap::grid_search_c(x, set.y, 3, bad), ap::InvalidArgument);
}
