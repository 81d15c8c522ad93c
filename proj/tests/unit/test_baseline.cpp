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

#include <algorithm>
#include <random>

#include "actionpipe/baseline.hpp"
#include "oracles.hpp"

namespace ap = actionpipe;

namespace {

// One vote for `label` with probability `conf` on it, remainder spread evenly.
ap::CropPrediction vote(size_t crop, int label, double conf, size_t n_classes = 3) {
  std::vector<double> s(n_classes, (1.0 - conf) / static_cast<double>(n_classes - 1));
  s[static_cast<size_t>(label)] = conf;
  return ap::make_crop_prediction(crop, s);
}

}  // namespace

TEST(MajorityVote, StrictMajority) {
  std::vector<ap::CropPrediction> p;
  for (size_t i = 0; i < 6; ++i) p.push_back(vote(i, 0, 0.4));
  for (size_t i = 6; i < 10; ++i) p.push_back(vote(i, 1, 0.99));
  EXPECT_EQ(ap::majority_vote(p), 0);
}

TEST(MajorityVote, Unanimous) {
  std::vector<ap::CropPrediction> p;
  for (size_t i = 0; i < 10; ++i) p.push_back(vote(i, 2, 0.5));
  EXPECT_EQ(ap::majority_vote(p), 2);
}

TEST(MajorityVote, TieBrokenByConfidence) {
  std::vector<ap::CropPrediction> p;
  const double a[] = {0.6, 0.7, 0.6, 0.6, 0.7};     // sums to 3.2
  const double b[] = {0.5, 0.6, 0.6, 0.6, 0.6};     // sums to 2.9
  for (size_t i = 0; i < 5; ++i) p.push_back(vote(i, 1, a[i]));
  for (size_t i = 0; i < 5; ++i) p.push_back(vote(5 + i, 0, b[i]));
  EXPECT_EQ(ap::majority_vote(p), 1);
}

TEST(MajorityVote, FullTieGoesToSmallestIndex) {
  std::vector<ap::CropPrediction> p;
  for (size_t i = 0; i < 5; ++i) p.push_back(vote(i, 2, 0.5));
  for (size_t i = 0; i < 5; ++i) p.push_back(vote(5 + i, 1, 0.5));
  EXPECT_EQ(ap::majority_vote(p), 1);
}

TEST(MajorityVote, PermutationInvariant) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> unit(0.34, 0.95);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ap::CropPrediction> p;
    for (size_t i = 0; i < 10; ++i) p.push_back(vote(i, static_cast<int>(gen() % 3), unit(gen)));
    const int expected = ap::majority_vote(p);
    for (int k = 0; k < 10; ++k) {
      std::shuffle(p.begin(), p.end(), gen);
      EXPECT_EQ(ap::majority_vote(p), expected);
    }
  }
}

TEST(MajorityVote, Errors) {
  std::vector<ap::CropPrediction> none;
  EXPECT_THROW(ap::majority_vote(none), ap::InvalidArgument);
  std::vector<ap::CropPrediction> mixed{vote(0, 0, 0.5, 3), vote(1, 0, 0.5, 4)};
  EXPECT_THROW(ap::majority_vote(mixed), ap::InvalidArgument);
  EXPECT_THROW(ap::make_crop_prediction(0, {}), ap::InvalidArgument);
  EXPECT_THROW(ap::make_crop_prediction(0, {0.0, 0.0}), ap::InvalidArgument);
  EXPECT_THROW(ap::make_crop_prediction(0, {0.5, -0.1}), ap::InvalidArgument);
}

TEST(CropPrediction, ScoresNormalized) {
  const auto p = ap::make_crop_prediction(3, {2.0, 6.0, 2.0});
  EXPECT_EQ(p.crop, 3u);
  EXPECT_EQ(p.label, 1);
  double sum = 0;
  for (double s : p.scores) {
    EXPECT_GE(s, 0.0);
    sum += s;
  }
  EXPECT_NEAR(sum, 1.0, 1e-6);
}

TEST(Probe, LearnsClusters) {
  const auto set = oracle::gaussian_clusters(6, 20, 10);
  const auto x = ap::DenseMatrix::from_rows(set.x);
  const auto probe = ap::train_probe(x, set.y, 3);
  size_t correct = 0;
  for (size_t i = 0; i < set.x.size(); ++i) {
    const auto s = ap::probe_scores(probe, x.row(i));
    double sum = 0;
    for (double v : s) sum += v;
    EXPECT_NEAR(sum, 1.0, 1e-9);
    correct += ap::make_crop_prediction(0, s).label == set.y[i];
  }
  EXPECT_EQ(correct, set.x.size());
  EXPECT_EQ(probe, ap::train_probe(x, set.y, 3));
  EXPECT_THROW(ap::probe_scores(probe, std::vector<double>(3)), ap::InvalidArgument);
}
