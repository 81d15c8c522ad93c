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

#ifndef ACTIONPIPE_GRID_SEARCH_HPP_
#define ACTIONPIPE_GRID_SEARCH_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "actionpipe/error.hpp"
#include "actionpipe/matrix.hpp"
#include "actionpipe/rng.hpp"
#include "actionpipe/svm.hpp"

namespace actionpipe {

inline const std::vector<double>& default_c_grid() {
  static const std::vector<double> grid = {1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0};
  return grid;
}

// Fold id per sample. Each class is shuffled independently and dealt
// round-robin, so fold sizes per class differ by at most one.
inline std::vector<size_t> stratified_folds(std::span<const int> labels, size_t n_classes, size_t folds, uint64_t seed) {
  detail::require(folds >= 2, "need at least two folds");
  std::vector<std::vector<size_t>> by_class(n_classes);
  for (size_t i = 0; i < labels.size(); ++i) {
    detail::require(labels[i] >= 0 && static_cast<size_t>(labels[i]) < n_classes, "label outside class range");
    by_class[static_cast<size_t>(labels[i])].push_back(i);
  }
  std::vector<size_t> fold_of(labels.size());
  rng::SplitMix gen(seed);
  for (size_t k = 0; k < n_classes; ++k) {
    detail::require(by_class[k].size() >= folds, "class " + std::to_string(k) + " has " +
                                                     std::to_string(by_class[k].size()) + " samples, fewer than " +
                                                     std::to_string(folds) + " folds");
    rng::shuffle(by_class[k], gen);
    for (size_t j = 0; j < by_class[k].size(); ++j) fold_of[by_class[k][j]] = j % folds;
  }
  return fold_of;
}

struct GridSearchReport {
  std::vector<double> candidates;
  std::vector<double> mean_accuracy;
  std::vector<std::vector<double>> fold_accuracy;  // [candidate][fold]
  double chosen_c = 0.0;
  double best_accuracy = 0.0;

  friend bool operator==(const GridSearchReport&, const GridSearchReport&) = default;
};

inline double accuracy_on(const LinearSvmModel& model, const DenseMatrix& x, std::span<const int> labels) {
  size_t correct = 0;
  for (size_t i = 0; i < x.rows(); ++i) correct += predict(model, x.row(i)).label == labels[i];
  return static_cast<double>(correct) / static_cast<double>(x.rows());
}

// Picks the C with the best mean held-out accuracy over stratified folds.
// Ties go to the smaller C.
inline GridSearchReport grid_search_c(const DenseMatrix& x, std::span<const int> labels, size_t n_classes,
                                      std::span<const double> grid, size_t folds = 5, uint64_t seed = 0,
                                      const SvmSolverOptions& options = {}) {
  detail::require(!grid.empty(), "C grid must not be empty");
  for (double c : grid) detail::require(c > 0 && std::isfinite(c), "C candidates must be positive");
  const std::vector<size_t> fold_of = stratified_folds(labels, n_classes, folds, seed);

  GridSearchReport report;
  report.candidates.assign(grid.begin(), grid.end());
  report.fold_accuracy.assign(grid.size(), std::vector<double>(folds, 0.0));
  for (size_t f = 0; f < folds; ++f) {
    std::vector<size_t> train, held;
    for (size_t i = 0; i < fold_of.size(); ++i) (fold_of[i] == f ? held : train).push_back(i);
    const DenseMatrix x_train = x.select_rows(train), x_held = x.select_rows(held);
    std::vector<int> y_train, y_held;
    for (size_t i : train) y_train.push_back(labels[i]);
    for (size_t i : held) y_held.push_back(labels[i]);
    for (size_t g = 0; g < grid.size(); ++g) {
      const LinearSvmModel m = train_ovr(x_train, y_train, n_classes, grid[g], options);
      report.fold_accuracy[g][f] = accuracy_on(m, x_held, y_held);
    }
  }
  report.mean_accuracy.resize(grid.size());
  for (size_t g = 0; g < grid.size(); ++g) {
    double s = 0;
    for (double a : report.fold_accuracy[g]) s += a;
    report.mean_accuracy[g] = s / static_cast<double>(folds);
  }
  size_t best = 0;
  for (size_t g = 1; g < grid.size(); ++g) {
    const double a = report.mean_accuracy[g], ab = report.mean_accuracy[best];
    if (a > ab || (a == ab && grid[g] < grid[best])) best = g;
  }
  report.chosen_c = grid[best];
  report.best_accuracy = report.mean_accuracy[best];
  return report;
}

}  // namespace actionpipe

#endif  // ACTIONPIPE_GRID_SEARCH_HPP_
