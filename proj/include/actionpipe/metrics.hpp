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

#ifndef ACTIONPIPE_METRICS_HPP_
#define ACTIONPIPE_METRICS_HPP_

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "actionpipe/error.hpp"

namespace actionpipe {

struct ConfusionMatrix {
  size_t n_classes = 0;
  std::vector<size_t> counts;  // row = actual, column = predicted

  explicit ConfusionMatrix(size_t n = 0) : n_classes(n), counts(n * n, 0) {}

  size_t& at(size_t actual, size_t predicted) { return counts[actual * n_classes + predicted]; }
  size_t at(size_t actual, size_t predicted) const { return counts[actual * n_classes + predicted]; }
  size_t total() const {
    size_t t = 0;
    for (size_t c : counts) t += c;
    return t;
  }
  size_t trace() const {
    size_t t = 0;
    for (size_t k = 0; k < n_classes; ++k) t += at(k, k);
    return t;
  }
  size_t row_sum(size_t actual) const {
    size_t s = 0;
    for (size_t k = 0; k < n_classes; ++k) s += at(actual, k);
    return s;
  }
  size_t col_sum(size_t predicted) const {
    size_t s = 0;
    for (size_t k = 0; k < n_classes; ++k) s += at(k, predicted);
    return s;
  }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  size_t support = 0;
  // Set when a denominator was zero and the metric was defined as 0.
  bool precision_undefined = false;
  bool recall_undefined = false;
  friend bool operator==(const ClassMetrics&, const ClassMetrics&) = default;
};

struct ClassReport {
  std::vector<ClassMetrics> classes;
  double mean_class_accuracy = 0.0;  // macro recall
  double overall_accuracy = 0.0;
  friend bool operator==(const ClassReport&, const ClassReport&) = default;
};

inline ClassReport class_report(const ConfusionMatrix& cm) {
  detail::require(cm.total() > 0, "cannot report on an empty confusion matrix");
  ClassReport r;
  r.classes.resize(cm.n_classes);
  double recall_sum = 0;
  for (size_t k = 0; k < cm.n_classes; ++k) {
    ClassMetrics& m = r.classes[k];
    const size_t tp = cm.at(k, k), predicted = cm.col_sum(k), actual = cm.row_sum(k);
    m.support = actual;
    m.precision_undefined = predicted == 0;
    m.recall_undefined = actual == 0;
    m.precision = predicted ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
    m.recall = actual ? static_cast<double>(tp) / static_cast<double>(actual) : 0.0;
    m.f1 = (m.precision + m.recall) > 0 ? 2 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    recall_sum += m.recall;
  }
  r.mean_class_accuracy = recall_sum / static_cast<double>(cm.n_classes);
  r.overall_accuracy = static_cast<double>(cm.trace()) / static_cast<double>(cm.total());
  return r;
}

struct Evaluation {
  ConfusionMatrix confusion;
  ClassReport report;
};

inline Evaluation evaluate(std::span<const int> actual, std::span<const int> predicted, size_t n_classes) {
  detail::require(!actual.empty(), "evaluation needs a non-empty test set");
  detail::require(actual.size() == predicted.size(), "prediction count does not match label count");
  Evaluation e{ConfusionMatrix(n_classes), {}};
  for (size_t i = 0; i < actual.size(); ++i) {
    detail::require(actual[i] >= 0 && static_cast<size_t>(actual[i]) < n_classes,
                    "label " + std::to_string(actual[i]) + " is not in the model's class set");
    detail::require(predicted[i] >= 0 && static_cast<size_t>(predicted[i]) < n_classes, "prediction outside class set");
    ++e.confusion.at(static_cast<size_t>(actual[i]), static_cast<size_t>(predicted[i]));
  }
  e.report = class_report(e.confusion);
  return e;
}

// Any classifier: maps a test-sample index to a predicted label.
template <typename Classify>
Evaluation evaluate_with(std::span<const int> actual, size_t n_classes, Classify&& classify) {
  std::vector<int> predicted(actual.size());
  for (size_t i = 0; i < actual.size(); ++i) predicted[i] = classify(i);
  return evaluate(actual, predicted, n_classes);
}

struct SplitSummary {
  ClassReport mean;
  std::vector<ClassReport> per_split;
};

// Arithmetic mean of every metric. Means are taken as first + mean(x - first)
// so that averaging identical reports reproduces them bit-for-bit.
inline SplitSummary average_over_splits(std::span<const ClassReport> reports) {
  detail::require(!reports.empty(), "need at least one report to average");
  const size_t n = reports.front().classes.size();
  for (const ClassReport& r : reports) detail::require(r.classes.size() == n, "reports disagree on the class set");
  SplitSummary s;
  s.per_split.assign(reports.begin(), reports.end());
  const double count = static_cast<double>(reports.size());
  auto mean_of = [&](auto field) {
    const double first = field(reports.front());
    double delta = 0;
    for (const ClassReport& r : reports) delta += field(r) - first;
    return first + delta / count;
  };
  s.mean.classes.resize(n);
  for (size_t k = 0; k < n; ++k) {
    ClassMetrics& m = s.mean.classes[k];
    m.precision = mean_of([k](const ClassReport& r) { return r.classes[k].precision; });
    m.recall = mean_of([k](const ClassReport& r) { return r.classes[k].recall; });
    m.f1 = mean_of([k](const ClassReport& r) { return r.classes[k].f1; });
    m.support = static_cast<size_t>(
        std::llround(mean_of([k](const ClassReport& r) { return static_cast<double>(r.classes[k].support); })));
    for (const ClassReport& r : reports) {
      m.precision_undefined = m.precision_undefined || r.classes[k].precision_undefined;
      m.recall_undefined = m.recall_undefined || r.classes[k].recall_undefined;
    }
  }
  s.mean.mean_class_accuracy = mean_of([](const ClassReport& r) { return r.mean_class_accuracy; });
  s.mean.overall_accuracy = mean_of([](const ClassReport& r) { return r.overall_accuracy; });
  return s;
}

}  // namespace actionpipe

#endif  // ACTIONPIPE_METRICS_HPP_
