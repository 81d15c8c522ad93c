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

// Crop-level baseline: a softmax probe stands in for the network's own
// classification head, and a video is labelled by voting over its ten crops.

#ifndef ACTIONPIPE_BASELINE_HPP_
#define ACTIONPIPE_BASELINE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "actionpipe/binary_io.hpp"
#include "actionpipe/error.hpp"
#include "actionpipe/matrix.hpp"

namespace actionpipe {

struct ProbeOptions {
  double learning_rate = 0.5;
  double l2 = 1e-3;
  int iterations = 500;
};

// Multinomial logistic regression on standardized inputs.
struct SoftmaxProbe {
  size_t n_classes = 0;
  std::vector<double> mean;
  std::vector<double> inv_scale;
  DenseMatrix weights;  // n_classes x dim
  std::vector<double> biases;

  size_t dim() const { return mean.size(); }
  friend bool operator==(const SoftmaxProbe&, const SoftmaxProbe&) = default;
};

namespace baseline_detail {

inline void softmax_inplace(std::vector<double>& z) {
  const double peak = *std::max_element(z.begin(), z.end());
  double sum = 0;
  for (double& v : z) sum += (v = std::exp(v - peak));
  for (double& v : z) v /= sum;
}

}  // namespace baseline_detail

inline std::vector<double> probe_scores(const SoftmaxProbe& probe, std::span<const double> x) {
  detail::require(x.size() == probe.dim(), "probe input has the wrong dimension");
  std::vector<double> z(probe.n_classes);
  std::vector<double> s(x.size());
  for (size_t j = 0; j < x.size(); ++j) s[j] = (x[j] - probe.mean[j]) * probe.inv_scale[j];
  for (size_t k = 0; k < probe.n_classes; ++k) z[k] = dot(probe.weights.row(k), s) + probe.biases[k];
  baseline_detail::softmax_inplace(z);
  return z;
}

inline SoftmaxProbe train_probe(const DenseMatrix& x, std::span<const int> labels, size_t n_classes,
                                const ProbeOptions& options = {}) {
  const size_t n = x.rows(), d = x.cols();
  detail::require(n >= 1 && labels.size() == n, "probe needs labelled samples");
  detail::require(n_classes >= 2, "probe needs at least two classes");
  SoftmaxProbe p;
  p.n_classes = n_classes;
  p.mean.assign(d, 0.0);
  p.inv_scale.assign(d, 1.0);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < d; ++j) p.mean[j] += x(i, j) / static_cast<double>(n);
  for (size_t j = 0; j < d; ++j) {
    double var = 0;
    for (size_t i = 0; i < n; ++i) var += (x(i, j) - p.mean[j]) * (x(i, j) - p.mean[j]);
    var /= static_cast<double>(n);
    p.inv_scale[j] = var > 1e-24 ? 1.0 / std::sqrt(var) : 1.0;
  }
  DenseMatrix s(n, d);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < d; ++j) s(i, j) = (x(i, j) - p.mean[j]) * p.inv_scale[j];

  p.weights = DenseMatrix(n_classes, d);
  p.biases.assign(n_classes, 0.0);
  DenseMatrix grad_w(n_classes, d);
  std::vector<double> grad_b(n_classes), z(n_classes);
  for (int it = 0; it < options.iterations; ++it) {
    std::fill(grad_w.data().begin(), grad_w.data().end(), 0.0);
    std::fill(grad_b.begin(), grad_b.end(), 0.0);
    for (size_t i = 0; i < n; ++i) {
      for (size_t k = 0; k < n_classes; ++k) z[k] = dot(p.weights.row(k), s.row(i)) + p.biases[k];
      baseline_detail::softmax_inplace(z);
      z[static_cast<size_t>(labels[i])] -= 1.0;
      for (size_t k = 0; k < n_classes; ++k) {
        auto g = grad_w.row(k);
        for (size_t j = 0; j < d; ++j) g[j] += z[k] * s(i, j);
        grad_b[k] += z[k];
      }
    }
    const double step = options.learning_rate / static_cast<double>(n);
    for (size_t k = 0; k < n_classes; ++k) {
      auto w = p.weights.row(k);
      const auto g = grad_w.row(k);
      for (size_t j = 0; j < d; ++j) w[j] -= step * g[j] + options.learning_rate * options.l2 * w[j];
      p.biases[k] -= step * grad_b[k];
    }
  }
  return p;
}

// "APRB": u16 version=1, u32 n_classes, u32 dim, f64 mean[dim], f64 inv_scale[dim],
// f64 weights[n_classes*dim], f64 biases[n_classes].
inline void write_probe(io::BinaryWriter& w, const SoftmaxProbe& p) {
  w.magic("APRB");
  w.put<uint16_t>(1);
  w.put<uint32_t>(static_cast<uint32_t>(p.n_classes));
  w.put<uint32_t>(static_cast<uint32_t>(p.dim()));
  w.put_array(p.mean.data(), p.mean.size());
  w.put_array(p.inv_scale.data(), p.inv_scale.size());
  w.put_array(p.weights.data().data(), p.weights.data().size());
  w.put_array(p.biases.data(), p.biases.size());
}

inline SoftmaxProbe read_probe(io::BinaryReader& r) {
  r.expect_magic("APRB");
  if (r.get<uint16_t>() != 1) throw FormatError(r.path().string() + ": unsupported probe version");
  SoftmaxProbe p;
  p.n_classes = r.get<uint32_t>();
  const size_t d = r.get<uint32_t>();
  p.mean.resize(d);
  p.inv_scale.resize(d);
  p.weights = DenseMatrix(p.n_classes, d);
  p.biases.resize(p.n_classes);
  r.get_array(p.mean.data(), d);
  r.get_array(p.inv_scale.data(), d);
  r.get_array(p.weights.data().data(), p.weights.data().size());
  r.get_array(p.biases.data(), p.n_classes);
  return p;
}

// One crop's vote: slot 0..9 (five RGB then five flow), its label and its
// class distribution.
struct CropPrediction {
  size_t crop = 0;
  int label = 0;
  std::vector<double> scores;
};

inline CropPrediction make_crop_prediction(size_t crop, std::vector<double> scores) {
  detail::require(!scores.empty(), "crop prediction needs scores");
  double sum = 0;
  for (double s : scores) {
    detail::require(s >= 0 && std::isfinite(s), "crop scores must be nonnegative");
    sum += s;
  }
  detail::require(sum > 0, "crop scores must not all be zero");
  for (double& s : scores) s /= sum;
  const int label = static_cast<int>(std::max_element(scores.begin(), scores.end()) - scores.begin());
  return {crop, label, std::move(scores)};
}

// Most votes wins; ties go to the larger summed confidence of the tied
// classes' own voters, then to the smaller class index.
inline int majority_vote(std::span<const CropPrediction> predictions) {
  detail::require(!predictions.empty(), "majority vote over no predictions");
  const size_t n_classes = predictions.front().scores.size();
  std::vector<size_t> votes(n_classes, 0);
  std::vector<std::vector<double>> voter_scores(n_classes);
  for (const CropPrediction& p : predictions) {
    detail::require(p.scores.size() == n_classes, "crop predictions disagree on the class set");
    detail::require(p.label >= 0 && static_cast<size_t>(p.label) < n_classes, "crop label outside class set");
    ++votes[static_cast<size_t>(p.label)];
    voter_scores[static_cast<size_t>(p.label)].push_back(p.scores[static_cast<size_t>(p.label)]);
  }
  // Summed in sorted order so the result does not depend on input order.
  std::vector<double> confidence(n_classes, 0.0);
  for (size_t k = 0; k < n_classes; ++k) {
    std::sort(voter_scores[k].begin(), voter_scores[k].end());
    for (double s : voter_scores[k]) confidence[k] += s;
  }
  size_t best = 0;
  for (size_t k = 1; k < n_classes; ++k) {
    if (votes[k] > votes[best] || (votes[k] == votes[best] && confidence[k] > confidence[best])) best = k;
  }
  return static_cast<int>(best);
}

}  // namespace actionpipe

#endif  // ACTIONPIPE_BASELINE_HPP_
