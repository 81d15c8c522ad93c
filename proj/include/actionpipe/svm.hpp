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

// Linear SVM trained in the dual by coordinate descent, and the one-vs-rest
// multiclass wrapper around it.
//
// The bias is folded into the weight vector by appending a constant feature of
// 1 to every sample, so the objective actually minimized is
//
//   P(w, b) = 1/2 (|w|^2 + b^2) + C * sum_i max(0, 1 - y_i (w.x_i + b))
//
// with dual  D(a) = sum_i a_i - 1/2 |sum_i a_i y_i [x_i; 1]|^2,  0 <= a_i <= C.

#ifndef ACTIONPIPE_SVM_HPP_
#define ACTIONPIPE_SVM_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "actionpipe/binary_io.hpp"
#include "actionpipe/error.hpp"
#include "actionpipe/matrix.hpp"
#include "actionpipe/pca.hpp"
#include "actionpipe/rng.hpp"

namespace actionpipe {

struct SvmSolverOptions {
  double tolerance = 1e-4;  // max projected-gradient violation
  int max_epochs = 1000;
  uint64_t seed = 1;  // coordinate visiting order
};

struct BinarySvm {
  std::vector<double> w;
  double b = 0.0;
  std::vector<double> alpha;  // dual variables, one per sample
  int epochs = 0;
  bool converged = false;

  double decision(std::span<const double> x) const { return dot(w, x) + b; }
};

inline double svm_primal_objective(const DenseMatrix& x, std::span<const int> y, std::span<const double> w, double b,
                                   double c) {
  double reg = b * b;
  for (double wi : w) reg += wi * wi;
  double loss = 0.0;
  for (size_t i = 0; i < x.rows(); ++i) loss += std::max(0.0, 1.0 - y[i] * (dot(w, x.row(i)) + b));
  return 0.5 * reg + c * loss;
}

inline double svm_dual_objective(const DenseMatrix& x, std::span<const int> y, std::span<const double> alpha) {
  std::vector<double> w(x.cols(), 0.0);
  double b = 0.0, sum = 0.0;
  for (size_t i = 0; i < x.rows(); ++i) {
    const double ay = alpha[i] * y[i];
    const auto row = x.row(i);
    for (size_t j = 0; j < w.size(); ++j) w[j] += ay * row[j];
    b += ay;
    sum += alpha[i];
  }
  return sum - 0.5 * (dot(w, w) + b * b);
}

inline BinarySvm train_binary_svm(const DenseMatrix& x, std::span<const int> y, double c,
                                  const SvmSolverOptions& options = {}) {
  const size_t n = x.rows(), d = x.cols();
  detail::require(n >= 2, "binary SVM needs at least two samples");
  detail::require(y.size() == n, "label count does not match sample count");
  detail::require(c > 0 && std::isfinite(c), "C must be positive");
  bool pos = false, neg = false;
  for (int label : y) {
    detail::require(label == 1 || label == -1, "binary labels must be +1 or -1");
    (label > 0 ? pos : neg) = true;
  }
  detail::require(pos && neg, "binary SVM needs both classes present");
  for (double v : x.data()) detail::require(std::isfinite(v), "features must be finite");

  BinarySvm m;
  m.w.assign(d, 0.0);
  m.alpha.assign(n, 0.0);
  std::vector<double> qd(n);
  for (size_t i = 0; i < n; ++i) qd[i] = dot(x.row(i), x.row(i)) + 1.0;

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng::SplitMix gen(options.seed);

  for (m.epochs = 0; m.epochs < options.max_epochs; ++m.epochs) {
    rng::shuffle(order, gen);
    double max_violation = 0.0;
    for (size_t i : order) {
      const auto row = x.row(i);
      const double yi = y[i];
      const double g = yi * (dot(m.w, row) + m.b) - 1.0;
      double pg = g;
      if (m.alpha[i] <= 0.0) pg = std::min(g, 0.0);
      else if (m.alpha[i] >= c) pg = std::max(g, 0.0);
      max_violation = std::max(max_violation, std::fabs(pg));
      if (pg == 0.0) continue;
      const double old = m.alpha[i];
      m.alpha[i] = std::clamp(old - g / qd[i], 0.0, c);
      const double step = (m.alpha[i] - old) * yi;
      if (step == 0.0) continue;
      for (size_t j = 0; j < d; ++j) m.w[j] += step * row[j];
      m.b += step;
    }
    if (max_violation < options.tolerance) {
      m.converged = true;
      ++m.epochs;
      break;
    }
  }
  return m;
}

// One weight row and bias per class, optionally preceded by a PCA projection.
struct LinearSvmModel {
  size_t n_classes = 0;
  size_t dim = 0;
  DenseMatrix weights;  // n_classes x dim
  std::vector<double> biases;
  double c = 1.0;
  std::optional<PcaModel> pca;

  friend bool operator==(const LinearSvmModel&, const LinearSvmModel&) = default;
};

inline LinearSvmModel train_ovr(const DenseMatrix& x, std::span<const int> labels, size_t n_classes, double c,
                                const SvmSolverOptions& options = {}) {
  detail::require(n_classes >= 2, "one-vs-rest needs at least two classes");
  detail::require(labels.size() == x.rows(), "label count does not match sample count");
  std::vector<size_t> counts(n_classes, 0);
  for (int label : labels) {
    detail::require(label >= 0 && static_cast<size_t>(label) < n_classes, "label outside class range");
    ++counts[static_cast<size_t>(label)];
  }
  for (size_t k = 0; k < n_classes; ++k)
    detail::require(counts[k] > 0, "class " + std::to_string(k) + " has no training samples");

  LinearSvmModel model;
  model.n_classes = n_classes;
  model.dim = x.cols();
  model.weights = DenseMatrix(n_classes, x.cols());
  model.biases.assign(n_classes, 0.0);
  model.c = c;
  std::vector<int> y(labels.size());
  for (size_t k = 0; k < n_classes; ++k) {
    for (size_t i = 0; i < labels.size(); ++i) y[i] = labels[i] == static_cast<int>(k) ? 1 : -1;
    const BinarySvm m = train_binary_svm(x, y, c, options);
    std::copy(m.w.begin(), m.w.end(), model.weights.row(k).begin());
    model.biases[k] = m.b;
  }
  return model;
}

struct Prediction {
  int label = 0;
  std::vector<double> scores;
};

// argmax of w_c.x + b_c; ties go to the smallest class index.
inline Prediction predict(const LinearSvmModel& model, std::span<const double> x) {
  detail::require(x.size() == model.dim, "input dimension " + std::to_string(x.size()) + " does not match model dimension " +
                                             std::to_string(model.dim));
  Prediction p;
  p.scores.resize(model.n_classes);
  for (size_t k = 0; k < model.n_classes; ++k) {
    p.scores[k] = dot(model.weights.row(k), x) + model.biases[k];
    if (p.scores[k] > p.scores[static_cast<size_t>(p.label)]) p.label = static_cast<int>(k);
  }
  return p;
}

// Applies the attached PCA (if any) to a raw normalized vector before scoring.
inline Prediction predict_raw(const LinearSvmModel& model, std::span<const double> x) {
  if (!model.pca) return predict(model, x);
  const std::vector<double> reduced = pca_project(*model.pca, x);
  return predict(model, reduced);
}

// Little-endian "ASVM" container:
//   magic "ASVM", u16 version=1, u32 n_classes, u32 dim, f64 C,
//   per class: dim x f32 weights, f32 bias, then the PCA block.
inline void write_model(const LinearSvmModel& model, const std::filesystem::path& path) {
  io::BinaryWriter w(path);
  w.magic("ASVM");
  w.put<uint16_t>(1);
  w.put<uint32_t>(static_cast<uint32_t>(model.n_classes));
  w.put<uint32_t>(static_cast<uint32_t>(model.dim));
  w.put<double>(model.c);
  for (size_t k = 0; k < model.n_classes; ++k) {
    for (double v : model.weights.row(k)) w.put<float>(static_cast<float>(v));
    w.put<float>(static_cast<float>(model.biases[k]));
  }
  write_pca_block(w, model.pca ? &*model.pca : nullptr);
  w.close();
}

inline LinearSvmModel read_model(const std::filesystem::path& path) {
  io::BinaryReader r(path);
  r.expect_magic("ASVM");
  if (const auto version = r.get<uint16_t>(); version != 1)
    throw FormatError(path.string() + ": unsupported model version " + std::to_string(version));
  LinearSvmModel model;
  model.n_classes = r.get<uint32_t>();
  model.dim = r.get<uint32_t>();
  model.c = r.get<double>();
  if (model.n_classes < 2) throw FormatError(path.string() + ": model needs at least two classes");
  model.weights = DenseMatrix(model.n_classes, model.dim);
  model.biases.resize(model.n_classes);
  for (size_t k = 0; k < model.n_classes; ++k) {
    for (double& v : model.weights.row(k)) v = r.get<float>();
    model.biases[k] = r.get<float>();
  }
  model.pca = read_pca_block(r);
  if (model.pca && model.pca->output_dim() != model.dim)
    throw FormatError(path.string() + ": PCA output dimension does not match model dimension");
  return model;
}

}  // namespace actionpipe

#endif  // ACTIONPIPE_SVM_HPP_
