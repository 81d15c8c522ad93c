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

#ifndef ACTIONPIPE_PCA_HPP_
#define ACTIONPIPE_PCA_HPP_

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "actionpipe/binary_io.hpp"
#include "actionpipe/error.hpp"
#include "actionpipe/features.hpp"
#include "actionpipe/matrix.hpp"

namespace actionpipe {

// Mean vector plus k orthonormal principal directions (rows of `components`).
struct PcaModel {
  std::vector<double> mean;
  DenseMatrix components;  // k x input_dim
  std::vector<double> explained_variance;
  bool rank_deficient = false;

  size_t input_dim() const { return mean.size(); }
  size_t output_dim() const { return components.rows(); }
  friend bool operator==(const PcaModel&, const PcaModel&) = default;
};

inline constexpr double kRankDeficientVariance = 1e-12;

// Top-k right singular directions of the centered data. Each direction is
// signed so that its largest-magnitude entry (first one on ties) is positive.
inline PcaModel pca_fit(const DenseMatrix& samples, size_t k) {
  const size_t n = samples.rows(), d = samples.cols();
  detail::require(n >= 2, "PCA needs at least two samples");
  detail::require(k >= 1 && k <= std::min(n - 1, d),
                  "PCA dimension " + std::to_string(k) + " outside [1, " + std::to_string(std::min(n - 1, d)) + "]");

  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMajor> x(samples.data().data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - mean;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);

  PcaModel model;
  model.mean.assign(mean.data(), mean.data() + d);
  model.components = DenseMatrix(k, d);
  model.explained_variance.resize(k);
  const auto& sv = svd.singularValues();
  const auto& v = svd.matrixV();
  for (size_t i = 0; i < k; ++i) {
    const auto col = v.col(static_cast<Eigen::Index>(i));
    Eigen::Index pivot = 0;
    for (Eigen::Index j = 1; j < col.size(); ++j)
      if (std::fabs(col(j)) > std::fabs(col(pivot))) pivot = j;
    const double sign = col(pivot) < 0 ? -1.0 : 1.0;
    for (size_t j = 0; j < d; ++j) model.components(i, j) = sign * col(static_cast<Eigen::Index>(j));
    const double s = sv(static_cast<Eigen::Index>(i));
    model.explained_variance[i] = s * s / static_cast<double>(n - 1);
  }
  model.rank_deficient = model.explained_variance[k - 1] < kRankDeficientVariance;
  return model;
}

inline PcaModel pca_fit(const std::vector<EncodedSample>& samples, size_t k) {
  std::vector<std::vector<double>> rows;
  rows.reserve(samples.size());
  for (const EncodedSample& s : samples) {
    detail::require(s.stage == EncodingStage::Normalized, "PCA is fit on power-normalized samples");
    rows.push_back(s.vector);
  }
  return pca_fit(DenseMatrix::from_rows(rows), k);
}

inline std::vector<double> pca_project(const PcaModel& model, std::span<const double> x) {
  detail::require(x.size() == model.input_dim(), "PCA input has dimension " + std::to_string(x.size()) +
                                                     ", model expects " + std::to_string(model.input_dim()));
  std::vector<double> centered(x.size());
  for (size_t j = 0; j < x.size(); ++j) centered[j] = x[j] - model.mean[j];
  std::vector<double> out(model.output_dim());
  for (size_t i = 0; i < out.size(); ++i) out[i] = dot(model.components.row(i), centered);
  return out;
}

inline std::vector<double> pca_reconstruct(const PcaModel& model, std::span<const double> y) {
  detail::require(y.size() == model.output_dim(), "reduced vector has the wrong dimension");
  std::vector<double> out = model.mean;
  for (size_t i = 0; i < y.size(); ++i) {
    const auto c = model.components.row(i);
    for (size_t j = 0; j < out.size(); ++j) out[j] += y[i] * c[j];
  }
  return out;
}

inline EncodedSample pca_transform(const PcaModel& model, const EncodedSample& sample) {
  detail::require(sample.stage == EncodingStage::Normalized, "PCA transform applies to power-normalized samples");
  return {sample.video_id, sample.label, pca_project(model, sample.vector), EncodingStage::Reduced};
}

// Serialized block shared by the model and encoded-store files:
//   u8 present, u32 k, mean (f32 x input_dim), components (k x input_dim f32),
//   variances (k x f32).
// The block does not record input_dim; it is recovered from the byte count,
// so the block must end its file.
inline void write_pca_block(io::BinaryWriter& w, const PcaModel* model) {
  if (model == nullptr) {
    w.put<uint8_t>(0);
    return;
  }
  w.put<uint8_t>(1);
  w.put<uint32_t>(static_cast<uint32_t>(model->output_dim()));
  for (double m : model->mean) w.put<float>(static_cast<float>(m));
  for (double c : model->components.data()) w.put<float>(static_cast<float>(c));
  for (double v : model->explained_variance) w.put<float>(static_cast<float>(v));
}

inline std::optional<PcaModel> read_pca_block(io::BinaryReader& r) {
  const auto present = r.get<uint8_t>();
  if (present == 0) {
    if (r.remaining() != 0) throw FormatError(r.path().string() + ": trailing bytes after empty PCA block");
    return std::nullopt;
  }
  if (present != 1) throw FormatError(r.path().string() + ": bad PCA presence flag");
  const size_t k = r.get<uint32_t>();
  const size_t floats = r.remaining() / sizeof(float);
  if (k == 0 || r.remaining() % sizeof(float) != 0 || floats < k || (floats - k) % (k + 1) != 0)
    throw FormatError(r.path().string() + ": PCA block size is inconsistent");
  const size_t input_dim = (floats - k) / (k + 1);
  PcaModel model;
  std::vector<float> buf(input_dim * k);
  model.mean.resize(input_dim);
  for (double& m : model.mean) m = r.get<float>();
  r.get_array(buf.data(), buf.size());
  model.components = DenseMatrix(k, input_dim);
  std::copy(buf.begin(), buf.end(), model.components.data().begin());
  model.explained_variance.resize(k);
  for (double& v : model.explained_variance) v = r.get<float>();
  model.rank_deficient = model.explained_variance.back() < kRankDeficientVariance;
  return model;
}

}  // namespace actionpipe

#endif  // ACTIONPIPE_PCA_HPP_
