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

// The boundary to the per-crop feature extractor, plus two stand-ins for a
// pretrained network: a deterministic statistics projection and a lookup into
// precomputed vectors.

#ifndef ACTIONPIPE_EXTRACTOR_HPP_
#define ACTIONPIPE_EXTRACTOR_HPP_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <numbers>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "actionpipe/binary_io.hpp"
#include "actionpipe/error.hpp"
#include "actionpipe/features.hpp"
#include "actionpipe/geometry.hpp"
#include "actionpipe/rng.hpp"
#include "actionpipe/video.hpp"

namespace actionpipe {

// One crop volume handed to an extractor. RGB crops carry 3 channels in the
// unit interval, flow crops 2 channels (u, v).
struct CropInput {
  std::string_view video_id;
  Stream stream = Stream::Rgb;
  CropPosition position = CropPosition::TopLeft;
  const Video<float>* pixels = nullptr;
};

class FeatureExtractor {
 public:
  virtual ~FeatureExtractor() = default;
  virtual FeatureVector extract(const CropInput& crop) const = 0;
  virtual size_t dim() const = 0;
  virtual std::string id() const = 0;
  // False when the extractor never reads crop pixels.
  virtual bool needs_pixels() const { return true; }
};

// Per-frame channel means and variances followed by per-channel mean absolute
// differences between consecutive frames.
inline std::vector<double> crop_statistics(const Video<float>& crop) {
  const size_t t = crop.frames(), ch = crop.channels();
  const size_t px = crop.rows() * crop.cols();
  detail::require(t >= 1 && px >= 1 && ch >= 1, "crop must be non-empty");
  std::vector<double> stats;
  stats.reserve(2 * t * ch + (t - 1) * ch);
  for (size_t f = 0; f < t; ++f) {
    const auto frame = crop.frame(f);
    for (size_t k = 0; k < ch; ++k) {
      double sum = 0, sq = 0;
      for (size_t i = 0; i < px; ++i) {
        const double x = frame[i * ch + k];
        sum += x;
        sq += x * x;
      }
      const double mean = sum / static_cast<double>(px);
      stats.push_back(mean);
      stats.push_back(std::max(0.0, sq / static_cast<double>(px) - mean * mean));
    }
  }
  for (size_t f = 1; f < t; ++f) {
    const auto prev = crop.frame(f - 1), next = crop.frame(f);
    for (size_t k = 0; k < ch; ++k) {
      double diff = 0;
      for (size_t i = 0; i < px; ++i) diff += std::fabs(static_cast<double>(next[i * ch + k]) - prev[i * ch + k]);
      stats.push_back(diff / static_cast<double>(px));
    }
  }
  return stats;
}

// Deterministic stand-in: a fixed Gaussian random projection of
// crop_statistics. Matrix entries are a pure function of
// (seed, stream, dim, row, col), so no state is kept between calls.
class MockExtractor final : public FeatureExtractor {
 public:
  static constexpr uint64_t kDefaultSeed = 0x5eedf00dULL;

  explicit MockExtractor(size_t dim, uint64_t seed = kDefaultSeed) : dim_(dim), seed_(seed) {
    detail::require(dim >= 1, "feature dimension must be >= 1");
  }

  size_t dim() const override { return dim_; }
  std::string id() const override { return "mock"; }

  double projection(Stream s, size_t row, size_t col) const {
    const uint64_t a = rng::counter_hash(seed_, static_cast<uint64_t>(s), dim_, row, col, 0);
    const uint64_t b = rng::counter_hash(seed_, static_cast<uint64_t>(s), dim_, row, col, 1);
    const double u1 = 1.0 - rng::to_unit(a);
    const double u2 = rng::to_unit(b);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  FeatureVector extract(const CropInput& crop) const override {
    detail::require(crop.pixels != nullptr, "mock extractor needs crop pixels");
    const std::vector<double> stats = crop_statistics(*crop.pixels);
    const double norm = 1.0 / std::sqrt(static_cast<double>(stats.size()));
    FeatureVector out{std::vector<float>(dim_)};
    for (size_t i = 0; i < dim_; ++i) {
      double acc = 0;
      for (size_t j = 0; j < stats.size(); ++j) acc += projection(crop.stream, i, j) * stats[j];
      out.values[i] = static_cast<float>(acc * norm);
    }
    return out;
  }

 private:
  size_t dim_;
  uint64_t seed_;
};

struct FeatureKey {
  std::string video_id;
  Stream stream = Stream::Rgb;
  CropPosition crop = CropPosition::TopLeft;

  friend auto operator<=>(const FeatureKey&, const FeatureKey&) = default;
};

struct FeatureRecord {
  FeatureKey key;
  FeatureVector vector;
};

// Little-endian "AFV1" container:
//   magic "AFV1", u16 version=1, u32 record_count, u32 D,
//   per record: u16 id_len, id bytes, u8 stream, u8 crop, D x f32.
struct FeatureFile {
  static constexpr uint16_t kVersion = 1;

  size_t dim = 0;
  std::vector<FeatureRecord> records;

  void write(const std::filesystem::path& path) const {
    io::BinaryWriter w(path);
    w.magic("AFV1");
    w.put<uint16_t>(kVersion);
    w.put<uint32_t>(static_cast<uint32_t>(records.size()));
    w.put<uint32_t>(static_cast<uint32_t>(dim));
    for (const FeatureRecord& r : records) {
      detail::require(r.vector.dim() == dim, "record dimension differs from file dimension");
      detail::require(r.key.video_id.size() <= UINT16_MAX, "video id too long");
      w.put<uint16_t>(static_cast<uint16_t>(r.key.video_id.size()));
      w.bytes(r.key.video_id.data(), r.key.video_id.size());
      w.put<uint8_t>(static_cast<uint8_t>(r.key.stream));
      w.put<uint8_t>(static_cast<uint8_t>(r.key.crop));
      w.put_array(r.vector.values.data(), dim);
    }
    w.close();
  }

  static FeatureFile read(const std::filesystem::path& path) {
    io::BinaryReader r(path);
    r.expect_magic("AFV1");
    if (const auto version = r.get<uint16_t>(); version != kVersion)
      throw FormatError(path.string() + ": unsupported feature file version " + std::to_string(version));
    FeatureFile file;
    const uint32_t count = r.get<uint32_t>();
    file.dim = r.get<uint32_t>();
    std::map<FeatureKey, size_t> seen;
    file.records.reserve(count);
    for (uint32_t i = 0; i < count; ++i) {
      FeatureRecord rec;
      rec.key.video_id = r.get_string(r.get<uint16_t>());
      const auto stream = r.get<uint8_t>();
      const auto crop = r.get<uint8_t>();
      if (stream > 1) throw FormatError(path.string() + ": bad stream tag");
      if (crop > 4) throw FormatError(path.string() + ": bad crop index");
      rec.key.stream = static_cast<Stream>(stream);
      rec.key.crop = static_cast<CropPosition>(crop);
      rec.vector.values.resize(file.dim);
      r.get_array(rec.vector.values.data(), file.dim);
      if (!seen.emplace(rec.key, i).second)
        throw FormatError(path.string() + ": duplicate record for " + rec.key.video_id + "/" + stream_name(rec.key.stream) +
                          "/" + crop_name(rec.key.crop));
      file.records.push_back(std::move(rec));
    }
    if (r.remaining() != 0) throw FormatError(path.string() + ": trailing bytes");
    return file;
  }
};

// Looks vectors up by (video id, stream, crop).
class FileExtractor final : public FeatureExtractor {
 public:
  explicit FileExtractor(const FeatureFile& file, size_t expected_dim = 0) : dim_(file.dim) {
    detail::require(expected_dim == 0 || expected_dim == file.dim,
                    "feature file dimension " + std::to_string(file.dim) + " does not match expected " +
                        std::to_string(expected_dim));
    for (const FeatureRecord& r : file.records) table_.emplace(r.key, r.vector);
  }

  static FileExtractor load(const std::filesystem::path& path, size_t expected_dim = 0) {
    return FileExtractor(FeatureFile::read(path), expected_dim);
  }

  size_t dim() const override { return dim_; }
  std::string id() const override { return "file"; }
  bool needs_pixels() const override { return false; }

  FeatureVector extract(const CropInput& crop) const override {
    const auto it = table_.find(FeatureKey{std::string(crop.video_id), crop.stream, crop.position});
    if (it == table_.end())
      throw InvalidArgument("no precomputed feature for " + std::string(crop.video_id) + "/" + stream_name(crop.stream) +
                            "/" + crop_name(crop.position));
    return it->second;
  }

 private:
  size_t dim_;
  std::map<FeatureKey, FeatureVector> table_;
};

}  // namespace actionpipe

#endif  // ACTIONPIPE_EXTRACTOR_HPP_
