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

// End-to-end orchestration: preprocess -> extract -> encode -> train ->
// evaluate. Each stage persists its output under the configured directory so
// later stages (and ablations) can be rerun on their own.

#ifndef ACTIONPIPE_PIPELINE_HPP_
#define ACTIONPIPE_PIPELINE_HPP_

#include <array>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "actionpipe/baseline.hpp"
#include "actionpipe/config.hpp"
#include "actionpipe/error.hpp"
#include "actionpipe/extractor.hpp"
#include "actionpipe/features.hpp"
#include "actionpipe/flow.hpp"
#include "actionpipe/geometry.hpp"
#include "actionpipe/grid_search.hpp"
#include "actionpipe/manifest.hpp"
#include "actionpipe/metrics.hpp"
#include "actionpipe/parallel.hpp"
#include "actionpipe/pca.hpp"
#include "actionpipe/svm.hpp"
#include "actionpipe/temporal.hpp"
#include "actionpipe/video.hpp"
#include "actionpipe/video_io.hpp"

namespace actionpipe {

// Stage bookkeeping --------------------------------------------------------

enum class Stage : uint8_t { Normalize, Flow, TemporalSample, Resize, FlowRescale, Crop };

inline const char* stage_name(Stage s) {
  switch (s) {
    case Stage::Normalize: return "normalize";
    case Stage::Flow: return "flow";
    case Stage::TemporalSample: return "sample";
    case Stage::Resize: return "resize";
    case Stage::FlowRescale: return "rescale";
    case Stage::Crop: return "crop";
  }
  return "?";
}

struct StageLog {
  std::vector<Stage> stages;

  void record(Stage s) { stages.push_back(s); }

  // Flow before any resampling, rescale after resize, crops last. The
  // rescale entry is absent when flow scaling is off.
  bool well_ordered() const {
    static const std::vector<Stage> full = {Stage::Normalize, Stage::Flow,        Stage::TemporalSample,
                                            Stage::Resize,    Stage::FlowRescale, Stage::Crop};
    std::vector<Stage> without_rescale = full;
    without_rescale.erase(without_rescale.begin() + 4);
    return stages == full || stages == without_rescale;
  }

  std::string str() const {
    std::string s;
    for (Stage st : stages) s += (s.empty() ? "" : ",") + std::string(stage_name(st));
    return s;
  }
};

// Per-video preprocessing ---------------------------------------------------

struct PreprocessInfo {
  size_t source_frames = 0;
  size_t flow_frames = 0;
  Extent original;
  Extent resized;
  ScalePair scale;
  bool scaled = false;
  SamplingPlan rgb_plan;
  SamplingPlan flow_plan;
  CropGeometry geometry;
  StageLog log;
};

struct PreprocessedVideo {
  std::array<RgbVideo, 5> rgb;
  std::array<FlowVideo, 5> flow;
  PreprocessInfo info;
};

inline std::unique_ptr<FlowEstimator> make_flow_estimator(const PipelineConfig& cfg) {
  if (cfg.flow_algorithm == "horn-schunck") return std::make_unique<HornSchunckEstimator>(cfg.flow_params);
  throw InvalidArgument("unknown flow algorithm '" + cfg.flow_algorithm + "'");
}

// The fill mode only governs clips shorter than T. The flow stream of a clip
// with exactly T frames has T-1 fields and is always lengthened by the
// figure rule, so switching modes leaves clips with t_v >= T untouched.
inline SamplingPlan flow_plan_for(size_t source_frames, size_t flow_frames, const PipelineConfig& cfg) {
  const CropFillMode mode = source_frames < cfg.frames ? cfg.crop_fill : CropFillMode::Figure;
  return sample_indices(flow_frames, cfg.frames, mode);
}

inline PreprocessedVideo preprocess_video(const RgbVideo& raw, const PipelineConfig& cfg, const FlowEstimator& estimator) {
  detail::require(raw.domain == ValueDomain::Raw8, "preprocessing expects 8-bit input video");
  detail::require(raw.frames() >= 2, "clip has " + std::to_string(raw.frames()) + " frame(s); flow needs at least two");
  PreprocessedVideo out;
  PreprocessInfo& info = out.info;
  info.source_frames = raw.frames();
  info.original = {raw.rows(), raw.cols()};

  const GrayVideo gray = to_grayscale(raw);
  const RgbVideo normalized = normalize_pixels(raw);
  info.log.record(Stage::Normalize);

  const FlowVideo flow = compute_flow_video(gray, estimator);
  info.flow_frames = flow.frames();
  info.log.record(Stage::Flow);

  info.rgb_plan = sample_indices(raw.frames(), cfg.frames, cfg.crop_fill);
  info.flow_plan = flow_plan_for(raw.frames(), flow.frames(), cfg);
  const RgbVideo v_sampled = apply_plan(normalized, info.rgb_plan);
  const FlowVideo f_sampled = flow_from_video(apply_plan(to_video(flow), info.flow_plan));
  info.log.record(Stage::TemporalSample);

  const RgbVideo v_resized = resize_shorter_side(v_sampled, cfg.s1);
  FlowVideo f_resized = resize_shorter_side(f_sampled, cfg.s1);
  info.resized = {v_resized.rows(), v_resized.cols()};
  info.log.record(Stage::Resize);

  if (cfg.flow_scaling) {
    info.scale = scale_factors(info.original.rows, info.original.cols, info.resized.rows, info.resized.cols,
                               cfg.flow_scale_mode);
    info.scaled = true;
    f_resized = rescale_flow(f_resized, info.scale);
    info.log.record(Stage::FlowRescale);
  }

  info.geometry = five_crop_geometry(info.resized.rows, info.resized.cols, cfg.s1);
  out.rgb = apply_crops(v_resized, info.geometry);
  out.flow = apply_crops(f_resized, info.geometry);
  info.log.record(Stage::Crop);
  if (!info.log.well_ordered()) throw Error("internal: stage order violated: " + info.log.str());
  return out;
}

// Output layout --------------------------------------------------------------

struct OutputLayout {
  std::filesystem::path root;

  std::filesystem::path crops_dir() const { return root / "crops"; }
  std::filesystem::path crop_index() const { return crops_dir() / "index.tsv"; }
  std::filesystem::path crop_file(const std::string& id, Stream s, CropPosition p) const {
    return crops_dir() / id / (std::string(stream_name(s)) + "_" + crop_name(p) + ".argv");
  }
  std::filesystem::path features() const { return root / "features.afv"; }
  std::filesystem::path encoded() const { return root / "encoded.aenc"; }
  std::filesystem::path model() const { return root / "model.asvm"; }
  std::filesystem::path probes() const { return root / "probes.bin"; }
  std::filesystem::path grid_report() const { return root / "grid.tsv"; }
  std::filesystem::path report_tsv() const { return root / "report.tsv"; }
  std::filesystem::path report_jsonl() const { return root / "report.jsonl"; }
  std::filesystem::path confusion(const std::string& pipeline) const { return root / ("confusion_" + pipeline + ".tsv"); }
  std::filesystem::path log() const { return root / "log.jsonl"; }
};

// Append-only line-delimited JSON event log. Carries no timestamps so reruns
// produce identical bytes.
class EventLog {
 public:
  explicit EventLog(std::filesystem::path path) : path_(std::move(path)) {}

  void write(const nlohmann::ordered_json& event) {
    std::lock_guard lock(mutex_);
    std::ofstream out(path_, std::ios::app | std::ios::binary);
    out << event.dump() << '\n';
  }

 private:
  std::filesystem::path path_;
  std::mutex mutex_;
};

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline LabelMap load_labels(const PipelineConfig& cfg, const SplitManifest& manifest) {
  return cfg.labels.empty() ? LabelMap::from_manifest(manifest) : LabelMap::read(cfg.labels);
}

// Stage 1: preprocess ---------------------------------------------------------

struct PreprocessSummary {
  std::vector<std::string> processed;
  std::vector<std::pair<std::string, std::string>> failed;  // id, reason
};

inline PreprocessSummary run_preprocess(const PipelineConfig& cfg, const SplitManifest& manifest) {
  cfg.validate();
  const OutputLayout layout{cfg.out};
  std::filesystem::create_directories(layout.crops_dir());
  EventLog log(layout.log());
  const auto estimator = make_flow_estimator(cfg);

  const size_t n = manifest.records.size();
  std::vector<std::optional<PreprocessInfo>> infos(n);
  std::vector<std::string> errors(n);
  parallel_for(n, cfg.resolved_threads(), [&](size_t i) {
    const ManifestRecord& rec = manifest.records[i];
    try {
      const RgbVideo raw = load_rgb_video(manifest.resolve(rec));
      PreprocessedVideo pv = preprocess_video(raw, cfg, *estimator);
      std::filesystem::create_directories(layout.crops_dir() / rec.video_id);
      for (CropPosition p : kCropOrder) {
        const size_t k = static_cast<size_t>(p);
        write_argv(pv.rgb[k].pixels, layout.crop_file(rec.video_id, Stream::Rgb, p));
        write_flow(pv.flow[k], layout.crop_file(rec.video_id, Stream::Flow, p));
      }
      infos[i] = std::move(pv.info);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  PreprocessSummary summary;
  std::ofstream index(layout.crop_index(), std::ios::binary | std::ios::trunc);
  index << "# video_id\tframes\tflow_frames\trows\tcols\tresized_rows\tresized_cols\tcrop_side\ts_x\ts_y\tstages\n";
  for (size_t i = 0; i < n; ++i) {
    const std::string& id = manifest.records[i].video_id;
    if (!infos[i]) {
      summary.failed.emplace_back(id, errors[i]);
      log.write({{"stage", "preprocess"}, {"video", id}, {"status", "failed"}, {"error", errors[i]}});
      continue;
    }
    const PreprocessInfo& info = *infos[i];
    summary.processed.push_back(id);
    index << id << '\t' << info.source_frames << '\t' << info.flow_frames << '\t' << info.original.rows << '\t'
          << info.original.cols << '\t' << info.resized.rows << '\t' << info.resized.cols << '\t' << info.geometry.side
          << '\t' << format_double(info.scale.s_x) << '\t' << format_double(info.scale.s_y) << '\t' << info.log.str()
          << '\n';
  }
  log.write({{"stage", "preprocess"}, {"processed", summary.processed.size()}, {"failed", summary.failed.size()}});
  return summary;
}

inline std::vector<std::string> read_crop_index(const OutputLayout& layout) {
  std::ifstream in(layout.crop_index());
  if (!in) throw IoError("no crop index at " + layout.crop_index().string() + "; run preprocess first");
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    ids.push_back(line.substr(0, line.find('\t')));
  }
  return ids;
}

// Stage 2: extract ----------------------------------------------------------

inline std::unique_ptr<FeatureExtractor> make_extractor(const PipelineConfig& cfg) {
  if (cfg.extractor == ExtractorKind::Mock) return std::make_unique<MockExtractor>(cfg.feature_dim);
  return std::make_unique<FileExtractor>(FileExtractor::load(cfg.feature_file));
}

// Runs the extractor over every (stream, crop) slot of every preprocessed
// manifest video, in manifest order.
inline FeatureFile run_extract(const PipelineConfig& cfg, const SplitManifest& manifest) {
  cfg.validate();
  const OutputLayout layout{cfg.out};
  std::filesystem::create_directories(layout.root);
  EventLog log(layout.log());
  const auto extractor = make_extractor(cfg);

  std::vector<const ManifestRecord*> videos;
  if (extractor->needs_pixels()) {
    const auto indexed = read_crop_index(layout);
    const std::set<std::string> available(indexed.begin(), indexed.end());
    for (const ManifestRecord& r : manifest.records) {
      if (available.count(r.video_id)) videos.push_back(&r);
      else log.write({{"stage", "extract"}, {"video", r.video_id}, {"status", "skipped"}, {"reason", "not preprocessed"}});
    }
  } else {
    for (const ManifestRecord& r : manifest.records) videos.push_back(&r);
  }

  FeatureFile file;
  file.dim = extractor->dim();
  std::vector<std::array<FeatureVector, kCropsPerVideo>> vectors(videos.size());
  parallel_for(videos.size(), cfg.resolved_threads(), [&](size_t i) {
    const std::string& id = videos[i]->video_id;
    for (Stream s : {Stream::Rgb, Stream::Flow}) {
      for (CropPosition p : kCropOrder) {
        std::optional<Video<float>> pixels;
        if (extractor->needs_pixels()) {
          const auto path = layout.crop_file(id, s, p);
          if (!std::filesystem::exists(path)) throw InvalidArgument("missing crop slot " + path.string());
          pixels = read_argv_f32(path);
        }
        FeatureVector f = extractor->extract({id, s, p, pixels ? &*pixels : nullptr});
        if (f.dim() != file.dim)
          throw InvalidArgument("extractor returned dimension " + std::to_string(f.dim()) + " for " + id + ", expected " +
                                std::to_string(file.dim));
        vectors[i][crop_slot(s, p)] = std::move(f);
      }
    }
  });
  for (size_t i = 0; i < videos.size(); ++i)
    for (Stream s : {Stream::Rgb, Stream::Flow})
      for (CropPosition p : kCropOrder)
        file.records.push_back({{videos[i]->video_id, s, p}, std::move(vectors[i][crop_slot(s, p)])});
  file.write(layout.features());
  log.write({{"stage", "extract"}, {"extractor", extractor->id()}, {"videos", videos.size()}, {"dim", file.dim}});
  return file;
}

// Stage 3: encode -----------------------------------------------------------

struct EncodedRecord {
  EncodedSample sample;
  Split split = Split::Train;
  friend bool operator==(const EncodedRecord&, const EncodedRecord&) = default;
};

// "AENC": u16 version=1, u32 count, u32 dim, u8 stage, then per record
// u16 id_len, id, i32 label, u8 split, dim x f64; then the PCA block.
struct EncodedStore {
  std::vector<EncodedRecord> records;
  std::optional<PcaModel> pca;

  size_t dim() const { return records.empty() ? 0 : records.front().sample.vector.size(); }

  void write(const std::filesystem::path& path) const {
    io::BinaryWriter w(path);
    w.magic("AENC");
    w.put<uint16_t>(1);
    w.put<uint32_t>(static_cast<uint32_t>(records.size()));
    w.put<uint32_t>(static_cast<uint32_t>(dim()));
    w.put<uint8_t>(records.empty() ? 0 : static_cast<uint8_t>(records.front().sample.stage));
    for (const EncodedRecord& r : records) {
      detail::require(r.sample.vector.size() == dim(), "encoded records must share one dimension");
      w.put<uint16_t>(static_cast<uint16_t>(r.sample.video_id.size()));
      w.bytes(r.sample.video_id.data(), r.sample.video_id.size());
      w.put<int32_t>(r.sample.label);
      w.put<uint8_t>(static_cast<uint8_t>(r.split));
      w.put_array(r.sample.vector.data(), r.sample.vector.size());
    }
    write_pca_block(w, pca ? &*pca : nullptr);
    w.close();
  }

  static EncodedStore read(const std::filesystem::path& path) {
    io::BinaryReader r(path);
    r.expect_magic("AENC");
    if (r.get<uint16_t>() != 1) throw FormatError(path.string() + ": unsupported encoded-store version");
    EncodedStore store;
    const uint32_t count = r.get<uint32_t>();
    const uint32_t dim = r.get<uint32_t>();
    const auto stage = r.get<uint8_t>();
    if (stage > 2) throw FormatError(path.string() + ": bad stage tag");
    for (uint32_t i = 0; i < count; ++i) {
      EncodedRecord rec;
      rec.sample.video_id = r.get_string(r.get<uint16_t>());
      rec.sample.label = r.get<int32_t>();
      const auto split = r.get<uint8_t>();
      if (split > 2) throw FormatError(path.string() + ": bad split tag");
      rec.split = static_cast<Split>(split);
      rec.sample.stage = static_cast<EncodingStage>(stage);
      rec.sample.vector.resize(dim);
      r.get_array(rec.sample.vector.data(), dim);
      store.records.push_back(std::move(rec));
    }
    store.pca = read_pca_block(r);
    return store;
  }
};

// Groups the ten crop vectors of each video, keyed by video id.
inline std::map<std::string, CropFeatures> group_crop_features(const FeatureFile& file) {
  std::map<std::string, std::array<bool, kCropsPerVideo>> present;
  std::map<std::string, CropFeatures> out;
  for (const FeatureRecord& r : file.records) {
    CropFeatures& cf = out[r.key.video_id];
    auto& block = r.key.stream == Stream::Rgb ? cf.rgb : cf.flow;
    block[static_cast<size_t>(r.key.crop)] = r.vector;
    present[r.key.video_id][crop_slot(r.key.stream, r.key.crop)] = true;
  }
  for (const auto& [id, slots] : present)
    for (size_t s = 0; s < kCropsPerVideo; ++s)
      if (!slots[s]) throw InvalidArgument("video " + id + " is missing crop slot " + std::to_string(s));
  return out;
}

// Effective PCA width: the configured k, capped by the input width and the
// number of training samples minus one. 0 means no reduction.
inline size_t effective_pca_dim(size_t configured, size_t input_dim, size_t n_train) {
  if (configured == 0 || n_train < 2) return 0;
  return std::min({configured, input_dim, n_train - 1});
}

inline EncodedStore run_encode(const PipelineConfig& cfg, const SplitManifest& manifest, const LabelMap& labels,
                               const FeatureFile& features) {
  cfg.validate();
  const OutputLayout layout{cfg.out};
  EventLog log(layout.log());
  const auto grouped = group_crop_features(features);

  EncodedStore store;
  for (const ManifestRecord& rec : manifest.records) {
    const auto it = grouped.find(rec.video_id);
    if (it == grouped.end()) continue;
    const EncodedSample concatenated = concatenate(it->second, rec.video_id, labels.index_of(rec.label));
    store.records.push_back({power_normalize(concatenated, cfg.alpha), rec.split});
  }
  detail::require(!store.records.empty(), "no videos to encode");

  std::vector<EncodedSample> train;
  for (const EncodedRecord& r : store.records)
    if (r.split == Split::Train) train.push_back(r.sample);
  const size_t k = effective_pca_dim(cfg.pca_dim, store.dim(), train.size());
  if (k > 0) {
    store.pca = pca_fit(train, k);
    for (EncodedRecord& r : store.records) r.sample = pca_transform(*store.pca, r.sample);
    if (store.pca->rank_deficient)
      log.write({{"stage", "encode"}, {"warning", "PCA is rank deficient at the requested width"}, {"k", k}});
  }
  store.write(layout.encoded());
  log.write({{"stage", "encode"}, {"samples", store.records.size()}, {"train", train.size()}, {"pca_dim", k},
             {"dim", store.dim()}});
  return store;
}

// Stage 4: train -------------------------------------------------------------

struct TrainedModels {
  LinearSvmModel svm;
  std::array<SoftmaxProbe, 2> probes;  // per stream
  GridSearchReport grid;
};

inline void check_groups(const PipelineConfig& cfg, const SplitManifest& manifest) {
  if (!cfg.group_check) return;
  const auto leaked = leaked_groups(manifest.records);
  if (!leaked.empty())
    throw InvalidArgument("group '" + leaked.front() + "' appears in more than one split; refusing to train/evaluate");
}

inline DenseMatrix crop_rows(const std::vector<const CropFeatures*>& videos, Stream s, double alpha) {
  DenseMatrix x(videos.size() * kCropsPerStream, videos.empty() ? 0 : videos.front()->rgb[0].dim());
  for (size_t v = 0; v < videos.size(); ++v) {
    const auto& block = s == Stream::Rgb ? videos[v]->rgb : videos[v]->flow;
    for (size_t c = 0; c < kCropsPerStream; ++c) {
      auto row = x.row(v * kCropsPerStream + c);
      for (size_t j = 0; j < row.size(); ++j) row[j] = signed_power(block[c].values[j], alpha);
    }
  }
  return x;
}

inline void write_probes(const std::array<SoftmaxProbe, 2>& probes, const std::filesystem::path& path) {
  io::BinaryWriter w(path);
  for (const SoftmaxProbe& p : probes) write_probe(w, p);
  w.close();
}

inline std::array<SoftmaxProbe, 2> read_probes(const std::filesystem::path& path) {
  io::BinaryReader r(path);
  std::array<SoftmaxProbe, 2> probes{read_probe(r), read_probe(r)};
  if (r.remaining() != 0) throw FormatError(path.string() + ": trailing bytes");
  return probes;
}

inline void write_grid_report(const GridSearchReport& grid, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << "# c\tmean_cv_accuracy\tchosen\n";
  for (size_t g = 0; g < grid.candidates.size(); ++g)
    out << format_double(grid.candidates[g]) << '\t' << format_double(grid.mean_accuracy[g]) << '\t'
        << (grid.candidates[g] == grid.chosen_c ? 1 : 0) << '\n';
}

inline std::optional<GridSearchReport> read_grid_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  GridSearchReport grid;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::istringstream fields(line);
    double c = 0, acc = 0;
    int chosen = 0;
    if (!(fields >> c >> acc >> chosen)) throw FormatError(path.string() + ": malformed grid row");
    grid.candidates.push_back(c);
    grid.mean_accuracy.push_back(acc);
    if (chosen) {
      grid.chosen_c = c;
      grid.best_accuracy = acc;
    }
  }
  return grid;
}

inline TrainedModels run_train(const PipelineConfig& cfg, const SplitManifest& manifest, const LabelMap& labels,
                               const EncodedStore& store, const FeatureFile& features) {
  cfg.validate();
  check_groups(cfg, manifest);
  const OutputLayout layout{cfg.out};
  EventLog log(layout.log());

  std::vector<std::vector<double>> rows;
  std::vector<int> y;
  std::set<std::string> train_ids;
  for (const EncodedRecord& r : store.records) {
    if (r.split != Split::Train) continue;
    rows.push_back(r.sample.vector);
    y.push_back(r.sample.label);
    train_ids.insert(r.sample.video_id);
  }
  detail::require(!rows.empty(), "training split is empty");
  const DenseMatrix x = DenseMatrix::from_rows(rows);

  TrainedModels models;
  models.grid = grid_search_c(x, y, labels.size(), cfg.c_grid, cfg.folds, cfg.seed);
  models.svm = train_ovr(x, y, labels.size(), models.grid.chosen_c);
  models.svm.pca = store.pca;

  const auto grouped = group_crop_features(features);
  std::vector<const CropFeatures*> train_videos;
  std::vector<int> crop_labels;
  for (const EncodedRecord& r : store.records) {
    if (r.split != Split::Train) continue;
    train_videos.push_back(&grouped.at(r.sample.video_id));
    for (size_t c = 0; c < kCropsPerStream; ++c) crop_labels.push_back(r.sample.label);
  }
  for (Stream s : {Stream::Rgb, Stream::Flow})
    models.probes[static_cast<size_t>(s)] = train_probe(crop_rows(train_videos, s, cfg.alpha), crop_labels, labels.size());

  write_model(models.svm, layout.model());
  write_probes(models.probes, layout.probes());
  write_grid_report(models.grid, layout.grid_report());
  log.write({{"stage", "train"}, {"train_samples", rows.size()}, {"chosen_c", models.grid.chosen_c},
             {"cv_accuracy", models.grid.best_accuracy}});
  return models;
}

// Stage 5: evaluate ---------------------------------------------------------

struct EvaluationResult {
  std::vector<std::string> video_ids;
  std::vector<int> actual;
  std::vector<int> svm_predicted;
  std::vector<int> vote_predicted;
  Evaluation svm;
  Evaluation baseline;
};

// The ten crop-level predictions of one video, in slot order.
inline std::vector<CropPrediction> crop_predictions(const std::array<SoftmaxProbe, 2>& probes, const CropFeatures& cf,
                                                    double alpha) {
  std::vector<CropPrediction> out;
  for (Stream s : {Stream::Rgb, Stream::Flow}) {
    const auto& block = s == Stream::Rgb ? cf.rgb : cf.flow;
    for (CropPosition p : kCropOrder) {
      const FeatureVector& f = block[static_cast<size_t>(p)];
      std::vector<double> x(f.dim());
      for (size_t j = 0; j < x.size(); ++j) x[j] = signed_power(f.values[j], alpha);
      out.push_back(make_crop_prediction(crop_slot(s, p), probe_scores(probes[static_cast<size_t>(s)], x)));
    }
  }
  return out;
}

inline EvaluationResult evaluate_models(const PipelineConfig& cfg, const LabelMap& labels, const EncodedStore& store,
                                        const FeatureFile& features, const LinearSvmModel& svm,
                                        const std::array<SoftmaxProbe, 2>& probes) {
  const auto grouped = group_crop_features(features);
  EvaluationResult result;
  for (const EncodedRecord& r : store.records) {
    if (r.split != Split::Test) continue;
    result.video_ids.push_back(r.sample.video_id);
    result.actual.push_back(r.sample.label);
    result.svm_predicted.push_back(predict(svm, r.sample.vector).label);
    const auto votes = crop_predictions(probes, grouped.at(r.sample.video_id), cfg.alpha);
    result.vote_predicted.push_back(majority_vote(votes));
  }
  detail::require(!result.actual.empty(), "test split is empty");
  result.svm = evaluate(result.actual, result.svm_predicted, labels.size());
  result.baseline = evaluate(result.actual, result.vote_predicted, labels.size());
  return result;
}

namespace pipeline_detail {

inline nlohmann::ordered_json report_json(const std::string& pipeline, const ClassReport& r, const LabelMap& labels) {
  nlohmann::ordered_json j;
  j["type"] = "report";
  j["pipeline"] = pipeline;
  j["mean_class_accuracy"] = r.mean_class_accuracy;
  j["overall_accuracy"] = r.overall_accuracy;
  j["classes"] = nlohmann::ordered_json::array();
  for (size_t k = 0; k < r.classes.size(); ++k) {
    const ClassMetrics& m = r.classes[k];
    j["classes"].push_back({{"label", labels.names[k]},
                            {"precision", m.precision},
                            {"recall", m.recall},
                            {"f1", m.f1},
                            {"support", m.support},
                            {"precision_undefined", m.precision_undefined},
                            {"recall_undefined", m.recall_undefined}});
  }
  return j;
}

inline void write_confusion(const ConfusionMatrix& cm, const LabelMap& labels, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << "actual\\predicted";
  for (const std::string& n : labels.names) out << '\t' << n;
  out << '\n';
  for (size_t a = 0; a < cm.n_classes; ++a) {
    out << labels.names[a];
    for (size_t p = 0; p < cm.n_classes; ++p) out << '\t' << cm.at(a, p);
    out << '\n';
  }
}

}  // namespace pipeline_detail

inline void write_reports(const OutputLayout& layout, const LabelMap& labels, const EvaluationResult& result,
                          const GridSearchReport* grid) {
  std::ofstream tsv(layout.report_tsv(), std::ios::binary | std::ios::trunc);
  tsv << "# pipeline\tclass\tprecision\trecall\tf1\tsupport\n";
  std::ofstream jsonl(layout.report_jsonl(), std::ios::binary | std::ios::trunc);
  for (const auto& [name, eval] : {std::pair<std::string, const Evaluation*>{"baseline", &result.baseline},
                                   std::pair<std::string, const Evaluation*>{"svm", &result.svm}}) {
    const ClassReport& r = eval->report;
    for (size_t k = 0; k < r.classes.size(); ++k) {
      const ClassMetrics& m = r.classes[k];
      tsv << name << '\t' << labels.names[k] << '\t' << format_double(m.precision) << '\t' << format_double(m.recall)
          << '\t' << format_double(m.f1) << '\t' << m.support << '\n';
    }
    tsv << name << "\t<mean_class_accuracy>\t\t" << format_double(r.mean_class_accuracy) << "\t\t\n";
    tsv << name << "\t<overall_accuracy>\t\t" << format_double(r.overall_accuracy) << "\t\t\n";
    jsonl << pipeline_detail::report_json(name, r, labels).dump() << '\n';
    nlohmann::ordered_json cm{{"type", "confusion"}, {"pipeline", name}, {"labels", labels.names}};
    cm["counts"] = nlohmann::ordered_json::array();
    for (size_t a = 0; a < eval->confusion.n_classes; ++a) {
      std::vector<size_t> row;
      for (size_t p = 0; p < eval->confusion.n_classes; ++p) row.push_back(eval->confusion.at(a, p));
      cm["counts"].push_back(row);
    }
    jsonl << cm.dump() << '\n';
    pipeline_detail::write_confusion(eval->confusion, labels, layout.confusion(name));
  }
  if (grid) {
    nlohmann::ordered_json g{{"type", "grid"}, {"candidates", grid->candidates}, {"mean_accuracy", grid->mean_accuracy},
                             {"chosen_c", grid->chosen_c}};
    jsonl << g.dump() << '\n';
  }
  for (size_t i = 0; i < result.video_ids.size(); ++i) {
    nlohmann::ordered_json p{{"type", "prediction"},
                             {"video", result.video_ids[i]},
                             {"actual", labels.names[static_cast<size_t>(result.actual[i])]},
                             {"svm", labels.names[static_cast<size_t>(result.svm_predicted[i])]},
                             {"baseline", labels.names[static_cast<size_t>(result.vote_predicted[i])]}};
    jsonl << p.dump() << '\n';
  }
}

inline EvaluationResult run_evaluate(const PipelineConfig& cfg, const SplitManifest& manifest, const LabelMap& labels) {
  cfg.validate();
  check_groups(cfg, manifest);
  const OutputLayout layout{cfg.out};
  const EncodedStore store = EncodedStore::read(layout.encoded());
  const FeatureFile features = FeatureFile::read(layout.features());
  const LinearSvmModel svm = read_model(layout.model());
  const auto probes = read_probes(layout.probes());
  EvaluationResult result = evaluate_models(cfg, labels, store, features, svm, probes);
  const std::optional<GridSearchReport> grid = read_grid_report(layout.grid_report());
  write_reports(layout, labels, result, grid ? &*grid : nullptr);
  EventLog(layout.log()).write({{"stage", "evaluate"},
                                {"test_samples", result.actual.size()},
                                {"svm_mean_class_accuracy", result.svm.report.mean_class_accuracy},
                                {"baseline_mean_class_accuracy", result.baseline.report.mean_class_accuracy}});
  return result;
}

// Everything --------------------------------------------------------------------

struct RunSummary {
  PreprocessSummary preprocess;
  GridSearchReport grid;
  EvaluationResult evaluation;
};

inline RunSummary run_all(const PipelineConfig& cfg, const SplitManifest& manifest) {
  cfg.validate();
  check_groups(cfg, manifest);
  const LabelMap labels = load_labels(cfg, manifest);
  const OutputLayout layout{cfg.out};
  std::filesystem::create_directories(layout.root);
  std::filesystem::remove(layout.log());

  RunSummary summary;
  if (cfg.extractor == ExtractorKind::Mock) summary.preprocess = run_preprocess(cfg, manifest);
  const FeatureFile features = run_extract(cfg, manifest);
  const EncodedStore store = run_encode(cfg, manifest, labels, features);
  const TrainedModels models = run_train(cfg, manifest, labels, store, features);
  summary.grid = models.grid;
  // Evaluate from the persisted artifacts so staged and one-shot runs agree.
  summary.evaluation = run_evaluate(cfg, manifest, labels);
  return summary;
}

// Ablation: {baseline, SVM} x {with, without} preprocessing, where "without"
// turns off flow scaling and pads short clips with their last frame.
struct AblationTable {
  double baseline_with = 0, baseline_without = 0;
  double svm_with = 0, svm_without = 0;

  std::string str() const {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "method\twith_preprocessing\twithout_preprocessing\nbaseline\t%.4f\t%.4f\nsvm\t%.4f\t%.4f\n",
                  baseline_with, baseline_without, svm_with, svm_without);
    return buf;
  }
};

inline AblationTable run_ablation(const PipelineConfig& cfg, const SplitManifest& manifest) {
  PipelineConfig with = cfg, without = cfg;
  with.out = cfg.out / "with";
  with.flow_scaling = true;
  with.crop_fill = CropFillMode::Figure;
  without.out = cfg.out / "without";
  without.flow_scaling = false;
  without.crop_fill = CropFillMode::RepeatLast;
  const RunSummary a = run_all(with, manifest);
  const RunSummary b = run_all(without, manifest);
  AblationTable t{a.evaluation.baseline.report.mean_class_accuracy, b.evaluation.baseline.report.mean_class_accuracy,
                  a.evaluation.svm.report.mean_class_accuracy, b.evaluation.svm.report.mean_class_accuracy};
  std::ofstream(cfg.out / "ablation.tsv", std::ios::binary | std::ios::trunc) << t.str();
  return t;
}

}  // namespace actionpipe

#endif  // ACTIONPIPE_PIPELINE_HPP_
