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

// Command-line front end: one subcommand per pipeline stage plus run-all,
// synth (dataset generator) and ablate.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "actionpipe.hpp"

namespace {

using namespace actionpipe;

// Long flag names shared by every pipeline subcommand; they double as config
// file keys.
const std::vector<std::pair<std::string, std::string>> kValueFlags = {
    {"s1", "Shorter side after resizing"},
    {"t", "Temporal length T"},
    {"alpha", "Power-normalization exponent"},
    {"pca-dim", "PCA output width (0 disables PCA)"},
    {"c-grid", "Comma-separated C candidates"},
    {"folds", "Cross-validation folds"},
    {"flow-scale-mode", "piecewise | ratio"},
    {"crop-fill", "figure | repeat-last"},
    {"flow-algorithm", "Flow estimator id"},
    {"flow-levels", "Pyramid levels"},
    {"flow-iterations", "Iterations per pyramid level"},
    {"flow-smoothness", "Smoothness weight"},
    {"extractor", "mock | file"},
    {"feature-dim", "Mock extractor output width"},
    {"feature-file", "Precomputed AFV1 vectors for the file extractor"},
    {"seed", "Seed for CV fold shuffling"},
    {"threads", "Worker threads (falls back to ACTIONPIPE_THREADS)"},
    {"manifest", "Split manifest (TSV)"},
    {"labels", "Label map (name<TAB>index)"},
    {"out", "Output directory"},
};

struct PipelineFlags {
  std::string config_file;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  bool no_flow_scaling = false;
  bool no_group_check = false;

  void attach(CLI::App* app) {
    app->add_option("--config", config_file, "Config file of key = value lines")->check(CLI::ExistingFile);
    for (const auto& [name, help] : kValueFlags)
      options[name] =
          app->add_option("--" + name, values[name], help)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app->add_flag("--no-flow-scaling", no_flow_scaling, "Skip flow magnitude rescaling");
    app->add_flag("--no-group-check", no_group_check, "Allow groups to span splits");
  }

  PipelineConfig resolve() const {
    PipelineConfig cfg;
    if (!config_file.empty()) load_config_file(cfg, config_file);
    for (const auto& [name, opt] : options)
      if (opt->count() > 0) apply_setting(cfg, name, values.at(name));
    if (no_flow_scaling) cfg.flow_scaling = false;
    if (no_group_check) cfg.group_check = false;
    cfg.validate();
    if (cfg.manifest.empty()) throw InvalidArgument("--manifest is required");
    return cfg;
  }
};

void print_report(const std::string& title, const Evaluation& e, const LabelMap& labels) {
  std::printf("%s\n", title.c_str());
  std::printf("  %-20s %9s %9s %9s %8s\n", "class", "precision", "recall", "f1", "support");
  for (size_t k = 0; k < labels.size(); ++k) {
    const ClassMetrics& m = e.report.classes[k];
    std::printf("  %-20s %9.4f %9.4f %9.4f %8zu\n", labels.names[k].c_str(), m.precision, m.recall, m.f1, m.support);
  }
  std::printf("  mean class accuracy %.4f, overall accuracy %.4f\n", e.report.mean_class_accuracy,
              e.report.overall_accuracy);
}

int report_preprocess(const PreprocessSummary& s) {
  std::printf("preprocessed %zu video(s), %zu failed\n", s.processed.size(), s.failed.size());
  for (const auto& [id, why] : s.failed) std::fprintf(stderr, "  %s: %s\n", id.c_str(), why.c_str());
  return s.failed.empty() ? 0 : 2;
}

SplitManifest load_manifest(const PipelineConfig& cfg) { return SplitManifest::read(cfg.manifest); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-stream action recognition pipeline"};
  app.require_subcommand(1);

  // std::map nodes are address-stable, which CLI11's bound storage needs.
  std::map<std::string, PipelineFlags> flags;
  std::map<std::string, CLI::App*> stages;
  for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
           {"preprocess", "Flow, temporal sampling, resizing, rescaling and five crops per video"},
           {"extract", "Run the feature extractor over every crop"},
           {"encode", "Concatenate, power-normalize and PCA-reduce crop features"},
           {"train", "Grid-search C, train the SVM and the crop-level probes"},
           {"evaluate", "Evaluate SVM and majority-vote baseline on the test split"},
           {"run-all", "Run every stage in order"},
           {"ablate", "Run with and without preprocessing and print the 2x2 table"}}) {
    stages[name] = app.add_subcommand(name, help);
    flags[name].attach(stages[name]);
  }

  SyntheticSpec synth;
  std::string synth_out = "synthetic";
  std::vector<size_t> synth_split = {5, 0, 5};
  bool synth_png = false;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Generate a synthetic moving-square corpus");
  synth_cmd->add_option("--classes", synth.n_classes, "Number of classes")->capture_default_str();
  synth_cmd->add_option("--clips-per-class", synth.clips_per_class, "Clips per class")->capture_default_str();
  synth_cmd->add_option("--frames", synth.frames, "Nominal clip length")->capture_default_str();
  synth_cmd->add_option("--frame-jitter", synth.frame_jitter, "Clip length spread (+-)")->capture_default_str();
  synth_cmd->add_option("--rows", synth.rows, "Frame rows")->capture_default_str();
  synth_cmd->add_option("--cols", synth.cols, "Frame columns")->capture_default_str();
  synth_cmd->add_option("--groups", synth.n_groups, "Number of person groups")->capture_default_str();
  synth_cmd->add_option("--split", synth_split, "Groups for train val test")->expected(3)->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "Corpus seed")->capture_default_str();
  synth_cmd->add_option("--out", synth_out, "Output directory")->capture_default_str();
  synth_cmd->add_flag("--png", synth_png, "Also write PNG frame directories");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth_cmd->parsed()) {
      synth.split = {synth_split[0], synth_split[1], synth_split[2]};
      const SyntheticCorpus corpus = generate_synthetic_dataset(synth);
      write_synthetic_dataset(corpus, synth_out);
      if (synth_png)
        for (size_t i = 0; i < corpus.videos.size(); ++i)
          write_png_frames(corpus.videos[i], std::filesystem::path(synth_out) / "frames" /
                                                 corpus.manifest.records[i].video_id);
      std::printf("wrote %zu clips to %s\n", corpus.videos.size(), synth_out.c_str());
      return 0;
    }

    std::string stage;
    for (const auto& [name, cmd] : stages)
      if (cmd->parsed()) stage = name;
    const PipelineConfig cfg = flags.at(stage).resolve();
    const SplitManifest manifest = load_manifest(cfg);
    const LabelMap labels = load_labels(cfg, manifest);
    const OutputLayout layout{cfg.out};
    std::filesystem::create_directories(cfg.out);

    if (stage == "preprocess") return report_preprocess(run_preprocess(cfg, manifest));
    if (stage == "extract") {
      const FeatureFile f = run_extract(cfg, manifest);
      std::printf("wrote %zu feature records of dimension %zu\n", f.records.size(), f.dim);
      return 0;
    }
    if (stage == "encode") {
      const EncodedStore s = run_encode(cfg, manifest, labels, FeatureFile::read(layout.features()));
      std::printf("encoded %zu video(s) to dimension %zu\n", s.records.size(), s.dim());
      return 0;
    }
    if (stage == "train") {
      const TrainedModels m = run_train(cfg, manifest, labels, EncodedStore::read(layout.encoded()),
                                        FeatureFile::read(layout.features()));
      for (size_t g = 0; g < m.grid.candidates.size(); ++g)
        std::printf("C=%-10g cv accuracy %.4f\n", m.grid.candidates[g], m.grid.mean_accuracy[g]);
      std::printf("chosen C=%g\n", m.grid.chosen_c);
      return 0;
    }
    if (stage == "evaluate") {
      const EvaluationResult r = run_evaluate(cfg, manifest, labels);
      print_report("baseline (majority vote)", r.baseline, labels);
      print_report("svm", r.svm, labels);
      return 0;
    }
    if (stage == "run-all") {
      const RunSummary s = run_all(cfg, manifest);
      const int status = cfg.extractor == ExtractorKind::Mock ? report_preprocess(s.preprocess) : 0;
      std::printf("chosen C=%g (cv accuracy %.4f)\n", s.grid.chosen_c, s.grid.best_accuracy);
      print_report("baseline (majority vote)", s.evaluation.baseline, labels);
      print_report("svm", s.evaluation.svm, labels);
      return status;
    }
    if (stage == "ablate") {
      std::printf("%s", run_ablation(cfg, manifest).str().c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
