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
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int status = -1;
  std::string output;
};

Outcome run(const std::string& args) {
  const std::string cmd = std::string(ACTIONPIPE_CLI_PATH) + " " + args + " 2>&1";
  Outcome o;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return o;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) o.output.append(buf, n);
  const int raw = pclose(pipe);
  o.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = new fs::path(fs::temp_directory_path() / "actionpipe_unit" / "cli");
    fs::remove_all(*root_);
    fs::create_directories(*root_);
    const auto o = run("synth --classes 3 --clips-per-class 10 --frames 6 --rows 24 --cols 32 --groups 10 "
                       "--split 5 0 5 --seed 4 --out " + (*root_ / "data").string());
    ASSERT_EQ(o.status, 0) << o.output;
  }
  static void TearDownTestSuite() { delete root_; }

  static std::string common(const std::string& out) {
    return "--manifest " + (*root_ / "data" / "manifest.tsv").string() + " --labels " +
           (*root_ / "data" / "labels.tsv").string() + " --out " + (*root_ / out).string() +
           " --s1 16 --t 6 --c-grid 0.1,1 --flow-iterations 30";
  }
  static fs::path* root_;
};

fs::path* Cli::root_ = nullptr;

}  // namespace

TEST_F(Cli, HelpListsSubcommands) {
  const auto o = run("--help");
  EXPECT_EQ(o.status, 0);
  for (const char* sub : {"preprocess", "extract", "encode", "train", "evaluate", "run-all", "ablate", "synth"})
    EXPECT_NE(o.output.find(sub), std::string::npos) << sub;
  EXPECT_NE(run("").status, 0);
}

TEST_F(Cli, SynthWritesCorpus) {
  EXPECT_TRUE(fs::exists(*root_ / "data" / "manifest.tsv"));
  EXPECT_TRUE(fs::exists(*root_ / "data" / "labels.tsv"));
  size_t n = 0;
  for (const auto& e : fs::directory_iterator(*root_ / "data" / "videos")) n += e.path().extension() == ".argv";
  EXPECT_EQ(n, 30u);
  const auto o = run("synth --classes 2 --clips-per-class 2 --groups 2 --split 1 0 1 --png --rows 16 --cols 16 --out " +
                     (*root_ / "png").string());
  EXPECT_EQ(o.status, 0) << o.output;
  EXPECT_TRUE(fs::exists(*root_ / "png" / "frames" / "right-slow_000" / "frame_000000.png"));
}

TEST_F(Cli, StagesThenReport) {
  const std::string c = common("staged");
  for (const char* stage : {"preprocess", "extract", "encode", "train", "evaluate"}) {
    const auto o = run(std::string(stage) + " " + c);
    ASSERT_EQ(o.status, 0) << stage << ": " << o.output;
  }
  for (const char* f : {"crops/index.tsv", "features.afv", "encoded.aenc", "model.asvm", "grid.tsv", "report.tsv",
                        "report.jsonl", "confusion_svm.tsv", "confusion_baseline.tsv"})
    EXPECT_TRUE(fs::exists(*root_ / "staged" / f)) << f;
  const auto report = slurp(*root_ / "staged" / "report.tsv");
  EXPECT_NE(report.find("svm"), std::string::npos);
  EXPECT_NE(report.find("baseline"), std::string::npos);
}

TEST_F(Cli, RunAllTwiceIsIdentical) {
  ASSERT_EQ(run("run-all " + common("a")).status, 0);
  const auto o = run("run-all " + common("b") + " --threads 2");
  ASSERT_EQ(o.status, 0) << o.output;
  EXPECT_NE(o.output.find("mean class accuracy"), std::string::npos);
  for (const char* f : {"features.afv", "model.asvm", "report.tsv", "report.jsonl"})
    EXPECT_EQ(slurp(*root_ / "a" / f), slurp(*root_ / "b" / f)) << f;
}

TEST_F(Cli, ConfigFileAndOverride) {
  const auto cfg = *root_ / "cfg.txt";
  std::ofstream(cfg) << "s1 = 20\nt = 5\npca-dim = 4\n";
  const auto o = run("preprocess " + common("cfg") + " --config " + cfg.string());
  ASSERT_EQ(o.status, 0) << o.output;
  // --s1 16 on the command line wins over s1 = 20 from the file.
  const auto index = slurp(*root_ / "cfg" / "crops" / "index.tsv");
  EXPECT_NE(index.find("\t14\t"), std::string::npos);  // crop side for s1=16

  const auto o2 = run("preprocess --manifest " + (*root_ / "data" / "manifest.tsv").string() + " --out " +
                      (*root_ / "cfg2").string() + " --config " + cfg.string() + " --flow-iterations 20");
  ASSERT_EQ(o2.status, 0) << o2.output;
  EXPECT_NE(slurp(*root_ / "cfg2" / "crops" / "index.tsv").find("\t17\t"), std::string::npos);  // crop side for s1=20
}

TEST_F(Cli, FlagErrors) {
  EXPECT_EQ(run("run-all " + common("bad") + " --crop-fill sideways").status, 1);
  EXPECT_EQ(run("run-all " + common("bad") + " --s1 8").status, 1);
  EXPECT_NE(run("run-all " + common("bad") + " --config /no/such/file").status, 0);
}

TEST_F(Cli, NoFlowScalingChangesOnlyFlowBytes) {
  ASSERT_EQ(run("preprocess " + common("scale_on")).status, 0);
  ASSERT_EQ(run("preprocess " + common("scale_off") + " --no-flow-scaling").status, 0);
  size_t flow_diff = 0;
  for (const auto& e : fs::recursive_directory_iterator(*root_ / "scale_on" / "crops")) {
    if (e.path().extension() != ".argv") continue;
    const auto rel = fs::relative(e.path(), *root_ / "scale_on");
    const bool same = slurp(e.path()) == slurp(*root_ / "scale_off" / rel);
    if (e.path().filename().string().rfind("rgb_", 0) == 0) {
      EXPECT_TRUE(same) << rel;
    } else {
      flow_diff += !same;
    }
  }
  EXPECT_GT(flow_diff, 0u);
}

TEST_F(Cli, PreprocessFailureExitCode) {
  const auto manifest = *root_ / "broken.tsv";
  std::ofstream out(manifest);
  out << slurp(*root_ / "data" / "manifest.tsv");
  out << "ghost\t/no/such/video.argv\tright-slow\ttrain\tp00\n";
  out.close();
  const auto o = run("preprocess --manifest " + manifest.string() + " --out " + (*root_ / "broken").string() +
                     " --s1 16 --t 6 --flow-iterations 20");
  EXPECT_EQ(o.status, 2) << o.output;
  EXPECT_NE(o.output.find("ghost"), std::string::npos);
}

TEST_F(Cli, GroupLeakAborts) {
  const auto manifest = *root_ / "leak.tsv";
  auto text = slurp(*root_ / "data" / "manifest.tsv");
  std::ofstream(manifest) << text << "dup\tvideos/right-slow_000.argv\tright-slow\ttrain\tp00\n"
                          << "dup2\tvideos/right-slow_000.argv\tright-slow\ttest\tp00\n";
  const auto o = run("run-all --manifest " + manifest.string() + " --out " + (*root_ / "leak").string() +
                     " --s1 16 --t 6");
  EXPECT_EQ(o.status, 1);
  EXPECT_NE(o.output.find("more than one split"), std::string::npos) << o.output;
}

TEST_F(Cli, AblateTable) {
  const auto o = run("ablate " + common("ablate"));
  ASSERT_EQ(o.status, 0) << o.output;
  EXPECT_NE(o.output.find("with_preprocessing\twithout_preprocessing"), std::string::npos);
  EXPECT_NE(o.output.find("baseline\t"), std::string::npos);
  EXPECT_NE(o.output.find("svm\t"), std::string::npos);
  EXPECT_TRUE(fs::exists(*root_ / "ablate" / "ablation.tsv"));
}
