// Copyright 2026 The trajseg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "trajseg/error.hpp"
#include "trajseg/pipeline.hpp"
#include "trajseg/records.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>

namespace trajseg::pipeline
{
namespace
{

class PipelineTest : public ::testing::Test
{
protected:
  void SetUp() override
  {
    const auto * info = ::testing::UnitTest::GetInstance()->current_test_info();
    root_ = fs::temp_directory_path() / "trajseg_pipeline_tests" / info->name();
    fs::remove_all(root_);
    fs::create_directories(root_);
  }

  void TearDown() override
  {
    if (!HasFailure()) {
      fs::remove_all(root_);
    }
  }

  fs::path synth_corpus(std::size_t plans, std::uint64_t seed, const Config & config = {})
  {
    SynthOptions options;
    options.plans = plans;
    options.seed = seed;
    options.out = root_ / "synth";
    run_synth(options, config);
    return options.out;
  }

  // Ingest, segment, analyze and report into `out`.
  void full_run(const fs::path & corpus, const fs::path & out, const Config & config)
  {
    IngestOptions ingest;
    ingest.input_glob = (corpus / "trips").string();
    ingest.out = out / "ingest";
    ingest.emit_normalized = true;
    run_ingest(ingest, config);
    run_segment({out / "ingest", out / "segments"}, config);
    run_analyze({out / "ingest", out / "segments", out / "metrics"}, config);
    run_report({out / "metrics", out / "report"}, config);
  }

  fs::path root_;
};

std::map<std::string, std::string> tree(const fs::path & dir)
{
  std::map<std::string, std::string> out;
  for (const auto & entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) {
      out[fs::relative(entry.path(), dir).string()] = records::read_file(entry.path());
    }
  }
  return out;
}

TEST_F(PipelineTest, SynthThenVerifyIsExact)
{
  const auto corpus = synth_corpus(100, 7);
  const auto s = run_verify({corpus}, Config{});
  EXPECT_EQ(s.trips, 100u);
  EXPECT_EQ(s.type_accuracy, 1.0);
  EXPECT_EQ(s.exact_match_rate, 1.0);
  EXPECT_EQ(s.regime_match_rate, 1.0);
}

TEST_F(PipelineTest, OutputIndependentOfWorkerCount)
{
  const auto corpus = synth_corpus(40, 11);
  Config one;
  Config many;
  many.workers = 3;
  full_run(corpus, root_ / "one", one);
  full_run(corpus, root_ / "many", many);
  auto a = tree(root_ / "one");
  auto b = tree(root_ / "many");
  ASSERT_EQ(a.size(), b.size());
  for (const auto & [name, contents] : a) {
    if (name.find("effective_config.json") != std::string::npos) {
      continue;
    }
    EXPECT_EQ(contents, b[name]) << name;
  }
}

TEST_F(PipelineTest, RepeatedRunsAreByteIdentical)
{
  const auto corpus = synth_corpus(20, 3);
  full_run(corpus, root_ / "a", Config{});
  full_run(corpus, root_ / "b", Config{});
  EXPECT_EQ(tree(root_ / "a"), tree(root_ / "b"));
}

TEST_F(PipelineTest, EveryStageEchoesItsConfig)
{
  const auto corpus = synth_corpus(5, 1);
  Config config;
  config.segmentation.merge_gap_s = 7.0;
  full_run(corpus, root_ / "run", config);
  for (const char * stage : {"ingest", "segments", "metrics", "report"}) {
    const auto text = records::read_file(root_ / "run" / stage / "effective_config.json");
    EXPECT_EQ(config_from_json(text).segmentation.merge_gap_s, 7.0) << stage;
  }
}

TEST_F(PipelineTest, ReportFiguresHaveFixedHeader)
{
  const auto corpus = synth_corpus(30, 5);
  full_run(corpus, root_ / "run", Config{});
  const auto report = root_ / "run" / "report";
  for (const char * name :
       {"fig_trip_distance.csv", "fig_event_density.csv", "fig_cutin_density.csv",
        "fig_regime_distance_b.csv", "fig_aggressiveness_a.csv"}) {
    const auto lines = records::read_lines(report / name);
    ASSERT_FALSE(lines.empty()) << name;
    EXPECT_EQ(lines[0], "bin_lo,bin_hi,n,median,q1,q3,wlo,whi") << name;
  }
  EXPECT_TRUE(fs::exists(report / "fig_scenario_distribution.csv"));
  EXPECT_TRUE(fs::exists(report / "fig_risk_distribution.csv"));
  EXPECT_TRUE(fs::exists(report / "fig_regime_initiation.csv"));
  EXPECT_TRUE(fs::exists(report / "turning_envelope.json"));
}

TEST_F(PipelineTest, IngestNamesTripsByFileAndIndex)
{
  const auto corpus = synth_corpus(3, 2);
  IngestOptions ingest;
  ingest.input_glob = (corpus / "trips" / "synth__0000*.csv").string();
  ingest.out = root_ / "ingest";
  const auto s = run_ingest(ingest, Config{});
  EXPECT_EQ(s.files, 3u);
  EXPECT_EQ(s.trips, 3u);
  const auto trips = load_trips(root_ / "ingest");
  ASSERT_EQ(trips.size(), 3u);
  EXPECT_EQ(trips[0].vehicle_id, "synth__00001");
  EXPECT_EQ(trips[0].trip_id, "0001");
  EXPECT_TRUE(trips[0].has_derived());
}

TEST_F(PipelineTest, SegmentOnEmptyDirectoryFindsNoTrips)
{
  fs::create_directories(root_ / "empty");
  try {
    run_segment({root_ / "empty", root_ / "out"}, Config{});
    FAIL();
  } catch (const Error & e) {
    EXPECT_EQ(e.kind(), ErrorKind::kData);
    EXPECT_NE(std::string(e.what()).find("no trips found"), std::string::npos);
  }
}

struct Outcome
{
  int status{0};
  std::string output;
};

Outcome run_cli(const std::string & args)
{
  const std::string command = std::string(TRAJSEG_CLI_PATH) + " " + args + " 2>&1";
  Outcome out;
  FILE * pipe = ::popen(command.c_str(), "r");
  if (pipe == nullptr) {
    out.status = -1;
    return out;
  }
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    out.output.append(buf.data(), n);
  }
  const int raw = ::pclose(pipe);
  out.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return out;
}

class CliTest : public PipelineTest
{
protected:
  void SetUp() override
  {
    if (std::string(TRAJSEG_CLI_PATH).empty()) {
      GTEST_SKIP() << "command-line tool not built";
    }
    PipelineTest::SetUp();
  }
};

TEST_F(CliTest, SynthThenVerifyReportsFullAccuracy)
{
  const auto corpus = root_ / "corpus";
  ASSERT_EQ(run_cli("synth --plans 100 --seed 7 --out " + corpus.string()).status, 0);
  const auto verify = run_cli("verify --corpus " + corpus.string());
  EXPECT_EQ(verify.status, 0);
  EXPECT_NE(verify.output.find("type-sequence accuracy: 100.00%"), std::string::npos)
    << verify.output;
}

TEST_F(CliTest, SegmentEmptyDirectoryExitsWithDataError)
{
  fs::create_directories(root_ / "empty");
  const auto r =
    run_cli("segment --trips " + (root_ / "empty").string() + " --out " + (root_ / "o").string());
  EXPECT_EQ(r.status, 3);
  EXPECT_NE(r.output.find("no trips found"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("\"error\""), std::string::npos) << r.output;
}

TEST_F(CliTest, UsageErrors)
{
  EXPECT_EQ(run_cli("").status, 1);
  EXPECT_EQ(run_cli("segment --bogus").status, 1);
  EXPECT_EQ(run_cli("segment --trips x --out y --alg1-zero-guard maybe").status, 1);
}

TEST_F(CliTest, SchemaErrors)
{
  records::write_file(root_ / "bad.json", R"({"stats":{"bin_width_mps":-1}})");
  records::write_file(root_ / "in" / "a.csv", "time,speed\n0,1\n");
  EXPECT_EQ(
    run_cli(
      "--config " + (root_ / "bad.json").string() + " synth --plans 1 --seed 1 --out " +
      (root_ / "o").string())
      .status,
    2);
  EXPECT_EQ(
    run_cli(
      "ingest --input " + (root_ / "in").string() + " --out " + (root_ / "o2").string())
      .status,
    2);
}

TEST_F(CliTest, FlagsOverrideConfig)
{
  const auto corpus = root_ / "corpus";
  ASSERT_EQ(run_cli("synth --plans 3 --seed 1 --out " + corpus.string()).status, 0);
  ASSERT_EQ(
    run_cli(
      "ingest --input " + (corpus / "trips").string() + " --out " + (root_ / "i").string())
      .status,
    0);
  ASSERT_EQ(
    run_cli(
      "--workers 2 segment --threshold-mps 6 --alg1-zero-guard literal --trips " +
      (root_ / "i").string() + " --out " + (root_ / "s").string())
      .status,
    0);
  const Config echoed =
    config_from_json(records::read_file(root_ / "s" / "effective_config.json"));
  EXPECT_EQ(echoed.event_search.threshold_mps, 6.0);
  EXPECT_EQ(echoed.event_search.zero_guard, ZeroGuard::kLiteral);
  EXPECT_EQ(echoed.workers, 2);
}

}  // namespace
}  // namespace trajseg::pipeline
