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

#include "trajseg/config.hpp"
#include "trajseg/error.hpp"
#include "trajseg/pipeline.hpp"

#include <CLI11.hpp>
#include <fmt/core.h>

#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <json.hpp>

namespace
{

using namespace trajseg;

int report_error(ErrorKind kind, const std::string & message, std::optional<std::size_t> row = {})
{
  nlohmann::json j = {{"error", std::string(to_string(kind))}, {"message", message}};
  if (row) {
    j["row"] = *row;
  }
  fmt::print(stderr, "{}\n", j.dump());
  return exit_code(kind);
}

template <class T>
void override_if(const CLI::Option * option, T & target, const T & value)
{
  if (option->count() > 0) {
    target = value;
  }
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Trip segmentation and driving-behavior analytics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "trajseg 0.1.0");

  std::string config_path;
  int workers = 1;
  app.add_option("--config", config_path, "JSON config file (overrides $TRAJSEG_CONFIG)");
  auto * workers_opt =
    app.add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);

  // ingest
  pipeline::IngestOptions ingest_opts;
  bool resample = false;
  double min_trip_s = 0.0;
  auto * ingest = app.add_subcommand("ingest", "Parse raw telemetry into normalized trips");
  ingest->add_option("--input", ingest_opts.input_glob, "File, directory or file-name glob")
    ->required();
  ingest->add_option("--schema", ingest_opts.schema, "Column map JSON");
  auto * resample_opt = ingest->add_flag("--resample-1hz", resample, "Resample to 1 Hz");
  auto * min_trip_opt =
    ingest->add_option("--min-trip-s", min_trip_s, "Drop ignition runs shorter than this");
  ingest->add_flag(
    "--emit-normalized", ingest_opts.emit_normalized, "Also dump trips with derived columns");
  ingest->add_option("--out", ingest_opts.out, "Output directory")->required();

  // segment
  pipeline::SegmentOptions segment_opts;
  double threshold = 0.0;
  double merge_gap = 0.0;
  std::string zero_guard;
  std::string accel_split;
  std::string stop_label;
  int smoothing = 0;
  bool no_valley_split = false;
  bool pedal_proxy = false;
  auto * segment = app.add_subcommand("segment", "Segment trips into scenarios and regimes");
  segment->add_option("--trips", segment_opts.trips, "Ingest output directory")->required();
  auto * threshold_opt = segment->add_option("--threshold-mps", threshold, "Drop/rise threshold");
  auto * gap_opt = segment->add_option("--merge-gap-s", merge_gap, "Separation gap");
  auto * guard_opt = segment->add_option("--alg1-zero-guard", zero_guard, "literal or off")
                       ->check(CLI::IsMember({"literal", "off"}));
  auto * split_opt = segment->add_option("--accel-split", accel_split, "symmetric or literal")
                       ->check(CLI::IsMember({"symmetric", "literal"}));
  auto * label_opt = segment->add_option("--stop-label", stop_label, "any_stop or minimum")
                       ->check(CLI::IsMember({"any_stop", "minimum"}));
  auto * smoothing_opt =
    segment->add_option("--smoothing-window", smoothing, "Moving-average window (samples)");
  auto * valley_opt =
    segment->add_flag("--no-valley-split", no_valley_split, "Keep long non-stop valleys whole");
  auto * proxy_opt =
    segment->add_flag("--pedal-proxy", pedal_proxy, "Infer the accelerator from accel > 0");
  segment->add_option("--out", segment_opts.out, "Output directory")->required();

  // analyze
  pipeline::AnalyzeOptions analyze_opts;
  auto * analyze = app.add_subcommand("analyze", "Compute per-trip metrics");
  analyze->add_option("--trips", analyze_opts.trips, "Ingest output directory")->required();
  analyze->add_option("--segments", analyze_opts.segments, "Segment output directory")
    ->required();
  analyze->add_option("--out", analyze_opts.out, "Output directory")->required();

  // report
  pipeline::ReportOptions report_opts;
  double bin_width = 0.0;
  auto * report = app.add_subcommand("report", "Aggregate metrics into figure-data CSVs");
  report->add_option("--metrics", report_opts.metrics, "Analyze output directory")->required();
  auto * bin_opt = report->add_option("--bin-width-mps", bin_width, "Speed bin width");
  report->add_option("--out", report_opts.out, "Output directory")->required();

  // synth
  pipeline::SynthOptions synth_opts;
  auto * synth = app.add_subcommand("synth", "Generate a synthetic corpus with ground truth");
  synth->add_option("--plans", synth_opts.plans, "Number of plans")->required();
  synth->add_option("--seed", synth_opts.seed, "Corpus seed")->required();
  synth->add_option("--noise-mps", synth_opts.noise_mps, "Speed noise sigma")
    ->check(CLI::NonNegativeNumber);
  synth->add_option("--min-bsna", synth_opts.generator.min_bsna, "Minimum BSnA per plan");
  synth->add_option("--max-bsna", synth_opts.generator.max_bsna, "Maximum BSnA per plan");
  synth->add_option("--max-scenarios", synth_opts.generator.max_scenarios, "Items per plan cap");
  synth->add_option("--out", synth_opts.out, "Output directory")->required();

  // verify
  pipeline::VerifyOptions verify_opts;
  auto * verify = app.add_subcommand("verify", "Segment a synthetic corpus against its truth");
  verify->add_option("--corpus", verify_opts.corpus, "Synth output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp & e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp & e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion & e) {
    return app.exit(e);
  } catch (const CLI::ParseError & e) {
    return report_error(ErrorKind::kUsage, e.what());
  }

  try {
    Config config = config_path.empty() ? default_config() : load_config(config_path);
    override_if(workers_opt, config.workers, workers);
    override_if(resample_opt, config.ingest.resample_1hz, resample);
    override_if(min_trip_opt, config.ingest.min_trip_s, min_trip_s);
    override_if(threshold_opt, config.event_search.threshold_mps, threshold);
    override_if(gap_opt, config.segmentation.merge_gap_s, merge_gap);
    if (guard_opt->count() > 0) {
      config.event_search.zero_guard = zero_guard_from_string(zero_guard);
    }
    if (split_opt->count() > 0) {
      config.segmentation.accel_split = accel_split_from_string(accel_split);
    }
    if (label_opt->count() > 0) {
      config.segmentation.stop_label = stop_label_from_string(stop_label);
    }
    override_if(smoothing_opt, config.event_search.smoothing_window, smoothing);
    if (valley_opt->count() > 0) {
      config.segmentation.valley_split = false;
    }
    override_if(proxy_opt, config.regimes.pedal_proxy, pedal_proxy);
    override_if(bin_opt, config.stats.bin_width_mps, bin_width);
    // Flags may have broken a range the config file respected.
    config = config_from_json(to_json(config));

    if (ingest->parsed()) {
      const auto s = pipeline::run_ingest(ingest_opts, config);
      fmt::print(
        "ingested {} files, {} samples -> {} trips ({} short runs dropped, {} rows rejected)\n",
        s.files, s.samples, s.trips, s.dropped_trips, s.rejected_rows);
    } else if (segment->parsed()) {
      const auto s = pipeline::run_segment(segment_opts, config);
      fmt::print(
        "segmented {} trips -> {} scenarios, {} regimes ({} scenarios without pedal signals)\n",
        s.trips, s.scenarios, s.regimes, s.regime_failures);
    } else if (analyze->parsed()) {
      const auto s = pipeline::run_analyze(analyze_opts, config);
      fmt::print(
        "analyzed {} trips: {} cut-ins, {} turning points\n", s.trips, s.cutins, s.turning_points);
    } else if (report->parsed()) {
      const auto s = pipeline::run_report(report_opts, config);
      fmt::print(
        "wrote {} files; turning envelope {}\n", s.files.size(),
        s.envelope_fitted ? "fitted" : "underdetermined");
    } else if (synth->parsed()) {
      const auto s = pipeline::run_synth(synth_opts, config);
      fmt::print("rendered {} trips, {} samples\n", s.trips, s.samples);
    } else if (verify->parsed()) {
      const auto s = pipeline::run_verify(verify_opts, config);
      fmt::print("trips: {}\n", s.trips);
      fmt::print("type-sequence accuracy: {:.2f}%\n", 100.0 * s.type_accuracy);
      fmt::print("exact sequence matches: {:.2f}%\n", 100.0 * s.exact_match_rate);
      fmt::print("regime boundaries within 1 sample: {:.2f}%\n", 100.0 * s.regime_match_rate);
    }
  } catch (const Error & e) {
    return report_error(e.kind(), e.what(), e.row());
  } catch (const std::exception & e) {
    return report_error(ErrorKind::kIo, e.what());
  }
  return 0;
}
