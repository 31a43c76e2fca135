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

#include "trajseg/pipeline.hpp"

#include "trajseg/error.hpp"
#include "trajseg/ingest.hpp"
#include "trajseg/parallel.hpp"
#include "trajseg/records.hpp"
#include "trajseg/regimes.hpp"
#include "trajseg/segmentation.hpp"
#include "trajseg/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include <json.hpp>

namespace trajseg::pipeline
{

using nlohmann::json;
using records::format_double;

namespace
{

constexpr const char * kConfigFile = "effective_config.json";
constexpr const char * kTripIndex = "trips.jsonl";

struct TripEntry
{
  std::string vehicle_id;
  std::string trip_id;
  std::string vehicle_model;
  fs::path file;
};

using TripKey = std::pair<std::string, std::string>;

json parse_line(const std::string & line, const fs::path & source)
{
  try {
    return json::parse(line);
  } catch (const json::parse_error & e) {
    throw Error(ErrorKind::kSchema, "malformed record in " + source.string() + ": " + e.what());
  }
}

std::string str_field(const json & j, const char * key, const fs::path & source)
{
  if (!j.contains(key) || !j[key].is_string()) {
    throw Error(
      ErrorKind::kSchema, "record in " + source.string() + " lacks string field '" + key + "'");
  }
  return j[key].get<std::string>();
}

std::vector<TripEntry> read_trip_index(const fs::path & dir)
{
  const fs::path index = dir / kTripIndex;
  if (!fs::exists(index)) {
    throw Error(ErrorKind::kData, "no trips found in " + dir.string());
  }
  std::vector<TripEntry> out;
  for (const auto & line : records::read_lines(index)) {
    const json j = parse_line(line, index);
    TripEntry e;
    e.vehicle_id = str_field(j, "vehicle_id", index);
    e.trip_id = str_field(j, "trip_id", index);
    e.vehicle_model = j.value("vehicle_model", std::string());
    e.file = dir / str_field(j, "file", index);
    out.push_back(std::move(e));
  }
  if (out.empty()) {
    throw Error(ErrorKind::kData, "no trips found in " + dir.string());
  }
  std::sort(out.begin(), out.end(), [](const TripEntry & a, const TripEntry & b) {
    return std::tie(a.vehicle_id, a.trip_id) < std::tie(b.vehicle_id, b.trip_id);
  });
  return out;
}

json index_line(const TripRecord & trip, const std::string & file)
{
  return {
    {"vehicle_id", trip.vehicle_id},
    {"trip_id", trip.trip_id},
    {"vehicle_model", trip.vehicle_model},
    {"file", file},
    {"samples", trip.size()},
    {"duration_s", trip.duration()}};
}

std::string trip_file_name(const TripRecord & trip)
{
  return "trips/" + trip.vehicle_id + "__" + trip.trip_id + ".csv";
}

std::string padded(std::size_t i, int width)
{
  std::string s = std::to_string(i);
  return std::string(s.size() < static_cast<std::size_t>(width) ? width - s.size() : 0, '0') + s;
}

void write_config(const fs::path & out, const Config & config)
{
  records::write_file(out / kConfigFile, to_json(config));
}

std::string join_lines(const std::vector<std::string> & lines)
{
  std::string out;
  for (const auto & l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

bool has_wildcard(const std::string & s) { return s.find_first_of("*?") != std::string::npos; }

bool wildcard_match(std::string_view pattern, std::string_view name)
{
  std::size_t p = 0;
  std::size_t n = 0;
  std::size_t star = std::string_view::npos;
  std::size_t resume = 0;
  while (n < name.size()) {
    if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == name[n])) {
      ++p;
      ++n;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      resume = n;
    } else if (star != std::string_view::npos) {
      p = star + 1;
      n = ++resume;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') {
    ++p;
  }
  return p == pattern.size();
}

// Wildcards are honoured in the final path component only; a directory
// expands to the CSV files it contains.
std::vector<fs::path> expand_input(const std::string & pattern)
{
  std::vector<fs::path> out;
  const fs::path path(pattern);
  if (!has_wildcard(pattern)) {
    if (fs::is_directory(path)) {
      for (const auto & entry : fs::directory_iterator(path)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") {
          out.push_back(entry.path());
        }
      }
    } else if (fs::is_regular_file(path)) {
      out.push_back(path);
    }
  } else {
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    if (has_wildcard(dir.string())) {
      throw Error(ErrorKind::kUsage, "wildcards are only supported in the file name: " + pattern);
    }
    if (fs::is_directory(dir)) {
      const std::string leaf = path.filename().string();
      for (const auto & entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && wildcard_match(leaf, entry.path().filename().string())) {
          out.push_back(entry.path());
        }
      }
    }
  }
  if (out.empty()) {
    throw Error(ErrorKind::kIo, "no input files match " + pattern);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::map<TripKey, std::vector<json>> group_records(const fs::path & file)
{
  std::map<TripKey, std::vector<json>> out;
  if (!fs::exists(file)) {
    throw Error(ErrorKind::kIo, "missing " + file.string());
  }
  for (const auto & line : records::read_lines(file)) {
    json j = parse_line(line, file);
    TripKey key{str_field(j, "vehicle_id", file), str_field(j, "trip_id", file)};
    out[key].push_back(std::move(j));
  }
  return out;
}

json keyed(const TripRecord & trip)
{
  return {{"vehicle_id", trip.vehicle_id}, {"trip_id", trip.trip_id}};
}

void merge_into(json & target, const std::string & text)
{
  target.update(json::parse(text));
}

std::string binned_csv(const stats::BinnedSummaries & s)
{
  struct Row
  {
    double lo;
    double hi;
    const stats::BoxSummary * box;
  };
  std::vector<Row> rows;
  for (const auto & b : s.bins) {
    rows.push_back({b.lo, b.hi, &b.box});
  }
  for (const auto & [lo, hi] : s.empty_bins) {
    rows.push_back({lo, hi, nullptr});
  }
  std::sort(rows.begin(), rows.end(), [](const Row & a, const Row & b) { return a.lo < b.lo; });
  std::string out = "bin_lo,bin_hi,n,median,q1,q3,wlo,whi\n";
  for (const auto & r : rows) {
    out += format_double(r.lo) + "," + format_double(r.hi) + ",";
    if (r.box == nullptr) {
      out += "0,,,,,\n";
      continue;
    }
    const auto & b = *r.box;
    out += std::to_string(b.n) + "," + format_double(b.median) + "," + format_double(b.q1) + "," +
           format_double(b.q3) + "," + format_double(b.whisker_low) + "," +
           format_double(b.whisker_high) + "\n";
  }
  return out;
}

std::vector<stats::Record> read_records(const fs::path & file)
{
  std::vector<stats::Record> out;
  for (const auto & line : records::read_lines(file)) {
    const json j = parse_line(line, file);
    stats::Record r;
    for (const auto & [key, value] : j.items()) {
      if (value.is_number()) {
        r[key] = value.get<double>();
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<json> read_json_lines(const fs::path & file)
{
  std::vector<json> out;
  for (const auto & line : records::read_lines(file)) {
    out.push_back(parse_line(line, file));
  }
  return out;
}

}  // namespace

TripAnalysis analyze_trip(const TripRecord & trip, const Config & config)
{
  TripAnalysis out;
  auto seg = segmentation::segment_trip(trip, config);
  out.extremes = std::move(seg.extremes);
  out.scenarios = std::move(seg.scenarios);
  out.regimes.resize(out.scenarios.size());
  for (std::size_t i = 0; i < out.scenarios.size(); ++i) {
    Scenario & sc = out.scenarios[i];
    if (sc.type == ScenarioType::kCrs || sc.type == ScenarioType::kCrp) {
      continue;
    }
    if (is_braking(sc.type)) {
      sc.params = metrics::scenario_params(sc, trip, config.metrics);
    }
    try {
      out.regimes[i] = regimes::isolate_regimes(sc, trip, config.regimes);
    } catch (const Error & e) {
      if (e.kind() != ErrorKind::kMissingSignal) {
        throw;
      }
      ++out.regime_failures;
    }
  }
  return out;
}

std::vector<fs::path> list_trip_files(const fs::path & dir)
{
  std::vector<fs::path> out;
  for (const auto & e : read_trip_index(dir)) {
    out.push_back(e.file);
  }
  return out;
}

TripRecord load_trip(
  const fs::path & csv_path, const std::string & vehicle_id, const std::string & trip_id,
  const std::string & vehicle_model)
{
  auto parsed = ingest::parse_telemetry(records::read_file(csv_path), ingest::ColumnMap::canonical());
  if (!parsed.diagnostics.empty()) {
    const auto & d = parsed.diagnostics.front();
    throw Error(
      ErrorKind::kData, csv_path.string() + ": " + d.message, d.row);
  }
  TripRecord trip;
  trip.samples = std::move(parsed.samples);
  trip.vehicle_id = vehicle_id;
  trip.trip_id = trip_id;
  trip.vehicle_model = vehicle_model;
  return ingest::derive_signals(std::move(trip));
}

std::vector<TripRecord> load_trips(const fs::path & dir, int workers)
{
  const auto entries = read_trip_index(dir);
  std::vector<TripRecord> trips(entries.size());
  parallel_for(entries.size(), workers, [&](std::size_t i) {
    const auto & e = entries[i];
    trips[i] = load_trip(e.file, e.vehicle_id, e.trip_id, e.vehicle_model);
  });
  return trips;
}

IngestSummary run_ingest(const IngestOptions & options, const Config & config)
{
  const auto files = expand_input(options.input_glob);
  const ingest::ColumnMap columns =
    options.schema.empty() ? ingest::ColumnMap::canonical() : ingest::ColumnMap::load(options.schema);

  struct FileResult
  {
    std::vector<TripRecord> trips;
    std::vector<std::string> diagnostics;
    std::size_t samples{0};
    std::size_t dropped{0};
  };
  std::vector<FileResult> results(files.size());
  parallel_for(files.size(), config.workers, [&](std::size_t i) {
    const fs::path & file = files[i];
    auto parsed = ingest::parse_telemetry(records::read_file(file), columns);
    FileResult & r = results[i];
    r.samples = parsed.samples.size();
    for (const auto & d : parsed.diagnostics) {
      r.diagnostics.push_back(
        json{{"file", file.filename().string()}, {"row", d.row}, {"message", d.message}}.dump());
    }
    auto split = ingest::split_trips(parsed.samples, {config.ingest.min_trip_s});
    r.dropped = split.dropped;
    const std::string vehicle = file.stem().string();
    for (std::size_t k = 0; k < split.trips.size(); ++k) {
      TripRecord trip = std::move(split.trips[k]);
      trip.vehicle_id = vehicle;
      trip.trip_id = padded(k + 1, 4);
      trip = ingest::derive_signals(std::move(trip), {config.ingest.resample_1hz});
      r.trips.push_back(std::move(trip));
    }
  });

  IngestSummary summary;
  summary.files = files.size();
  std::vector<const TripRecord *> all;
  std::vector<std::string> diagnostics;
  for (const auto & r : results) {
    summary.samples += r.samples;
    summary.dropped_trips += r.dropped;
    summary.rejected_rows += r.diagnostics.size();
    diagnostics.insert(diagnostics.end(), r.diagnostics.begin(), r.diagnostics.end());
    for (const auto & t : r.trips) {
      all.push_back(&t);
    }
  }
  std::sort(all.begin(), all.end(), [](const TripRecord * a, const TripRecord * b) {
    return std::tie(a->vehicle_id, a->trip_id) < std::tie(b->vehicle_id, b->trip_id);
  });
  summary.trips = all.size();

  fs::create_directories(options.out);
  std::vector<std::string> index(all.size());
  parallel_for(all.size(), config.workers, [&](std::size_t i) {
    const TripRecord & trip = *all[i];
    const std::string name = trip_file_name(trip);
    records::write_file(options.out / name, records::trip_to_csv(trip));
    if (options.emit_normalized) {
      records::write_file(
        options.out / "normalized" / (trip.vehicle_id + "__" + trip.trip_id + ".csv"),
        records::trip_to_csv(trip, true));
    }
    index[i] = index_line(trip, name).dump();
  });
  records::write_file(options.out / kTripIndex, join_lines(index));
  records::write_file(options.out / "ingest_diagnostics.jsonl", join_lines(diagnostics));
  records::write_file(options.out / "column_map.json", columns.to_json());
  write_config(options.out, config);
  return summary;
}

SegmentSummary run_segment(const SegmentOptions & options, const Config & config)
{
  const auto trips = load_trips(options.trips, config.workers);
  std::vector<TripAnalysis> analyses(trips.size());
  parallel_for(trips.size(), config.workers, [&](std::size_t i) {
    analyses[i] = analyze_trip(trips[i], config);
  });

  SegmentSummary summary;
  summary.trips = trips.size();
  std::string scenarios;
  std::string regimes;
  std::string extremes;
  for (std::size_t i = 0; i < trips.size(); ++i) {
    const TripRecord & trip = trips[i];
    const TripAnalysis & a = analyses[i];
    summary.regime_failures += a.regime_failures;
    json ej = keyed(trip);
    merge_into(ej, records::to_json(a.extremes));
    extremes += ej.dump() + "\n";
    for (std::size_t s = 0; s < a.scenarios.size(); ++s) {
      json sj = keyed(trip);
      sj["index"] = s;
      merge_into(sj, records::to_json(a.scenarios[s]));
      scenarios += sj.dump() + "\n";
      ++summary.scenarios;
      for (const auto & r : a.regimes[s]) {
        json rj = keyed(trip);
        rj["scenario"] = s;
        rj["scenario_type"] = std::string(to_string(a.scenarios[s].type));
        merge_into(rj, records::to_json(r));
        regimes += rj.dump() + "\n";
        ++summary.regimes;
      }
    }
  }
  fs::create_directories(options.out);
  records::write_file(options.out / "scenarios.jsonl", scenarios);
  records::write_file(options.out / "regimes.jsonl", regimes);
  records::write_file(options.out / "extremes.jsonl", extremes);
  write_config(options.out, config);
  return summary;
}

AnalyzeSummary run_analyze(const AnalyzeOptions & options, const Config & config)
{
  const auto trips = load_trips(options.trips, config.workers);
  const auto scenario_groups = group_records(options.segments / "scenarios.jsonl");
  const auto regime_groups = group_records(options.segments / "regimes.jsonl");

  struct TripOutput
  {
    std::string metrics;
    std::string scenario_params;
    std::string regime_params;
    std::string cutins;
    std::string turning;
    std::size_t cutin_count{0};
    std::size_t turning_count{0};
  };
  std::vector<TripOutput> outputs(trips.size());
  parallel_for(trips.size(), config.workers, [&](std::size_t i) {
    const TripRecord & trip = trips[i];
    const TripKey key{trip.vehicle_id, trip.trip_id};
    auto it = scenario_groups.find(key);
    if (it == scenario_groups.end()) {
      throw Error(
        ErrorKind::kData, "no segments for trip " + trip.vehicle_id + "/" + trip.trip_id);
    }
    std::vector<Scenario> scenarios;
    for (const auto & j : it->second) {
      scenarios.push_back(records::scenario_from_json(j.dump()));
    }
    TripOutput & out = outputs[i];

    const auto cutins = metrics::detect_cut_ins(trip, config.metrics);
    const auto m = metrics::trip_metrics(trip, scenarios, cutins, config.metrics);
    json mj = keyed(trip);
    mj["vehicle_model"] = trip.vehicle_model;
    mj["distance_km"] = m.distance_km;
    mj["duration_s"] = m.duration_s;
    mj["sample_period_s"] = trip.dt;
    mj["avg_speed_mps"] = m.avg_speed_mps;
    mj["braking_events"] = m.braking_events;
    mj["cutins"] = m.cutins;
    mj["braking_event_density"] = m.braking_event_density;
    mj["cutin_density"] = m.cutin_density;
    if (m.fuel_economy_mpg) {
      mj["fuel_economy_mpg"] = *m.fuel_economy_mpg;
    }
    if (m.fuel_diagnostic) {
      mj["fuel_diagnostic"] = *m.fuel_diagnostic;
    }
    if (m.aggressiveness) {
      mj["aggressiveness"] = *m.aggressiveness;
    }
    json fractions = json::object();
    for (const auto & [type, f] : m.scenario_distance_fractions) {
      fractions[std::string(to_string(type))] = f;
    }
    mj["scenario_distance_fractions"] = fractions;
    json risk = json::object();
    for (const auto & [level, f] : m.risk_distance_fractions) {
      risk[std::string(to_string(level))] = f;
    }
    mj["risk_distance_fractions"] = risk;
    out.metrics = mj.dump() + "\n";

    for (const auto & c : cutins) {
      json cj = keyed(trip);
      cj["k"] = c.k;
      cj["t"] = trip.samples[c.k].t;
      if (c.gap_before) {
        cj["gap_before"] = *c.gap_before;
      }
      cj["gap_after"] = c.gap_after;
      cj["relative_speed"] = c.relative_speed;
      cj["approach_speed"] = c.approach_speed;
      out.cutins += cj.dump() + "\n";
    }
    out.cutin_count = cutins.size();

    for (std::size_t s = 0; s < scenarios.size(); ++s) {
      const Scenario & sc = scenarios[s];
      if (!is_braking(sc.type)) {
        continue;
      }
      const auto p = metrics::scenario_params(sc, trip, config.metrics);
      json pj = keyed(trip);
      pj["index"] = s;
      pj["type"] = std::string(to_string(sc.type));
      pj["approaching_speed"] = p.approaching_speed;
      pj["perceivable_distance"] = p.perceivable_distance;
      pj["is_turning"] = p.is_turning;
      if (p.max_curvature) {
        pj["max_curvature"] = *p.max_curvature;
      }
      if (p.turning_speed) {
        pj["turning_speed"] = *p.turning_speed;
      }
      out.scenario_params += pj.dump() + "\n";
      for (const auto & point : metrics::turning_points(sc, trip, config.metrics)) {
        json tj = keyed(trip);
        tj["curvature"] = point.curvature;
        tj["speed"] = point.speed;
        out.turning += tj.dump() + "\n";
        ++out.turning_count;
      }
    }

    if (auto rt = regime_groups.find(key); rt != regime_groups.end()) {
      for (const auto & j : rt->second) {
        const Regime r = records::regime_from_json(j.dump());
        json rj = keyed(trip);
        rj["scenario"] = j.value("scenario", 0);
        rj["scenario_type"] = j.value("scenario_type", std::string());
        rj["regime"] = std::string(to_string(r.type));
        rj["v0"] = r.params.v0;
        rj["vf"] = r.params.vf;
        rj["distance_m"] = r.params.distance_m;
        rj["duration_s"] = r.params.duration_s;
        if (r.params.aggressiveness) {
          rj["aggressiveness"] = *r.params.aggressiveness;
        }
        out.regime_params += rj.dump() + "\n";
      }
    }
  });

  AnalyzeSummary summary;
  summary.trips = trips.size();
  std::string metrics_text;
  std::string scenario_text;
  std::string regime_text;
  std::string cutin_text;
  std::string turning_text;
  for (const auto & o : outputs) {
    metrics_text += o.metrics;
    scenario_text += o.scenario_params;
    regime_text += o.regime_params;
    cutin_text += o.cutins;
    turning_text += o.turning;
    summary.cutins += o.cutin_count;
    summary.turning_points += o.turning_count;
  }
  fs::create_directories(options.out);
  records::write_file(options.out / "metrics.jsonl", metrics_text);
  records::write_file(options.out / "scenario_params.jsonl", scenario_text);
  records::write_file(options.out / "regime_params.jsonl", regime_text);
  records::write_file(options.out / "cutins.jsonl", cutin_text);
  records::write_file(options.out / "turning_points.jsonl", turning_text);
  write_config(options.out, config);
  return summary;
}

ReportSummary run_report(const ReportOptions & options, const Config & config)
{
  const fs::path metrics_file = options.metrics / "metrics.jsonl";
  if (!fs::exists(metrics_file)) {
    throw Error(ErrorKind::kIo, "missing " + metrics_file.string());
  }
  const auto trip_records = read_records(metrics_file);
  if (trip_records.empty()) {
    throw Error(ErrorKind::kData, "no trip metrics found in " + options.metrics.string());
  }
  const auto trip_json = read_json_lines(metrics_file);
  const auto scenario_records = read_records(options.metrics / "scenario_params.jsonl");
  const auto regime_json = read_json_lines(options.metrics / "regime_params.jsonl");
  const auto turning_json = read_json_lines(options.metrics / "turning_points.jsonl");

  ReportSummary summary;
  fs::create_directories(options.out);
  auto emit = [&](const std::string & name, const std::string & text) {
    records::write_file(options.out / name, text);
    summary.files.push_back(name);
  };
  const StatsConfig & sc = config.stats;
  auto binned = [&](const std::vector<stats::Record> & recs, const std::string & key,
                    const std::string & value) {
    stats::Binning binning{key, sc.bin_width_mps, 0.0};
    if (recs.empty()) {
      return stats::BinnedSummaries{};
    }
    return stats::bin_and_summarize(recs, key, value, binning, sc);
  };

  emit("fig_trip_distance.csv", binned_csv(binned(trip_records, "avg_speed_mps", "distance_km")));
  emit(
    "fig_event_density.csv",
    binned_csv(binned(trip_records, "avg_speed_mps", "braking_event_density")));
  emit(
    "fig_cutin_density.csv", binned_csv(binned(trip_records, "avg_speed_mps", "cutin_density")));
  emit(
    "fig_perceivable_distance.csv",
    binned_csv(binned(scenario_records, "approaching_speed", "perceivable_distance")));

  // Corpus-level distance shares, weighted by trip distance.
  std::map<std::string, double> by_type;
  std::map<std::string, double> by_risk;
  double total_km = 0.0;
  for (const auto & j : trip_json) {
    const double km = j.value("distance_km", 0.0);
    total_km += km;
    const json type_shares = j.value("scenario_distance_fractions", json::object());
    for (const auto & [name, f] : type_shares.items()) {
      by_type[name] += f.get<double>() * km;
    }
    const json risk_shares = j.value("risk_distance_fractions", json::object());
    for (const auto & [name, f] : risk_shares.items()) {
      by_risk[name] += f.get<double>() * km;
    }
  }
  auto shares = [&](const char * label, const auto & names, const std::map<std::string, double> & km) {
    std::string out = std::string(label) + ",distance_km,fraction\n";
    for (const auto & value : names) {
      const std::string name(to_string(value));
      auto it = km.find(name);
      const double d = it == km.end() ? 0.0 : it->second;
      out += name + "," + format_double(d) + "," +
             (total_km > 0.0 ? format_double(d / total_km) : std::string()) + "\n";
    }
    return out;
  };
  emit("fig_scenario_distribution.csv", shares("type", kAllScenarioTypes, by_type));
  emit("fig_risk_distribution.csv", shares("level", kAllRiskLevels, by_risk));

  // Regime-level figures, one file per regime type.
  std::map<std::string, std::vector<stats::Record>> per_regime;
  for (const auto & j : regime_json) {
    stats::Record r;
    for (const auto & [key, value] : j.items()) {
      if (value.is_number()) {
        r[key] = value.get<double>();
      }
    }
    per_regime[j.value("regime", std::string())].push_back(std::move(r));
  }
  for (RegimeType type : kAllRegimeTypes) {
    const std::string name(to_string(type));
    std::string lower = name;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) {
      return static_cast<char>(std::tolower(c));
    });
    const auto & recs = per_regime[name];
    emit("fig_regime_distance_" + lower + ".csv", binned_csv(binned(recs, "v0", "distance_m")));
    emit("fig_regime_time_" + lower + ".csv", binned_csv(binned(recs, "v0", "duration_s")));
    emit("fig_aggressiveness_" + lower + ".csv", binned_csv(binned(recs, "v0", "aggressiveness")));
  }

  // Share of event scenarios in which each regime occurs.
  std::map<std::tuple<std::string, std::string, long long>, std::pair<std::string, std::set<std::string>>>
    scenario_regimes;
  for (const auto & j : regime_json) {
    auto & entry = scenario_regimes[{
      j.value("vehicle_id", std::string()), j.value("trip_id", std::string()),
      j.value("scenario", 0LL)}];
    entry.first = j.value("scenario_type", std::string());
    entry.second.insert(j.value("regime", std::string()));
  }
  std::map<std::string, std::size_t> scenario_counts;
  for (const auto & r : read_json_lines(options.metrics / "scenario_params.jsonl")) {
    ++scenario_counts[r.value("type", std::string())];
  }
  std::map<std::string, std::map<std::string, std::size_t>> regime_counts;
  std::size_t a_scenarios = 0;
  for (const auto & [key, entry] : scenario_regimes) {
    for (const auto & regime : entry.second) {
      ++regime_counts[entry.first][regime];
    }
    a_scenarios += entry.first == "A" ? 1 : 0;
  }
  scenario_counts["A"] = a_scenarios;
  std::string initiation_csv = "scenario_type,scenarios,cst,b,a\n";
  for (ScenarioType type : kAllScenarioTypes) {
    if (type == ScenarioType::kCrs || type == ScenarioType::kCrp) {
      continue;
    }
    const std::string name(to_string(type));
    const std::size_t n = scenario_counts[name];
    initiation_csv += name + "," + std::to_string(n);
    for (RegimeType r : kAllRegimeTypes) {
      const std::size_t c = regime_counts[name][std::string(to_string(r))];
      initiation_csv += "," + (n > 0 ? format_double(static_cast<double>(c) / n) : std::string());
    }
    initiation_csv += "\n";
  }
  emit("fig_regime_initiation.csv", initiation_csv);

  // Turning-speed envelope.
  std::vector<stats::EnvelopePoint> points;
  for (const auto & j : turning_json) {
    points.push_back({j.value("curvature", 0.0), j.value("speed", 0.0)});
  }
  json envelope_json;
  std::string envelope_csv =
    "curvature_lo,curvature_hi,n,curvature,speed_quantile,coefficient_quantile,fitted,residual\n";
  try {
    const auto env = stats::fit_turning_envelope(points, sc);
    envelope_json["fitted"] = true;
    envelope_json["c0"] = env.c0;
    envelope_json["v_cap"] = std::isfinite(env.v_cap) ? json(env.v_cap) : json(nullptr);
    envelope_json["points"] = points.size();
    for (const auto & b : env.bins) {
      envelope_csv += format_double(b.curvature_lo) + "," + format_double(b.curvature_hi) + "," +
                      std::to_string(b.n) + "," + format_double(b.curvature) + ",";
      if (b.n > 0) {
        envelope_csv += format_double(b.speed_quantile) + "," +
                        format_double(b.coefficient_quantile) + "," + format_double(b.fitted) +
                        "," + format_double(b.residual);
      } else {
        envelope_csv += ",,,";
      }
      envelope_csv += "\n";
    }
    summary.envelope_fitted = true;
  } catch (const Error & e) {
    if (e.kind() != ErrorKind::kUnderdetermined) {
      throw;
    }
    envelope_json = {{"fitted", false}, {"reason", e.what()}, {"points", points.size()}};
  }
  emit("fig_turning_envelope.csv", envelope_csv);
  emit("turning_envelope.json", envelope_json.dump(2) + "\n");
  write_config(options.out, config);
  return summary;
}

SynthSummary run_synth(const SynthOptions & options, const Config & config)
{
  synth::GeneratorConfig generator = options.generator;
  generator.noise_sigma = options.noise_mps;

  struct Item
  {
    std::string csv;
    std::string plan;
    std::string truth;
    std::string index;
    std::string name;
    std::size_t samples{0};
  };
  std::vector<Item> items(options.plans);
  parallel_for(options.plans, config.workers, [&](std::size_t i) {
    const synth::ScenarioPlan plan = synth::random_plan(generator, synth::derive_seed(options.seed, i));
    auto rendered = synth::render_trip(plan, synth::derive_seed(options.seed, i + (1ULL << 32)), config.synth);
    TripRecord & trip = rendered.trip;
    trip.vehicle_id = "synth";
    trip.trip_id = padded(i + 1, 5);

    Item & item = items[i];
    item.name = trip_file_name(trip);
    item.csv = records::trip_to_csv(trip);
    item.plan = plan_to_json(plan) + "\n";
    item.samples = trip.size();
    item.index = index_line(trip, item.name).dump();

    json scenarios = json::array();
    for (const auto & s : rendered.scenarios) {
      scenarios.push_back(json::parse(records::to_json(s)));
    }
    json regimes = json::array();
    for (const auto & list : rendered.regimes) {
      json row = json::array();
      for (const auto & r : list) {
        row.push_back(json::parse(records::to_json(r)));
      }
      regimes.push_back(row);
    }
    json truth = keyed(trip);
    truth["scenarios"] = scenarios;
    truth["regimes"] = regimes;
    item.truth = truth.dump();
  });

  fs::create_directories(options.out);
  std::vector<std::string> index;
  std::vector<std::string> truth;
  SynthSummary summary;
  parallel_for(items.size(), config.workers, [&](std::size_t i) {
    records::write_file(options.out / items[i].name, items[i].csv);
    records::write_file(
      options.out / "plans" / ("synth__" + padded(i + 1, 5) + ".json"), items[i].plan);
  });
  for (const auto & item : items) {
    index.push_back(item.index);
    truth.push_back(item.truth);
    summary.samples += item.samples;
  }
  summary.trips = items.size();
  records::write_file(options.out / kTripIndex, join_lines(index));
  records::write_file(options.out / "truth.jsonl", join_lines(truth));
  records::write_file(
    options.out / "corpus.json",
    json{
      {"plans", options.plans}, {"seed", options.seed}, {"noise_mps", options.noise_mps}}
        .dump(2) +
      "\n");
  write_config(options.out, config);
  return summary;
}

TripComparison compare_with_truth(
  const TripAnalysis & analysis, std::span<const Scenario> truth_scenarios,
  std::span<const std::vector<Regime>> truth_regimes, Index tolerance)
{
  TripComparison out;
  const auto want = synth::types_of(truth_scenarios);
  const auto got = synth::types_of(analysis.scenarios);
  out.type_accuracy = synth::sequence_accuracy(want, got);
  out.exact_types = want == got;
  if (!out.exact_types || truth_regimes.size() != analysis.regimes.size()) {
    return out;
  }
  auto near = [&](Index a, Index b) { return (a > b ? a - b : b - a) <= tolerance; };
  out.regimes_within_tolerance = true;
  for (std::size_t i = 0; i < truth_regimes.size() && out.regimes_within_tolerance; ++i) {
    const auto & w = truth_regimes[i];
    const auto & g = analysis.regimes[i];
    if (w.size() != g.size()) {
      out.regimes_within_tolerance = false;
      break;
    }
    for (std::size_t r = 0; r < w.size(); ++r) {
      if (w[r].type != g[r].type || !near(w[r].k0, g[r].k0) || !near(w[r].kf, g[r].kf)) {
        out.regimes_within_tolerance = false;
        break;
      }
    }
  }
  return out;
}

VerifySummary run_verify(const VerifyOptions & options, const Config & config)
{
  const auto entries = read_trip_index(options.corpus);
  const auto truth_groups = group_records(options.corpus / "truth.jsonl");

  std::vector<TripComparison> results(entries.size());
  parallel_for(entries.size(), config.workers, [&](std::size_t i) {
    const auto & e = entries[i];
    const TripRecord trip = load_trip(e.file, e.vehicle_id, e.trip_id, e.vehicle_model);
    auto it = truth_groups.find({e.vehicle_id, e.trip_id});
    if (it == truth_groups.end()) {
      throw Error(ErrorKind::kData, "no ground truth for trip " + e.vehicle_id + "/" + e.trip_id);
    }
    const json & t = it->second.front();
    std::vector<Scenario> scenarios;
    for (const auto & s : t.at("scenarios")) {
      scenarios.push_back(records::scenario_from_json(s.dump()));
    }
    std::vector<std::vector<Regime>> regimes;
    for (const auto & list : t.at("regimes")) {
      auto & row = regimes.emplace_back();
      for (const auto & r : list) {
        row.push_back(records::regime_from_json(r.dump()));
      }
    }
    results[i] = compare_with_truth(analyze_trip(trip, config), scenarios, regimes);
  });

  VerifySummary summary;
  summary.trips = results.size();
  std::size_t exact = 0;
  std::size_t regimes_ok = 0;
  double accuracy = 0.0;
  for (const auto & r : results) {
    accuracy += r.type_accuracy;
    exact += r.exact_types ? 1 : 0;
    regimes_ok += r.regimes_within_tolerance ? 1 : 0;
  }
  summary.type_accuracy = accuracy / static_cast<double>(results.size());
  summary.exact_match_rate = static_cast<double>(exact) / static_cast<double>(results.size());
  summary.regime_match_rate =
    exact > 0 ? static_cast<double>(regimes_ok) / static_cast<double>(exact) : 0.0;
  return summary;
}

}  // namespace trajseg::pipeline
