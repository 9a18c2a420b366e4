// Copyright 2026 The cavcoord Authors
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

#include "cavcoord/export.h"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "cavcoord/error.h"
#include "json_util.h"

namespace cavcoord {
namespace {

using internal::Json;

const char* DeadlineRuleName(DeadlineRule rule) {
  return rule == DeadlineRule::kNone ? "none" : "min_speed";
}

const char* LimitKindName(LimitKind kind) {
  return kind == LimitKind::kControl ? "control" : "speed";
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double ParseReal(const std::string& text, std::size_t line) {
  char* end = nullptr;
  const double x = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    ThrowConfig("trajectories.csv line " + std::to_string(line) +
                ": bad number '" + text + "'");
  }
  return x;
}

int ParseInt(const std::string& text, std::size_t line) {
  std::size_t used = 0;
  int x = 0;
  try {
    x = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (text.empty() || used != text.size()) {
    ThrowConfig("trajectories.csv line " + std::to_string(line) +
                ": bad integer '" + text + "'");
  }
  return x;
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) ThrowConfig("cannot write '" + path.string() + "'");
}

}  // namespace

std::string FormatReal(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

void WriteSchedulesCsv(std::ostream& out,
                       std::span<const Schedule> schedules) {
  out << "cav_id,zone,R,D,T,P,mode\n";
  for (const Schedule& s : schedules) {
    for (const ScheduleEntry& e : s.entries) {
      out << Value(s.cav) << ',' << Value(e.zone) << ','
          << FormatReal(e.release_s) << ',' << FormatReal(e.deadline_s) << ','
          << FormatReal(e.entry_s) << ',' << FormatReal(e.process_s) << ','
          << ToString(e.mode) << '\n';
    }
  }
}

void WriteTrajectoriesCsv(std::ostream& out, const TrajectoryLog& log) {
  out << "cav_id,t,p,v,u,zone,mode\n";
  for (const TrajectorySample& r : log.rows) {
    out << Value(r.cav) << ',' << FormatReal(r.t) << ',' << FormatReal(r.p)
        << ',' << FormatReal(r.v) << ',' << FormatReal(r.u) << ','
        << Value(r.zone) << ',' << ToString(r.mode) << '\n';
  }
}

TrajectoryLog ReadTrajectoriesCsv(std::istream& in) {
  TrajectoryLog log;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line) || line != "cav_id,t,p,v,u,zone,mode") {
    ThrowConfig("trajectories.csv line 1: unexpected header");
  }
  ++line_no;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = SplitCsv(line);
    if (f.size() != 7) {
      ThrowConfig("trajectories.csv line " + std::to_string(line_no) +
                  ": expected 7 fields");
    }
    TrajectorySample r;
    r.cav = CavId{ParseInt(f[0], line_no)};
    r.t = ParseReal(f[1], line_no);
    r.p = ParseReal(f[2], line_no);
    r.v = ParseReal(f[3], line_no);
    r.u = ParseReal(f[4], line_no);
    r.zone = ZoneId{ParseInt(f[5], line_no)};
    if (f[6] == "time_optimal") {
      r.mode = ZoneMode::kTimeOptimal;
    } else if (f[6] == "energy_optimal") {
      r.mode = ZoneMode::kEnergyOptimal;
    } else {
      ThrowConfig("trajectories.csv line " + std::to_string(line_no) +
                  ": unknown mode '" + f[6] + "'");
    }
    log.rows.push_back(r);
  }
  return log;
}

std::string SafetyJson(const SimResult& result) {
  Json doc;
  Json lateral = Json::array();
  for (const LateralViolation& v : result.safety.lateral) {
    lateral.push_back({{"zone", Value(v.zone)},
                       {"cavs", {Value(v.first), Value(v.second)}},
                       {"separation_s", v.separation_s}});
  }
  Json rear = Json::array();
  for (const RearEndViolation& v : result.safety.rear_end) {
    rear.push_back({{"zone", Value(v.zone)},
                    {"leader", Value(v.leader)},
                    {"follower", Value(v.follower)},
                    {"t", v.t},
                    {"gap_m", v.gap_m}});
  }
  Json energy = Json::array();
  for (const EnergyIssueRecord& r : result.metrics.energy_issues) {
    energy.push_back({{"cav_id", Value(r.cav)},
                      {"zone", Value(r.zone)},
                      {"kind", LimitKindName(r.violation.kind)},
                      {"t", r.violation.t},
                      {"value", r.violation.value},
                      {"lower", r.violation.lower},
                      {"upper", r.violation.upper}});
  }
  doc["lateral"] = std::move(lateral);
  doc["rear_end"] = std::move(rear);
  doc["counts"] = {{"lateral", result.safety.lateral.size()},
                   {"rear_end", result.safety.rear_end.size()},
                   {"total", result.safety.total()}};
  doc["energy_arc_limit_issues"] = std::move(energy);
  return doc.dump(2) + "\n";
}

std::string ManifestJson(const SimResult& result, const Scenario& scenario,
                         double wall_clock_s) {
  const SimConfig& c = scenario.config;
  Json doc;
  doc["library_version"] = CAVCOORD_VERSION;
  doc["seed"] = c.seed;
  doc["scenario_sha256"] = Sha256Hex(scenario.document);
  doc["config"] = {
      {"n_cavs", c.n_cavs},
      {"window_s", c.window_s},
      {"headway_s", c.headway_s},
      {"seed", c.seed},
      {"sample_step_s", c.sample_step_s},
      {"entry_speed_mps", c.entry_speed_mps},
      {"exit_speed_mps", c.exit_speed_mps},
      {"deadline_rule", DeadlineRuleName(c.deadline_rule)},
      {"min_gap_m", c.min_gap_m},
      {"max_arrival_attempts", c.max_arrival_attempts},
      {"merging_speed_mps", scenario.topology.merging_speed_mps()},
      {"limits",
       {{"u_min", c.limits.u_min},
        {"u_max", c.limits.u_max},
        {"v_min", c.limits.v_min},
        {"v_max", c.limits.v_max}}}};
  doc["wall_clock_s"] = wall_clock_s;
  doc["counts"] = {
      {"cavs", result.schedules.size()},
      {"zones", scenario.topology.zones().size()},
      {"violations", result.safety.total()},
      {"lateral_violations", result.safety.lateral.size()},
      {"rear_end_violations", result.safety.rear_end.size()},
      {"time_optimal_zones", result.metrics.time_optimal_zones},
      {"energy_optimal_zones", result.metrics.energy_optimal_zones},
      {"speed_capped_zones", result.metrics.speed_capped_zones},
      {"energy_arc_limit_issues", result.metrics.constraint_violations}};
  Json travel = Json::array();
  for (const CavMetrics& m : result.metrics.per_cav) {
    travel.push_back({{"cav_id", Value(m.cav)},
                      {"path", Value(m.path)},
                      {"arrival_s", m.arrival_s},
                      {"exit_s", m.exit_s},
                      {"travel_time_s", m.travel_time_s},
                      {"energy_optimal_zones", m.energy_optimal_zones},
                      {"speed_capped_zones", m.speed_capped_zones},
                      {"saturated", m.saturated}});
  }
  doc["travel_times"] = std::move(travel);
  doc["mean_travel_time_s"] = result.metrics.mean_travel_time_s;
  return doc.dump(2) + "\n";
}

std::string Sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int size = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &size, EVP_sha256(),
                 nullptr) != 1) {
    ThrowInternal("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < size; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xf]);
  }
  return hex;
}

void WriteRunOutputs(const std::string& dir, const SimResult& result,
                     const Scenario& scenario, double wall_clock_s) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) ThrowConfig("cannot create output directory '" + dir + "'");
  const fs::path base(dir);

  std::ostringstream schedules;
  WriteSchedulesCsv(schedules, result.schedules);
  WriteFile(base / "schedules.csv", schedules.str());

  std::ostringstream trajectories;
  WriteTrajectoriesCsv(trajectories, result.log);
  WriteFile(base / "trajectories.csv", trajectories.str());

  WriteFile(base / "safety.json", SafetyJson(result));
  WriteFile(base / "manifest.json",
            ManifestJson(result, scenario, wall_clock_s));
}

}  // namespace cavcoord
