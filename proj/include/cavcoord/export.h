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

#ifndef CAVCOORD_EXPORT_H_
#define CAVCOORD_EXPORT_H_

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include "cavcoord/scenario.h"
#include "cavcoord/simulation.h"

namespace cavcoord {

// Run exports. CSV files carry a header row and print reals with 9
// significant digits ("inf" for an unbounded deadline).
//
//   schedules.csv     cav_id,zone,R,D,T,P,mode
//   trajectories.csv  cav_id,t,p,v,u,zone,mode
//   safety.json       lateral/rear-end violations and energy-arc issues
//   manifest.json     config echo, version, seed, scenario hash, timing,
//                     counts

std::string FormatReal(double x);

void WriteSchedulesCsv(std::ostream& out, std::span<const Schedule> schedules);
void WriteTrajectoriesCsv(std::ostream& out, const TrajectoryLog& log);

// Parses a trajectories.csv stream. Ticks are not stored in the file and are
// left at zero. Throws kConfig with the line number on malformed input.
TrajectoryLog ReadTrajectoriesCsv(std::istream& in);

std::string SafetyJson(const SimResult& result);
std::string ManifestJson(const SimResult& result, const Scenario& scenario,
                         double wall_clock_s);

std::string Sha256Hex(std::string_view data);

// Writes the four export files into `dir`, creating it if needed. Throws
// kConfig when the directory or a file cannot be written.
void WriteRunOutputs(const std::string& dir, const SimResult& result,
                     const Scenario& scenario, double wall_clock_s);

}  // namespace cavcoord

#endif  // CAVCOORD_EXPORT_H_
