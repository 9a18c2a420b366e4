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

#ifndef CAVCOORD_SCHEDULER_H_
#define CAVCOORD_SCHEDULER_H_

#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <unordered_map>
#include <vector>

#include "cavcoord/dynamics.h"
#include "cavcoord/time_optimal.h"
#include "cavcoord/topology.h"

namespace cavcoord {

enum class CavId : std::int32_t {};
constexpr int Value(CavId id) { return static_cast<int>(id); }

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

// True when later - earlier >= h holds for the exact real difference of the
// two doubles. The difference is split into its rounded value and the exact
// rounding error (two-sum), so a time computed as `earlier + h` that rounded
// down is rejected.
inline bool AtLeastApart(double later, double earlier, double h) {
  const double s = later - earlier;
  if (s != h) return s > h;
  const double back = s - later;
  const double err = (later - (s - back)) + (-earlier - back);
  return err >= 0.0;
}

// Headway predicate used everywhere a separation is enforced or verified:
// |a - b| >= h in exact arithmetic.
inline bool Separated(double a, double b, double h) {
  return AtLeastApart(a, b, h) || AtLeastApart(b, a, h);
}

struct QueueEntry {
  CavId cav{};
  double arrival_s = 0.0;
  PathId path{};
  int order = 0;  // 1-based position in the queue
};

// Vehicles ordered by arrival; simultaneous arrivals go shortest path first,
// then lowest id.
class ArrivalQueue {
 public:
  // Throws kInvalidArgument on a duplicate id, negative arrival or unknown
  // path. Orders of entries behind the new one shift by one.
  QueueEntry Enqueue(CavId cav, double arrival_s, PathId path,
                     const Topology& topology);

  std::span<const QueueEntry> entries() const { return entries_; }

 private:
  struct Keyed {
    QueueEntry entry;
    double path_length = 0.0;
  };
  std::vector<Keyed> keyed_;
  std::vector<QueueEntry> entries_;
};

enum class ZoneMode { kTimeOptimal, kEnergyOptimal };

const char* ToString(ZoneMode mode);

struct ScheduleEntry {
  ZoneId zone{};
  double entry_s = 0.0;           // T
  double release_s = 0.0;         // R
  double deadline_s = kUnbounded; // D
  double process_s = 0.0;         // P
  ZoneMode mode = ZoneMode::kTimeOptimal;
  ZoneBoundary boundary;          // path coordinates and boundary speeds
};

struct Schedule {
  CavId cav{};
  PathId path{};
  double arrival_s = 0.0;
  std::vector<ScheduleEntry> entries;
  // Control-zone exit, scheduled like one more zone entry.
  double exit_s = 0.0;
  double exit_release_s = 0.0;
  double exit_deadline_s = kUnbounded;

  // Entry time of the zone after `index`, or the control-zone exit.
  double ExitOf(std::size_t index) const;
  double ReleaseAfter(std::size_t index) const;
};

// One committed traversal of a zone.
struct Occupant {
  CavId cav{};
  double entry_s = 0.0;
  double exit_s = 0.0;
};

// Committed traversals of the zones the arriving vehicle shares with
// lower-order vehicles.
struct ConflictContext {
  std::unordered_map<ZoneId, std::vector<Occupant>> zones;

  std::span<const Occupant> Occupants(ZoneId zone) const;
};

// Coordinator store of committed schedules. Mutated only through Commit.
class DroneMemory {
 public:
  explicit DroneMemory(double headway_s);

  double headway_s() const { return headway_s_; }

  // Validates the schedule against every committed traversal and its own
  // invariants, then records it. Throws kInternal and leaves the memory
  // untouched on any violation.
  void Commit(const Schedule& schedule);

  bool Contains(CavId cav) const { return index_.contains(cav); }
  const Schedule& schedule(CavId cav) const;
  // In commit order.
  std::span<const Schedule> schedules() const { return schedules_; }
  // Sorted by entry time.
  std::span<const Occupant> Occupancy(ZoneId zone) const;

 private:
  double headway_s_;
  std::vector<Schedule> schedules_;
  std::unordered_map<CavId, std::size_t> index_;
  std::unordered_map<ZoneId, std::vector<Occupant>> occupancy_;
};

ConflictContext BuildConflictContext(const DroneMemory& memory,
                                     const Topology& topology,
                                     const Path& path);

// Smallest T >= release with Separated(T, t, h) for every occupied t and
// T <= deadline. Throws kInfeasible when the deadline cannot be met.
double EarliestFeasibleEntry(double release_s, double deadline_s,
                             std::span<const double> occupied_s,
                             double headway_s);

enum class DeadlineRule {
  kNone,      // D unbounded
  kMinSpeed,  // D(next) = T + zone length / v_min
};

struct SchedulerOptions {
  double headway_s = 1.5;
  double entry_speed_mps = 15.0;
  double exit_speed_mps = 15.0;
  DeadlineRule deadline_rule = DeadlineRule::kNone;
};

// Boundary speeds along a path: entry speed, the merging speed at every
// interior boundary, exit speed. Throws kConfig when an end speed disagrees
// with an adjacent merging zone.
std::vector<double> BoundarySpeeds(const Path& path, const Topology& topology,
                                   const SchedulerOptions& options);

// Computes the zone-entry schedule of one arriving vehicle against the
// committed traversals in `context`. A pure function of its inputs.
Schedule SchedulePath(const QueueEntry& cav, const ConflictContext& context,
                      const Topology& topology, const Limits& limits,
                      const SchedulerOptions& options);

}  // namespace cavcoord

#endif  // CAVCOORD_SCHEDULER_H_
