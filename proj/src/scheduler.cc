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

#include "cavcoord/scheduler.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <tuple>

#include "cavcoord/error.h"

namespace cavcoord {
namespace {

std::string CavName(CavId cav) { return "CAV " + std::to_string(Value(cav)); }

std::string BoundaryName(const Path& path, std::size_t boundary) {
  if (boundary >= path.zones.size()) return "control-zone exit";
  return "zone " + std::to_string(Value(path.zones[boundary]));
}

// Constraint on the time at one boundary of a rigid block.
struct BlockConstraint {
  enum class Kind {
    kAfter,   // t >= ref + h
    kBefore,  // ref >= t + h
    kApart,   // Separated(t, ref, h)
  };
  Kind kind = Kind::kAfter;
  std::size_t slot = 0;
  double ref = 0.0;
};

// A free boundary followed by boundaries rigidly tied to it through merging
// zones: times[s + 1] = times[s] + steps[s].
class RigidBlock {
 public:
  explicit RigidBlock(std::vector<double> steps) : steps_(std::move(steps)) {}

  std::size_t size() const { return steps_.size() + 1; }

  double TimeAt(double t0, std::size_t slot) const {
    double t = t0;
    for (std::size_t s = 0; s < slot; ++s) t += steps_[s];
    return t;
  }

 private:
  std::vector<double> steps_;
};

bool Satisfied(const BlockConstraint& c, double t, double h) {
  switch (c.kind) {
    case BlockConstraint::Kind::kAfter:
      return AtLeastApart(t, c.ref, h);
    case BlockConstraint::Kind::kBefore:
      return AtLeastApart(c.ref, t, h);
    case BlockConstraint::Kind::kApart:
      return Separated(t, c.ref, h);
  }
  return false;
}

// Earliest free-boundary time >= release that satisfies every constraint, or
// nullopt. Lower-type violations are resolved by jumping to the end of the
// blocked interval; upper-type constraints and the deadline are checked last.
std::optional<double> SearchBlock(double release, double deadline,
                                  const RigidBlock& block,
                                  std::span<const BlockConstraint> cons,
                                  double h) {
  double t = release;
  const std::size_t max_rounds = 4 * cons.size() + 8;
  for (std::size_t round = 0; round < max_rounds; ++round) {
    bool moved = false;
    for (const BlockConstraint& c : cons) {
      if (c.kind == BlockConstraint::Kind::kBefore) continue;
      if (Satisfied(c, block.TimeAt(t, c.slot), h)) continue;
      const double offset = block.TimeAt(t, c.slot) - t;
      t = std::max(c.ref + h - offset, std::nextafter(t, kUnbounded));
      while (!Satisfied(c, block.TimeAt(t, c.slot), h)) {
        t = std::nextafter(t, kUnbounded);
      }
      moved = true;
    }
    if (!moved) break;
  }
  for (const BlockConstraint& c : cons) {
    if (!Satisfied(c, block.TimeAt(t, c.slot), h)) return std::nullopt;
  }
  if (t > deadline) return std::nullopt;
  return t;
}

}  // namespace

const char* ToString(ZoneMode mode) {
  return mode == ZoneMode::kTimeOptimal ? "time_optimal" : "energy_optimal";
}

QueueEntry ArrivalQueue::Enqueue(CavId cav, double arrival_s, PathId path,
                                 const Topology& topology) {
  if (!(arrival_s >= 0.0)) {
    ThrowInvalidArgument(CavName(cav) + ": negative arrival time");
  }
  for (const Keyed& k : keyed_) {
    if (k.entry.cav == cav) {
      ThrowInvalidArgument(CavName(cav) + " already queued");
    }
  }
  Keyed item;
  item.entry = {cav, arrival_s, path, 0};
  item.path_length = topology.path(path).total_length_m;

  auto key = [](const Keyed& k) {
    return std::make_tuple(k.entry.arrival_s, k.path_length,
                           Value(k.entry.cav));
  };
  auto pos = std::upper_bound(
      keyed_.begin(), keyed_.end(), item,
      [&](const Keyed& a, const Keyed& b) { return key(a) < key(b); });
  pos = keyed_.insert(pos, item);

  entries_.clear();
  for (std::size_t i = 0; i < keyed_.size(); ++i) {
    keyed_[i].entry.order = static_cast<int>(i + 1);
    entries_.push_back(keyed_[i].entry);
  }
  return pos->entry;
}

double Schedule::ExitOf(std::size_t index) const {
  return index + 1 < entries.size() ? entries[index + 1].entry_s : exit_s;
}

double Schedule::ReleaseAfter(std::size_t index) const {
  return index + 1 < entries.size() ? entries[index + 1].release_s
                                    : exit_release_s;
}

std::span<const Occupant> ConflictContext::Occupants(ZoneId zone) const {
  auto it = zones.find(zone);
  if (it == zones.end()) return {};
  return it->second;
}

DroneMemory::DroneMemory(double headway_s) : headway_s_(headway_s) {
  if (!(headway_s > 0.0)) ThrowInvalidArgument("headway must be positive");
}

const Schedule& DroneMemory::schedule(CavId cav) const {
  auto it = index_.find(cav);
  if (it == index_.end()) {
    ThrowInvalidArgument(CavName(cav) + " not committed");
  }
  return schedules_[it->second];
}

std::span<const Occupant> DroneMemory::Occupancy(ZoneId zone) const {
  auto it = occupancy_.find(zone);
  if (it == occupancy_.end()) return {};
  return it->second;
}

void DroneMemory::Commit(const Schedule& s) {
  const std::string who = CavName(s.cav);
  if (Contains(s.cav)) ThrowInternal(who + " already committed");
  if (s.entries.empty()) ThrowInternal(who + ": empty schedule");

  for (std::size_t k = 0; k < s.entries.size(); ++k) {
    const ScheduleEntry& e = s.entries[k];
    const std::string where =
        who + " zone " + std::to_string(Value(e.zone)) + ": ";
    if (!(e.release_s <= e.entry_s && e.entry_s <= e.deadline_s)) {
      ThrowInternal(where + "entry time outside [release, deadline]");
    }
    if (!(s.ExitOf(k) > e.entry_s)) {
      ThrowInternal(where + "entry times not increasing");
    }
    const bool on_release = s.ExitOf(k) == s.ReleaseAfter(k);
    if (on_release != (e.mode == ZoneMode::kTimeOptimal)) {
      ThrowInternal(where + "mode disagrees with the release-time test");
    }
    for (const Occupant& o : Occupancy(e.zone)) {
      if (!Separated(e.entry_s, o.entry_s, headway_s_)) {
        ThrowInternal(where + "headway violated against " + CavName(o.cav));
      }
    }
  }
  if (!(s.exit_release_s <= s.exit_s && s.exit_s <= s.exit_deadline_s)) {
    ThrowInternal(who + ": exit time outside [release, deadline]");
  }

  index_.emplace(s.cav, schedules_.size());
  schedules_.push_back(s);
  for (std::size_t k = 0; k < s.entries.size(); ++k) {
    std::vector<Occupant>& list = occupancy_[s.entries[k].zone];
    const Occupant o{s.cav, s.entries[k].entry_s, s.ExitOf(k)};
    auto pos = std::upper_bound(list.begin(), list.end(), o,
                                [](const Occupant& a, const Occupant& b) {
                                  return a.entry_s < b.entry_s;
                                });
    list.insert(pos, o);
  }
}

ConflictContext BuildConflictContext(const DroneMemory& memory,
                                     const Topology& topology,
                                     const Path& path) {
  ConflictContext ctx;
  for (const Schedule& other : memory.schedules()) {
    const Path& other_path = topology.path(other.path);
    for (ZoneId z : ConflictZones(path, other_path)) {
      const std::size_t k = *other_path.IndexOf(z);
      ctx.zones[z].push_back(
          {other.cav, other.entries[k].entry_s, other.ExitOf(k)});
    }
  }
  for (auto& [zone, list] : ctx.zones) {
    std::sort(list.begin(), list.end(),
              [](const Occupant& a, const Occupant& b) {
                return a.entry_s < b.entry_s;
              });
  }
  return ctx;
}

double EarliestFeasibleEntry(double release_s, double deadline_s,
                             std::span<const double> occupied_s,
                             double headway_s) {
  std::vector<BlockConstraint> cons;
  cons.reserve(occupied_s.size());
  for (double t : occupied_s) {
    cons.push_back({BlockConstraint::Kind::kApart, 0, t});
  }
  const auto t =
      SearchBlock(release_s, deadline_s, RigidBlock({}), cons, headway_s);
  if (!t) {
    ThrowInfeasible("no entry time satisfies the headway before deadline " +
                    std::to_string(deadline_s));
  }
  return *t;
}

std::vector<double> BoundarySpeeds(const Path& path, const Topology& topology,
                                   const SchedulerOptions& options) {
  const std::size_t n = path.zones.size();
  const double v_z = topology.merging_speed_mps();
  std::vector<double> speeds(n + 1, v_z);
  speeds.front() = options.entry_speed_mps;
  speeds.back() = options.exit_speed_mps;
  if (topology.zone(path.zones.front()).kind == ZoneKind::kMerging &&
      speeds.front() != v_z) {
    ThrowConfig("path " + std::to_string(Value(path.id)) +
                " starts in a merging zone; entry speed must equal the "
                "merging speed");
  }
  if (topology.zone(path.zones.back()).kind == ZoneKind::kMerging &&
      speeds.back() != v_z) {
    ThrowConfig("path " + std::to_string(Value(path.id)) +
                " ends in a merging zone; exit speed must equal the merging "
                "speed");
  }
  return speeds;
}

Schedule SchedulePath(const QueueEntry& cav, const ConflictContext& context,
                      const Topology& topology, const Limits& limits,
                      const SchedulerOptions& options) {
  const double h = options.headway_s;
  if (!(h > 0.0)) ThrowInvalidArgument("headway must be positive");
  const Path& path = topology.path(cav.path);
  const std::size_t n = path.zones.size();
  const std::vector<double> speeds = BoundarySpeeds(path, topology, options);

  Schedule out;
  out.cav = cav.cav;
  out.path = cav.path;
  out.arrival_s = cav.arrival_s;
  out.entries.resize(n);

  std::vector<const Zone*> zones(n);
  double pos = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    zones[k] = &topology.zone(path.zones[k]);
    ScheduleEntry& e = out.entries[k];
    e.zone = zones[k]->id;
    e.boundary = {pos, pos + zones[k]->length_m, speeds[k], speeds[k + 1]};
    pos += zones[k]->length_m;
    try {
      e.process_s = ProcessTime(*zones[k], e.boundary, limits,
                                topology.merging_speed_mps());
    } catch (const Error& err) {
      throw Error(err.kind(), CavName(cav.cav) + " zone " +
                                  std::to_string(Value(e.zone)) + ": " +
                                  err.what());
    }
  }

  auto deadline_after = [&](std::size_t k, double entry) {
    if (options.deadline_rule == DeadlineRule::kNone) return kUnbounded;
    return entry + zones[k]->length_m / limits.v_min;
  };
  auto merging = [&](std::size_t k) {
    return zones[k]->kind == ZoneKind::kMerging;
  };

  // Boundary k is the entry of zone k; boundary n is the control-zone exit.
  std::vector<double> entry(n + 1), release(n + 1), deadline(n + 1);
  entry[0] = release[0] = cav.arrival_s;
  deadline[0] = options.deadline_rule == DeadlineRule::kNone ? kUnbounded
                                                             : cav.arrival_s;

  // The control-zone entry is the arrival itself; nothing upstream can absorb
  // a delay, so a clash there is infeasible.
  for (const Occupant& o : context.Occupants(path.zones[0])) {
    if (!Separated(cav.arrival_s, o.entry_s, h) || o.entry_s > cav.arrival_s) {
      ThrowInfeasible(CavName(cav.cav) + ": arrival at " +
                      std::to_string(cav.arrival_s) + " s conflicts with " +
                      CavName(o.cav) + " entering zone " +
                      std::to_string(Value(path.zones[0])) + " at " +
                      std::to_string(o.entry_s) + " s");
    }
  }

  std::size_t j = 1;
  while (j <= n) {
    std::size_t last = j;
    while (last < n && merging(last)) ++last;

    std::vector<double> steps;
    for (std::size_t q = j; q < last; ++q) {
      steps.push_back(out.entries[q].process_s);
    }
    const RigidBlock block(std::move(steps));

    std::vector<BlockConstraint> cons;
    const bool rigid = merging(j - 1);
    if (!rigid) {
      // Vehicles leave a lane in the order they entered it.
      for (const Occupant& o : context.Occupants(path.zones[j - 1])) {
        const auto kind = o.entry_s <= entry[j - 1]
                              ? BlockConstraint::Kind::kAfter
                              : BlockConstraint::Kind::kBefore;
        cons.push_back({kind, 0, o.exit_s});
      }
    }
    for (std::size_t q = j; q < last; ++q) {
      for (const Occupant& o : context.Occupants(path.zones[q])) {
        cons.push_back({BlockConstraint::Kind::kApart, q - j, o.entry_s});
      }
    }
    if (last < n) {
      // No entering a lane ahead of a committed vehicle.
      for (const Occupant& o : context.Occupants(path.zones[last])) {
        cons.push_back({BlockConstraint::Kind::kAfter, last - j, o.entry_s});
      }
    }

    release[j] = entry[j - 1] + out.entries[j - 1].process_s;
    deadline[j] = deadline_after(j - 1, entry[j - 1]);
    const auto t = SearchBlock(release[j], rigid ? release[j] : deadline[j],
                               block, cons, h);
    if (!t) {
      ThrowInfeasible(CavName(cav.cav) + ": no feasible entry time at " +
                      BoundaryName(path, j) + " (release " +
                      std::to_string(release[j]) + ", deadline " +
                      std::to_string(deadline[j]) + ")");
    }
    entry[j] = *t;
    for (std::size_t q = j + 1; q <= last; ++q) {
      release[q] = entry[q - 1] + out.entries[q - 1].process_s;
      entry[q] = release[q];
      deadline[q] = deadline_after(q - 1, entry[q - 1]);
    }
    j = last + 1;
  }

  for (std::size_t k = 0; k < n; ++k) {
    ScheduleEntry& e = out.entries[k];
    e.entry_s = entry[k];
    e.release_s = release[k];
    e.deadline_s = deadline[k];
    e.mode = entry[k + 1] == release[k + 1] ? ZoneMode::kTimeOptimal
                                            : ZoneMode::kEnergyOptimal;
  }
  out.exit_s = entry[n];
  out.exit_release_s = release[n];
  out.exit_deadline_s = deadline[n];
  return out;
}

}  // namespace cavcoord
