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

#include "cavcoord/simulation.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>

#include "cavcoord/error.h"

namespace cavcoord {
namespace {

// Uniform double on [0, 1) from the top 53 bits, identical on every platform.
double UnitUniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::optional<ZoneId> Neighbor(const Path& path, std::size_t index, int dir) {
  if (dir < 0) {
    if (index == 0) return std::nullopt;
    return path.zones[index - 1];
  }
  if (index + 1 >= path.zones.size()) return std::nullopt;
  return path.zones[index + 1];
}

struct RowSpan {
  std::size_t first_row = 0;
  std::int64_t first_tick = 0;
  std::size_t count = 0;

  const TrajectorySample* At(const TrajectoryLog& log,
                             std::int64_t tick) const {
    if (tick < first_tick) return nullptr;
    const auto offset = static_cast<std::size_t>(tick - first_tick);
    if (offset >= count) return nullptr;
    return &log.rows[first_row + offset];
  }
};

std::unordered_map<CavId, RowSpan> IndexRows(const TrajectoryLog& log) {
  std::unordered_map<CavId, RowSpan> spans;
  for (std::size_t i = 0; i < log.rows.size(); ++i) {
    const TrajectorySample& row = log.rows[i];
    auto [it, inserted] = spans.try_emplace(row.cav);
    if (inserted) {
      it->second.first_row = i;
      it->second.first_tick = row.tick;
    }
    ++it->second.count;
  }
  return spans;
}

// The speed-capped replacement for a cubic that crosses a speed limit.
std::optional<SpeedCappedArc> CapSpeed(const CubicCoeffs& cubic,
                                       const TimedBoundary& timed,
                                       const Limits& limits) {
  for (const ConstraintViolation& v :
       CheckInactiveConstraints(cubic, timed, limits)) {
    if (v.kind != LimitKind::kSpeed) continue;
    return SolveSpeedCapped(
        timed, v.value > v.upper ? limits.v_max : limits.v_min, limits);
  }
  return std::nullopt;
}

}  // namespace

std::vector<Arrival> SampleArrivals(const SimConfig& config,
                                    const Topology& topology) {
  config.Validate(topology);
  std::mt19937_64 rng(config.seed);
  const auto paths = topology.paths();
  std::vector<Arrival> out;
  out.reserve(static_cast<std::size_t>(config.n_cavs));
  for (int k = 0; k < config.n_cavs; ++k) {
    const Path& path = paths[static_cast<std::size_t>(k) % paths.size()];
    const ZoneId entry_zone = path.zones.front();
    bool placed = false;
    for (int attempt = 0; attempt < config.max_arrival_attempts; ++attempt) {
      const double t = UnitUniform(rng) * config.window_s;
      bool ok = true;
      for (const Arrival& prev : out) {
        if (topology.path(prev.path).zones.front() == entry_zone &&
            !Separated(t, prev.arrival_s, config.headway_s)) {
          ok = false;
          break;
        }
      }
      if (ok) {
        out.push_back({CavId{k + 1}, t, path.id});
        placed = true;
        break;
      }
    }
    if (!placed) {
      ThrowInfeasible("arrival window overcrowded: CAV " +
                      std::to_string(k + 1) + " could not be placed on path " +
                      std::to_string(Value(path.id)) + " after " +
                      std::to_string(config.max_arrival_attempts) +
                      " draws");
    }
  }
  return out;
}

ScheduledTrajectory::ScheduledTrajectory(const Schedule& schedule,
                                         const Topology& topology,
                                         const Limits& limits) {
  if (schedule.entries.empty()) ThrowInvalidArgument("empty schedule");
  begin_s_ = schedule.entries.front().entry_s;
  end_s_ = schedule.exit_s;
  for (std::size_t k = 0; k < schedule.entries.size(); ++k) {
    const ScheduleEntry& e = schedule.entries[k];
    Segment seg;
    seg.zone = e.zone;
    seg.kind = topology.zone(e.zone).kind;
    seg.mode = e.mode;
    seg.t_begin = e.entry_s;
    seg.t_end = schedule.ExitOf(k);
    seg.timed = {e.boundary, seg.t_begin, seg.t_end};
    if (seg.kind == ZoneKind::kRegular) {
      if (seg.mode == ZoneMode::kTimeOptimal) {
        seg.plan = PlanMinTime(e.boundary, limits);
      } else {
        seg.cubic = SolveEnergy(seg.timed);
        seg.capped = CapSpeed(seg.cubic, seg.timed, limits);
      }
    }
    segments_.push_back(seg);
  }
}

bool ScheduledTrajectory::saturated() const {
  return std::any_of(segments_.begin(), segments_.end(), [](const Segment& s) {
    return s.kind == ZoneKind::kRegular && s.mode == ZoneMode::kTimeOptimal &&
           s.plan.saturated;
  });
}

int ScheduledTrajectory::speed_capped_zones() const {
  return static_cast<int>(
      std::count_if(segments_.begin(), segments_.end(),
                    [](const Segment& s) { return s.capped.has_value(); }));
}

TrajectoryPoint ScheduledTrajectory::Eval(double t) const {
  t = std::clamp(t, begin_s_, end_s_);
  const Segment* seg = &segments_.back();
  for (const Segment& s : segments_) {
    if (t < s.t_end) {
      seg = &s;
      break;
    }
  }
  TrajectoryPoint pt;
  pt.zone = seg->zone;
  pt.mode = seg->mode;
  const ZoneBoundary& b = seg->timed.boundary;
  if (seg->kind == ZoneKind::kMerging) {
    pt.state = {b.p_s + b.v_s * (t - seg->t_begin), b.v_s};
    pt.u = 0.0;
  } else if (seg->mode == ZoneMode::kTimeOptimal) {
    const double local = std::clamp(t - seg->t_begin, 0.0, seg->plan.t_e);
    pt.state = EvalTrajectory(seg->plan, local);
    pt.u = FeedbackControl(seg->plan, seg->t_begin + local, seg->t_begin);
  } else {
    const EnergySample s = seg->capped ? EvalSpeedCapped(*seg->capped, t)
                                       : EvalEnergy(seg->cubic, t);
    pt.state = s.state;
    pt.u = s.u;
  }
  return pt;
}

std::vector<ScheduledTrajectory::EnergyIssue> ScheduledTrajectory::EnergyIssues(
    const Limits& limits) const {
  std::vector<EnergyIssue> out;
  for (const Segment& s : segments_) {
    if (s.kind != ZoneKind::kRegular || s.mode != ZoneMode::kEnergyOptimal) {
      continue;
    }
    // A capped arc respects every limit by construction.
    if (s.capped) continue;
    for (const ConstraintViolation& v :
         CheckInactiveConstraints(s.cubic, s.timed, limits)) {
      out.push_back({s.zone, v});
    }
  }
  return out;
}

SafetyReport VerifySafety(std::span<const Schedule> schedules,
                          const Topology& topology, double headway_s,
                          const TrajectoryLog& log, double min_gap_m) {
  SafetyReport report;
  const auto spans = IndexRows(log);

  for (std::size_t a = 0; a < schedules.size(); ++a) {
    for (std::size_t b = a + 1; b < schedules.size(); ++b) {
      const Schedule& sa = schedules[a];
      const Schedule& sb = schedules[b];
      const Path& pa = topology.path(sa.path);
      const Path& pb = topology.path(sb.path);
      for (ZoneId z : ConflictZones(pa, pb)) {
        const std::size_t ia = *pa.IndexOf(z);
        const std::size_t ib = *pb.IndexOf(z);
        const double ta = sa.entries[ia].entry_s;
        const double tb = sb.entries[ib].entry_s;
        if (!Separated(ta, tb, headway_s)) {
          report.lateral.push_back({z, sa.cav, sb.cav, std::abs(ta - tb)});
        }

        const bool same_direction =
            Neighbor(pa, ia, -1) == Neighbor(pb, ib, -1) ||
            Neighbor(pa, ia, +1) == Neighbor(pb, ib, +1);
        if (!same_direction) continue;

        const bool a_leads = ta <= tb;
        const Schedule& lead = a_leads ? sa : sb;
        const Schedule& follow = a_leads ? sb : sa;
        const Path& lead_path = a_leads ? pa : pb;
        const Path& follow_path = a_leads ? pb : pa;
        const std::size_t il = a_leads ? ia : ib;
        const std::size_t jf = a_leads ? ib : ia;

        if (!(lead.ExitOf(il) < follow.ExitOf(jf))) {
          report.rear_end.push_back(
              {z, lead.cav, follow.cav, follow.ExitOf(jf), 0.0});
          continue;
        }

        auto sl = spans.find(lead.cav);
        auto sf = spans.find(follow.cav);
        if (sl == spans.end() || sf == spans.end()) continue;
        const double start_l = topology.ZoneStart(lead_path, il);
        const double start_f = topology.ZoneStart(follow_path, jf);
        const std::int64_t t0 =
            std::max(sl->second.first_tick, sf->second.first_tick);
        const std::int64_t t1 = std::min(
            sl->second.first_tick + static_cast<std::int64_t>(sl->second.count),
            sf->second.first_tick +
                static_cast<std::int64_t>(sf->second.count));
        for (std::int64_t tick = t0; tick < t1; ++tick) {
          const TrajectorySample* rl = sl->second.At(log, tick);
          const TrajectorySample* rf = sf->second.At(log, tick);
          if (rl == nullptr || rf == nullptr) continue;
          if (rl->zone != z || rf->zone != z) continue;
          const double gap = (rl->p - start_l) - (rf->p - start_f);
          if (gap < 0.0 || (min_gap_m > 0.0 && gap < min_gap_m)) {
            report.rear_end.push_back({z, lead.cav, follow.cav, rl->t, gap});
            break;
          }
        }
      }
    }
  }
  return report;
}

SimResult RunSimulation(const Topology& topology, const SimConfig& config) {
  const std::vector<Arrival> arrivals = SampleArrivals(config, topology);
  return RunSimulation(topology, config, arrivals);
}

SimResult RunSimulation(const Topology& topology, const SimConfig& config,
                        std::span<const Arrival> arrivals) {
  config.Validate(topology);
  SimResult result;
  result.arrivals.assign(arrivals.begin(), arrivals.end());

  ArrivalQueue queue;
  for (const Arrival& a : arrivals) {
    queue.Enqueue(a.cav, a.arrival_s, a.path, topology);
  }

  const SchedulerOptions options = config.scheduler_options();
  DroneMemory memory(config.headway_s);
  for (const QueueEntry& entry : queue.entries()) {
    const ConflictContext ctx =
        BuildConflictContext(memory, topology, topology.path(entry.path));
    Schedule schedule =
        SchedulePath(entry, ctx, topology, config.limits, options);
    memory.Commit(schedule);
    result.schedules.push_back(std::move(schedule));
  }

  const double step = config.sample_step_s;
  result.log.step_s = step;
  double travel_sum = 0.0;
  for (const Schedule& s : result.schedules) {
    const ScheduledTrajectory traj(s, topology, config.limits);

    auto k0 = static_cast<std::int64_t>(std::ceil(traj.begin_s() / step));
    if (static_cast<double>(k0) * step < traj.begin_s()) ++k0;
    auto k1 = static_cast<std::int64_t>(std::floor(traj.end_s() / step));
    if (static_cast<double>(k1) * step > traj.end_s()) --k1;
    for (std::int64_t k = k0; k <= k1; ++k) {
      const double t = static_cast<double>(k) * step;
      const TrajectoryPoint pt = traj.Eval(t);
      result.log.rows.push_back(
          {s.cav, k, t, pt.state.p, pt.state.v, pt.u, pt.zone, pt.mode});
    }

    CavMetrics m;
    m.cav = s.cav;
    m.path = s.path;
    m.arrival_s = s.arrival_s;
    m.exit_s = s.exit_s;
    m.travel_time_s = s.exit_s - s.arrival_s;
    for (const ScheduleEntry& e : s.entries) {
      if (e.mode == ZoneMode::kTimeOptimal) {
        ++m.time_optimal_zones;
      } else {
        ++m.energy_optimal_zones;
      }
    }
    m.saturated = traj.saturated();
    m.speed_capped_zones = traj.speed_capped_zones();
    const auto issues = traj.EnergyIssues(config.limits);
    m.constraint_violations = static_cast<int>(issues.size());
    for (const auto& issue : issues) {
      result.metrics.energy_issues.push_back(
          {s.cav, issue.zone, issue.violation});
    }
    result.metrics.time_optimal_zones += m.time_optimal_zones;
    result.metrics.energy_optimal_zones += m.energy_optimal_zones;
    result.metrics.speed_capped_zones += m.speed_capped_zones;
    result.metrics.constraint_violations += m.constraint_violations;
    travel_sum += m.travel_time_s;
    result.metrics.per_cav.push_back(m);
  }
  if (!result.schedules.empty()) {
    result.metrics.mean_travel_time_s =
        travel_sum / static_cast<double>(result.schedules.size());
  }

  result.safety = VerifySafety(result.schedules, topology, config.headway_s,
                               result.log, config.min_gap_m);
  return result;
}

}  // namespace cavcoord
