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


// Acceptance suite. Prints one PASS or FAIL line per criterion and exits
// nonzero when any criterion fails. Tolerances are fixed below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cavcoord/energy_optimal.h"
#include "cavcoord/error.h"
#include "cavcoord/export.h"
#include "cavcoord/scenario.h"
#include "cavcoord/scheduler.h"
#include "cavcoord/simulation.h"
#include "cavcoord/time_optimal.h"
#include "oracles.h"

namespace cavcoord {
namespace {

using testing::kDefaultLimits;
using Clock = std::chrono::steady_clock;

constexpr int kReplicationSeeds = 100;
constexpr double kReplicationBudgetS = 5.0;

constexpr int kTimeOracleInstances = 10000;
constexpr double kSwitchGridM = 1e-3;
constexpr int kDoubleSwitchSamples = 1000;
constexpr double kTimeSlackS = 1e-6;
constexpr double kFeedbackStepS = 1e-2;
constexpr double kFeedbackTol = 1e-6;
constexpr double kTimeOracleBudgetS = 60.0;

constexpr int kOrderingCases = 1000;
constexpr double kTieGuardS = 1e-9;

constexpr int kSwitchingCases = 10000;
constexpr double kMidpointRelTol = 1e-12;
constexpr double kSwitchingRelTol = 1e-9;

constexpr int kEnergyInstances = 10000;
constexpr double kEnergyBoundaryTol = 1e-9;
constexpr int kPerturbedInstances = 100;
constexpr int kPerturbationModes = 10;
constexpr double kPerturbationAmplitude = 0.05;
constexpr double kQuadratureStepS = 1e-4;
constexpr double kPerturbedBoundaryTol = 1e-8;
constexpr double kReplanCoeffTol = 1e-9;
constexpr double kEnergyBudgetS = 60.0;

constexpr int kSchedulerInstances = 1000;

constexpr int kDeterminismSeeds = 20;

constexpr double kQuadraticThirdDiffTol = 1e-10;
constexpr double kQuadraticSecondDiffMin = 1e-6;

// Collects failures of one criterion; only the first message is kept.
class Check {
 public:
  void Expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures_++ == 0) first_ = what;
  }
  bool ok() const { return failures_ == 0; }
  int failures() const { return failures_; }
  const std::string& first() const { return first_; }

 private:
  int failures_ = 0;
  std::string first_;
};

std::string Fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

bool Report(const char* name, const Check& check, const std::string& detail) {
  if (check.ok()) {
    std::printf("PASS %s: %s\n", name, detail.c_str());
  } else {
    std::printf("FAIL %s: %s (%d failures; first: %s)\n", name, detail.c_str(),
                check.failures(), check.first().c_str());
  }
  std::fflush(stdout);
  return check.ok();
}

struct SeedRun {
  std::uint64_t seed = 0;
  SimResult result;
};

std::string SchedulesText(std::span<const Schedule> schedules) {
  std::ostringstream out;
  WriteSchedulesCsv(out, schedules);
  return out.str();
}

std::string TrajectoriesText(const TrajectoryLog& log) {
  std::ostringstream out;
  WriteTrajectoriesCsv(out, log);
  return out.str();
}

// True when the sampled speeds of `cav` inside `zone` follow one nonlinear
// quadratic in time.
bool QuadraticSpeedTrace(const TrajectoryLog& log, CavId cav, ZoneId zone) {
  std::vector<double> v;
  for (const TrajectorySample& row : log.rows) {
    if (row.cav == cav && row.zone == zone) v.push_back(row.v);
  }
  if (v.size() < 4) return false;
  double third = 0.0;
  double second = 0.0;
  for (std::size_t i = 2; i < v.size(); ++i) {
    second = std::max(second, std::abs(v[i] - 2 * v[i - 1] + v[i - 2]));
    if (i >= 3) {
      third = std::max(
          third, std::abs(v[i] - 3 * v[i - 1] + 3 * v[i - 2] - v[i - 3]));
    }
  }
  return third < kQuadraticThirdDiffTol && second > kQuadraticSecondDiffMin;
}

// Some zone where a lower-order vehicle enters at its release time while a
// later, conflicting vehicle is held back, and the held vehicle flies an
// energy-optimal zone with a quadratic speed trace.
bool ShowsHeldVehiclePattern(const SimResult& r) {
  for (std::size_t j = 0; j < r.schedules.size(); ++j) {
    const Schedule& held = r.schedules[j];
    for (std::size_t k = 0; k < held.entries.size(); ++k) {
      const ScheduleEntry& e = held.entries[k];
      if (!(e.entry_s > e.release_s) || k == 0) continue;
      bool on_time_leader = false;
      for (std::size_t i = 0; i < j; ++i) {
        for (const ScheduleEntry& f : r.schedules[i].entries) {
          if (f.zone == e.zone && f.entry_s == f.release_s) {
            on_time_leader = true;
          }
        }
      }
      const ScheduleEntry& before = held.entries[k - 1];
      if (on_time_leader && before.mode == ZoneMode::kEnergyOptimal &&
          QuadraticSpeedTrace(r.log, held.cav, before.zone)) {
        return true;
      }
    }
  }
  return false;
}

bool Replication(const Scenario& sc, std::vector<SeedRun>* runs) {
  Check check;
  int pattern_seeds = 0;
  std::size_t lateral = 0;
  std::size_t rear = 0;
  const auto start = Clock::now();
  for (int s = 1; s <= kReplicationSeeds; ++s) {
    SimConfig config = sc.config;
    config.seed = static_cast<std::uint64_t>(s);
    SeedRun run{config.seed, {}};
    try {
      run.result = RunSimulation(sc.topology, config);
    } catch (const Error& e) {
      check.Expect(false, Fmt("seed %d: %s", s, e.what()));
      continue;
    }
    lateral += run.result.safety.lateral.size();
    rear += run.result.safety.rear_end.size();
    check.Expect(run.result.safety.empty(),
                 Fmt("seed %d: %zu violations", s, run.result.safety.total()));
    if (ShowsHeldVehiclePattern(run.result)) ++pattern_seeds;
    runs->push_back(std::move(run));
  }
  const double elapsed = Seconds(start);
  check.Expect(pattern_seeds > 0, "no seed shows the held-vehicle pattern");
  check.Expect(elapsed < kReplicationBudgetS,
               Fmt("runtime %.2f s over budget", elapsed));
  return Report(
      "replication",
      check,
      Fmt("%d seeds, %zu lateral, %zu rear-end violations, pattern in %d "
          "seeds, %.2f s",
          kReplicationSeeds, lateral, rear, pattern_seeds, elapsed));
}

bool TimeOptimalOracle() {
  Check check;
  testing::Rng rng(101);
  double worst_gap = -std::numeric_limits<double>::infinity();
  double worst_end = 0.0;
  const auto start = Clock::now();
  for (int n = 0; n < kTimeOracleInstances; ++n) {
    const ZoneBoundary b = testing::RandomFeasibleBoundary(rng, kDefaultLimits);
    const BangBangPlan plan = PlanMinTime(b, kDefaultLimits);
    const double best = testing::BruteForceMinTime(
        b, kDefaultLimits, kSwitchGridM, kDoubleSwitchSamples, rng);
    worst_gap = std::max(worst_gap, plan.t_e - best);
    check.Expect(plan.t_e <= best + kTimeSlackS,
                 Fmt("instance %d: t_e %.12g vs family %.12g", n, plan.t_e,
                     best));
    const VehicleState end = testing::IntegrateFeedback(plan, kFeedbackStepS);
    const double err = std::max(std::abs(end.p - b.p_e), std::abs(end.v - b.v_e));
    worst_end = std::max(worst_end, err);
    check.Expect(err <= kFeedbackTol,
                 Fmt("instance %d: feedback end error %.3g", n, err));
  }
  const double elapsed = Seconds(start);
  check.Expect(elapsed < kTimeOracleBudgetS,
               Fmt("runtime %.1f s over budget", elapsed));
  return Report("time_optimal_oracle", check,
                Fmt("%d instances, max t_e - family %.3g s, max feedback "
                    "end error %.3g, %.1f s",
                    kTimeOracleInstances, worst_gap, worst_end, elapsed));
}

bool AccelerateFirstOrdering() {
  Check check;
  testing::Rng rng(103);
  double min_margin = std::numeric_limits<double>::infinity();
  int compared = 0;
  while (compared < kOrderingCases) {
    const double a = rng.Uniform(1.0, 5.0);
    const Limits lim{-a, a, 1.0, 25.0};
    const ZoneBoundary b = testing::RandomFeasibleBoundary(rng, lim);
    const double alt = testing::DecelerateFirstTime(b, a);
    if (alt < 0.0) continue;
    ++compared;
    const double t_e = PlanMinTime(b, lim).t_e;
    min_margin = std::min(min_margin, alt - t_e);
    check.Expect(t_e < alt - kTieGuardS,
                 Fmt("case %d: t_e %.15g vs decelerate-first %.15g", compared,
                     t_e, alt));
  }
  return Report("accelerate_first_ordering", check,
                Fmt("%d cases, min margin %.3g s", compared, min_margin));
}

bool SwitchingIdentities() {
  Check check;
  testing::Rng rng(107);
  double worst_mid = 0.0;
  double worst_eq = 0.0;
  for (int n = 0; n < kSwitchingCases; ++n) {
    const double a = rng.Uniform(0.5, 5.0);
    const Limits sym{-a, a, 1.0, 40.0};
    ZoneBoundary b;
    b.p_s = rng.Uniform(0.0, 500.0);
    b.p_e = b.p_s + rng.Uniform(1.0, 400.0);
    b.v_s = b.v_e = rng.Uniform(1.0, 20.0);
    const SwitchingState s = ComputeSwitchingState(b, sym);
    const double mid = 0.5 * (b.p_s + b.p_e);
    const double rel = std::abs(s.p_c - mid) / std::abs(mid);
    worst_mid = std::max(worst_mid, rel);
    check.Expect(rel <= kMidpointRelTol,
                 Fmt("symmetric case %d: p_c %.17g vs %.17g", n, s.p_c, mid));
  }
  for (int n = 0; n < kSwitchingCases; ++n) {
    const Limits lim{rng.Uniform(-5.0, -0.5), rng.Uniform(0.5, 5.0), 1.0,
                     40.0};
    const ZoneBoundary b = testing::RandomFeasibleBoundary(rng, lim);
    const SwitchingState s = ComputeSwitchingState(b, lim);
    const double scale = s.v_c * s.v_c;
    const double r1 = s.v_c * s.v_c - b.v_s * b.v_s -
                      2.0 * lim.u_max * (s.p_c - b.p_s);
    const double r2 = b.v_e * b.v_e - s.v_c * s.v_c -
                      2.0 * lim.u_min * (b.p_e - s.p_c);
    const double rel = std::max(std::abs(r1), std::abs(r2)) / scale;
    worst_eq = std::max(worst_eq, rel);
    check.Expect(rel <= kSwitchingRelTol,
                 Fmt("general case %d: residual %.3g", n, rel));
    check.Expect(b.p_s <= s.p_c && s.p_c <= b.p_e,
                 Fmt("general case %d: p_c outside the zone", n));
  }
  return Report("switching_identities", check,
                Fmt("%d symmetric cases (max rel %.3g), %d general cases "
                    "(max rel residual %.3g)",
                    kSwitchingCases, worst_mid, kSwitchingCases, worst_eq));
}

TimedBoundary RandomTimedBoundary(testing::Rng& rng) {
  const ZoneBoundary b = testing::RandomFeasibleBoundary(rng, kDefaultLimits);
  const double t_min = PlanMinTime(b, kDefaultLimits).t_e;
  const double t_entry = rng.Uniform(0.0, 100.0);
  return {b, t_entry, t_entry + t_min * rng.Uniform(1.0, 3.0)};
}

bool EnergySuite() {
  Check check;
  testing::Rng rng(109);
  double worst_boundary = 0.0;
  double worst_replan = 0.0;
  const auto start = Clock::now();
  for (int n = 0; n < kEnergyInstances; ++n) {
    const TimedBoundary tb = RandomTimedBoundary(rng);
    const CubicCoeffs c = SolveEnergy(tb);
    const EnergySample s = EvalEnergy(c, tb.t_entry);
    const EnergySample e = EvalEnergy(c, tb.t_exit);
    const double err = std::max(
        {std::abs(s.state.p - tb.boundary.p_s),
         std::abs(s.state.v - tb.boundary.v_s),
         std::abs(e.state.p - tb.boundary.p_e),
         std::abs(e.state.v - tb.boundary.v_e)});
    worst_boundary = std::max(worst_boundary, err);
    check.Expect(err <= kEnergyBoundaryTol,
                 Fmt("instance %d: boundary error %.3g", n, err));

    const double t_now = rng.Uniform(tb.t_entry, tb.t_exit);
    const CubicCoeffs r = ReplanFrom(c, t_now, tb);
    const double drift = std::max({std::abs(r.a - c.a), std::abs(r.b - c.b),
                                   std::abs(r.c - c.c), std::abs(r.d - c.d)});
    worst_replan = std::max(worst_replan, drift);
    check.Expect(drift <= kReplanCoeffTol,
                 Fmt("instance %d: replan drift %.3g", n, drift));
  }
  int perturbations = 0;
  double min_excess = std::numeric_limits<double>::infinity();
  for (int n = 0; n < kPerturbedInstances; ++n) {
    const CubicCoeffs c = SolveEnergy(RandomTimedBoundary(rng));
    for (int k = 1; k <= kPerturbationModes; ++k) {
      for (double eps : {kPerturbationAmplitude, -kPerturbationAmplitude}) {
        ++perturbations;
        const auto out = testing::PerturbCubic(c, k, eps, kQuadratureStepS);
        check.Expect(std::abs(out.exit_p_error) <= kPerturbedBoundaryTol &&
                         std::abs(out.exit_v_error) <= kPerturbedBoundaryTol,
                     Fmt("instance %d mode %d: perturbation moved the exit", n,
                         k));
        min_excess = std::min(min_excess, out.perturbed_cost - out.base_cost);
        check.Expect(out.perturbed_cost > out.base_cost,
                     Fmt("instance %d mode %d: perturbed cost %.12g <= %.12g",
                         n, k, out.perturbed_cost, out.base_cost));
      }
    }
  }
  const double elapsed = Seconds(start);
  check.Expect(elapsed < kEnergyBudgetS,
               Fmt("runtime %.1f s over budget", elapsed));
  return Report("energy_optimal_suite", check,
                Fmt("%d boundary instances (max error %.3g), %d perturbations "
                    "(min cost excess %.3g), max replan drift %.3g, %.1f s",
                    kEnergyInstances, worst_boundary, perturbations,
                    min_excess, worst_replan, elapsed));
}

double EntryOrNan(double r, double d, std::span<const double> occ, double h) {
  try {
    return EarliestFeasibleEntry(r, d, occ, h);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kInfeasible) throw;
    return std::numeric_limits<double>::quiet_NaN();
  }
}

bool SchedulerOracle(const Scenario& sc, const std::vector<SeedRun>& runs) {
  Check check;
  testing::Rng rng(113);
  const double h = sc.config.headway_s;
  for (int n = 0; n < kSchedulerInstances; ++n) {
    // Half the draws sit on a 0.5 s lattice so that exact ties occur.
    const bool lattice = n % 2 == 0;
    auto draw = [&](double lo, double hi) {
      const double x = rng.Uniform(lo, hi);
      return lattice ? std::round(x * 2.0) / 2.0 : x;
    };
    const double r = draw(0.0, 20.0);
    const double d = n % 4 == 1 ? r + draw(0.0, 6.0) : kUnbounded;
    std::vector<double> occ;
    const int count = rng.Int(0, 8);
    for (int i = 0; i < count; ++i) occ.push_back(draw(0.0, 30.0));
    std::sort(occ.begin(), occ.end());
    const double got = EntryOrNan(r, d, occ, h);
    const double want = testing::CandidateEarliestEntry(r, d, occ, h);
    const bool same = (std::isnan(got) && std::isnan(want)) || got == want;
    check.Expect(same, Fmt("instance %d: %.17g vs candidate %.17g", n, got,
                           want));
  }

  std::size_t pairs = 0;
  std::size_t entries = 0;
  for (const SeedRun& run : runs) {
    const auto& all = run.result.schedules;
    for (std::size_t i = 0; i < all.size(); ++i) {
      for (std::size_t j = i + 1; j < all.size(); ++j) {
        for (const ScheduleEntry& a : all[i].entries) {
          for (const ScheduleEntry& b : all[j].entries) {
            if (a.zone != b.zone) continue;
            ++pairs;
            check.Expect(std::abs(a.entry_s - b.entry_s) >= h,
                         Fmt("seed %llu zone %d: cavs %d and %d %.6g s apart",
                             static_cast<unsigned long long>(run.seed),
                             Value(a.zone), Value(all[i].cav),
                             Value(all[j].cav),
                             std::abs(a.entry_s - b.entry_s)));
          }
        }
      }
      for (std::size_t k = 0; k < all[i].entries.size(); ++k) {
        ++entries;
        const bool on_time = all[i].ExitOf(k) == all[i].ReleaseAfter(k);
        const bool time_optimal =
            all[i].entries[k].mode == ZoneMode::kTimeOptimal;
        check.Expect(on_time == time_optimal,
                     Fmt("seed %llu cav %d zone %d: mode disagrees with "
                         "release",
                         static_cast<unsigned long long>(run.seed),
                         Value(all[i].cav), Value(all[i].entries[k].zone)));
      }
    }
  }
  check.Expect(!runs.empty(), "no simulation runs to inspect");
  return Report("scheduler_oracle", check,
                Fmt("%d exact-match instances, %zu shared-zone pairs and %zu "
                    "mode checks over %zu runs",
                    kSchedulerInstances, pairs, entries, runs.size()));
}

bool DeterminismAndDecentralization(const Scenario& sc) {
  Check check;
  for (int s = 1; s <= kDeterminismSeeds; ++s) {
    SimConfig config = sc.config;
    config.seed = static_cast<std::uint64_t>(s);
    const auto arrivals = SampleArrivals(config, sc.topology);
    const SimResult a = RunSimulation(sc.topology, config);
    const SimResult b = RunSimulation(sc.topology, config);
    check.Expect(SchedulesText(a.schedules) == SchedulesText(b.schedules) &&
                     TrajectoriesText(a.log) == TrajectoriesText(b.log) &&
                     SafetyJson(a) == SafetyJson(b),
                 Fmt("seed %d: repeated run differs", s));

    const CavId last = a.schedules.back().cav;
    std::vector<Arrival> fewer;
    for (const Arrival& x : arrivals) {
      if (x.cav != last) fewer.push_back(x);
    }
    const SimResult part = RunSimulation(sc.topology, config, fewer);
    std::vector<Schedule> kept(a.schedules.begin(), a.schedules.end() - 1);
    TrajectoryLog kept_log = a.log;
    std::erase_if(kept_log.rows,
                  [&](const TrajectorySample& r) { return r.cav == last; });
    check.Expect(SchedulesText(kept) == SchedulesText(part.schedules),
                 Fmt("seed %d: schedules change without the last arrival", s));
    check.Expect(TrajectoriesText(kept_log) == TrajectoriesText(part.log),
                 Fmt("seed %d: trajectories change without the last arrival",
                     s));
    check.Expect(SafetyJson(part) == SafetyJson(a),
                 Fmt("seed %d: safety report changes without the last "
                     "arrival",
                     s));
  }
  return Report("determinism_decentralization", check,
                Fmt("%d seeds repeated and truncated", kDeterminismSeeds));
}

bool MergingProcessTime(const Scenario& sc, const std::vector<SeedRun>& runs) {
  Check check;
  std::size_t merging = 0;
  for (const SeedRun& run : runs) {
    for (const Schedule& s : run.result.schedules) {
      for (const ScheduleEntry& e : s.entries) {
        if (sc.topology.zone(e.zone).kind != ZoneKind::kMerging) continue;
        ++merging;
        check.Expect(e.process_s == 2.0,
                     Fmt("seed %llu cav %d zone %d: P = %.17g",
                         static_cast<unsigned long long>(run.seed),
                         Value(s.cav), Value(e.zone), e.process_s));
      }
    }
  }
  check.Expect(merging > 0, "no merging-zone entries");
  return Report("merging_process_time", check,
                Fmt("%zu merging-zone entries, all exactly 2 s", merging));
}

}  // namespace
}  // namespace cavcoord

int main() {
  using namespace cavcoord;
  const Scenario sc = LoadScenario(DefaultScenarioDocument());
  std::vector<SeedRun> runs;
  bool ok = true;
  ok &= Replication(sc, &runs);
  ok &= TimeOptimalOracle();
  ok &= AccelerateFirstOrdering();
  ok &= SwitchingIdentities();
  ok &= EnergySuite();
  ok &= SchedulerOracle(sc, runs);
  ok &= DeterminismAndDecentralization(sc);
  ok &= MergingProcessTime(sc, runs);
  return ok ? 0 : 1;
}
