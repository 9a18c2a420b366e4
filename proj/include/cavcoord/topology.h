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

#ifndef CAVCOORD_TOPOLOGY_H_
#define CAVCOORD_TOPOLOGY_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cavcoord {

enum class ZoneId : std::int32_t {};
enum class PathId : std::int32_t {};

constexpr int Value(ZoneId id) { return static_cast<int>(id); }
constexpr int Value(PathId id) { return static_cast<int>(id); }

// Regular zones are single-direction lanes where only rear-end conflicts
// occur. Merging zones are the intersection boxes, traversed at the fixed
// merging speed, where lateral conflicts occur.
enum class ZoneKind { kRegular, kMerging };

struct Zone {
  ZoneId id{};
  ZoneKind kind = ZoneKind::kRegular;
  double length_m = 0.0;
};

inline constexpr std::size_t kMaxPathZones = 16;

struct Path {
  PathId id{};
  std::vector<ZoneId> zones;
  double total_length_m = 0.0;

  // Index of `zone` in the sequence, if present.
  std::optional<std::size_t> IndexOf(ZoneId zone) const;
};

// Zones shared by two paths, ordered as they appear in the first path.
using ConflictTuple = std::vector<ZoneId>;

class Topology {
 public:
  // Validates every invariant and computes path lengths. Throws a kConfig
  // Error naming the offending field.
  static Topology Create(std::vector<Zone> zones, std::vector<Path> paths,
                         double merging_speed_mps);

  std::span<const Zone> zones() const { return zones_; }
  std::span<const Path> paths() const { return paths_; }
  double merging_speed_mps() const { return merging_speed_mps_; }

  bool HasZone(ZoneId id) const { return zone_index_.contains(id); }
  bool HasPath(PathId id) const { return path_index_.contains(id); }
  const Zone& zone(ZoneId id) const;
  const Path& path(PathId id) const;

  // Arclength from control-zone entry to the start of the `index`-th zone of
  // `path`.
  double ZoneStart(const Path& path, std::size_t index) const;

 private:
  Topology() = default;

  std::vector<Zone> zones_;
  std::vector<Path> paths_;
  double merging_speed_mps_ = 0.0;
  std::unordered_map<ZoneId, std::size_t> zone_index_;
  std::unordered_map<PathId, std::size_t> path_index_;
};

// Parses the `zones`, `paths` and `merging_speed_mps` sections of a scenario
// document (JSON). Errors carry the line/column of a syntax error or the field
// path of an invalid value.
Topology LoadTopology(std::string_view document);

ConflictTuple ConflictZones(const Path& path_i, const Path& path_j);

}  // namespace cavcoord

#endif  // CAVCOORD_TOPOLOGY_H_
