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

#include "cavcoord/topology.h"

#include <algorithm>
#include <string>
#include <unordered_set>

#include "cavcoord/error.h"
#include "json_util.h"

namespace cavcoord {

std::optional<std::size_t> Path::IndexOf(ZoneId zone) const {
  auto it = std::find(zones.begin(), zones.end(), zone);
  if (it == zones.end()) return std::nullopt;
  return static_cast<std::size_t>(it - zones.begin());
}

Topology Topology::Create(std::vector<Zone> zones, std::vector<Path> paths,
                          double merging_speed_mps) {
  Topology topo;
  if (!(merging_speed_mps > 0.0)) {
    ThrowConfig("merging_speed_mps: must be > 0");
  }
  topo.merging_speed_mps_ = merging_speed_mps;

  for (std::size_t i = 0; i < zones.size(); ++i) {
    const std::string where = internal::Index("zones", i);
    if (!(zones[i].length_m > 0.0)) {
      ThrowConfig(where + ".length_m: zone " +
                  std::to_string(Value(zones[i].id)) +
                  " must have positive length");
    }
    if (!topo.zone_index_.emplace(zones[i].id, i).second) {
      ThrowConfig(where + ".id: duplicate zone id " +
                  std::to_string(Value(zones[i].id)));
    }
  }
  topo.zones_ = std::move(zones);

  for (std::size_t i = 0; i < paths.size(); ++i) {
    Path& path = paths[i];
    const std::string where = internal::Index("paths", i);
    if (path.zones.empty()) ThrowConfig(where + ".zones: path is empty");
    if (path.zones.size() > kMaxPathZones) {
      ThrowConfig(where + ".zones: more than " +
                  std::to_string(kMaxPathZones) + " zones");
    }
    std::unordered_set<ZoneId> seen;
    double total = 0.0;
    for (std::size_t k = 0; k < path.zones.size(); ++k) {
      const ZoneId z = path.zones[k];
      const std::string zw = internal::Index(where + ".zones", k);
      if (!topo.HasZone(z)) {
        ThrowConfig(zw + ": dangling reference to zone " +
                    std::to_string(Value(z)));
      }
      if (!seen.insert(z).second) {
        ThrowConfig(zw + ": zone " + std::to_string(Value(z)) +
                    " repeated in path");
      }
      total += topo.zone(z).length_m;
    }
    path.total_length_m = total;
    if (!topo.path_index_.emplace(path.id, i).second) {
      ThrowConfig(where + ".id: duplicate path id " +
                  std::to_string(Value(path.id)));
    }
  }
  topo.paths_ = std::move(paths);
  return topo;
}

const Zone& Topology::zone(ZoneId id) const {
  auto it = zone_index_.find(id);
  if (it == zone_index_.end()) {
    ThrowInvalidArgument("unknown zone " + std::to_string(Value(id)));
  }
  return zones_[it->second];
}

const Path& Topology::path(PathId id) const {
  auto it = path_index_.find(id);
  if (it == path_index_.end()) {
    ThrowInvalidArgument("unknown path " + std::to_string(Value(id)));
  }
  return paths_[it->second];
}

double Topology::ZoneStart(const Path& path, std::size_t index) const {
  double start = 0.0;
  for (std::size_t k = 0; k < index && k < path.zones.size(); ++k) {
    start += zone(path.zones[k]).length_m;
  }
  return start;
}

Topology LoadTopology(std::string_view document) {
  using internal::Index;
  using internal::Json;
  const Json doc = internal::ParseDocument(document);
  if (!doc.is_object()) ThrowConfig("document: expected a top-level table");

  std::vector<Zone> zones;
  const Json& zone_list = internal::RequireArray(doc, "zones", "");
  for (std::size_t i = 0; i < zone_list.size(); ++i) {
    const std::string where = Index("zones", i);
    Zone zone;
    zone.id = ZoneId{internal::RequireInt(zone_list[i], "id", where)};
    const std::string kind =
        internal::RequireString(zone_list[i], "kind", where);
    if (kind == "regular") {
      zone.kind = ZoneKind::kRegular;
    } else if (kind == "merging") {
      zone.kind = ZoneKind::kMerging;
    } else {
      ThrowConfig(where + ".kind: expected \"regular\" or \"merging\", got \"" +
                  kind + "\"");
    }
    zone.length_m = internal::RequireNumber(zone_list[i], "length_m", where);
    zones.push_back(zone);
  }

  std::vector<Path> paths;
  const Json& path_list = internal::RequireArray(doc, "paths", "");
  for (std::size_t i = 0; i < path_list.size(); ++i) {
    const std::string where = Index("paths", i);
    Path path;
    path.id = PathId{internal::RequireInt(path_list[i], "id", where)};
    const Json& ids = internal::RequireArray(path_list[i], "zones", where);
    for (std::size_t k = 0; k < ids.size(); ++k) {
      if (!ids[k].is_number_integer()) {
        ThrowConfig(Index(where + ".zones", k) + ": expected an integer");
      }
      path.zones.push_back(ZoneId{ids[k].get<int>()});
    }
    paths.push_back(std::move(path));
  }

  const double v_z = internal::RequireNumber(doc, "merging_speed_mps", "");
  return Topology::Create(std::move(zones), std::move(paths), v_z);
}

ConflictTuple ConflictZones(const Path& path_i, const Path& path_j) {
  ConflictTuple shared;
  for (ZoneId z : path_i.zones) {
    if (path_j.IndexOf(z)) shared.push_back(z);
  }
  return shared;
}

}  // namespace cavcoord
