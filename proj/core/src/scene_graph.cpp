#include "insight/scene_graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "insight/errors.hpp"

namespace insight {

const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Building: return "building";
    case NodeKind::Floor: return "floor";
    case NodeKind::Surface: return "surface";
    case NodeKind::Instance: return "instance";
  }
  return "?";
}

NodeKind node_kind_from_string(std::string_view s) {
  if (s == "building") return NodeKind::Building;
  if (s == "floor") return NodeKind::Floor;
  if (s == "surface") return NodeKind::Surface;
  if (s == "instance") return NodeKind::Instance;
  throw ValidationError("unknown node kind: " + std::string(s));
}

FloorModel FloorModel::from_elevations(std::vector<double> bases) {
  if (bases.empty()) throw ValidationError("elevations list must not be empty");
  if (!std::is_sorted(bases.begin(), bases.end())) {
    throw ValidationError("floor base elevations must be sorted ascending");
  }
  FloorModel m;
  m.bases = std::move(bases);
  return m;
}

int assign_floor(double centroid_z, const FloorModel& model) {
  if (model.single()) return 0;
  // Greatest base <= z; below the lowest base clamps to floor 0.
  int floor = 0;
  for (std::size_t i = 0; i < model.bases.size(); ++i) {
    if (centroid_z >= model.bases[i]) floor = static_cast<int>(i);
  }
  return floor;
}

namespace {

std::string histogram_string(const std::map<std::string, long>& counts) {
  std::string out;
  for (const auto& [name, n] : counts) {
    if (!out.empty()) out += ',';
    out += name + "=" + std::to_string(n);
  }
  return out;
}

// Single-source instances carry their stack tag; cross-stack merges are
// tagged "union".
std::string source_tag_of(const FusedInstance& inst, const std::string& fallback) {
  if (inst.observations.empty()) return fallback;
  const Source first = inst.observations.front().source;
  for (const ObservationRef& obs : inst.observations) {
    if (obs.source != first) return "union";
  }
  return to_string(first);
}

}  // namespace

BuildResult build_scene_graph(const std::string& area_id,
                              const std::vector<FusedInstance>& instances,
                              const Taxonomy& taxonomy, const FloorModel& floors,
                              const std::string& source_tag) {
  BuildResult result;
  SceneGraph& g = result.graph;
  g.graph_id = area_id;

  // Sort member instances into per-floor buckets, surfaces apart.
  struct Entry {
    const FusedInstance* inst;
    int floor;
    bool surface;
  };
  std::vector<Entry> entries;
  for (const FusedInstance& inst : instances) {
    if (!inst.centroid.allFinite()) {
      ++result.rejected;
      result.diagnostics.push_back("instance " + inst.instance_id +
                                   " rejected: non-finite centroid");
      continue;
    }
    const bool surface = taxonomy.class_by_id(inst.class_id).is_structural_surface;
    entries.push_back({&inst, assign_floor(inst.centroid.z(), floors), surface});
  }
  // Deterministic order: floor, surfaces before instances, class, seq.
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.floor != b.floor) return a.floor < b.floor;
    if (a.surface != b.surface) return a.surface;
    if (a.inst->class_id != b.inst->class_id) return a.inst->class_id < b.inst->class_id;
    return a.inst->seq < b.inst->seq;
  });

  SceneNode building;
  building.node_id = area_id + "/building";
  building.kind = NodeKind::Building;
  building.area_id = area_id;
  g.nodes.push_back(building);

  std::map<std::string, long> building_histogram;
  std::size_t cursor = 0;
  // A single-floor model materializes its floor only when occupied;
  // explicit elevations are declared structure and always materialize.
  const int floor_count = floors.single() && entries.empty() ? 0 : floors.floor_count();
  for (int floor = 0; floor < floor_count; ++floor) {
    SceneNode fnode;
    fnode.node_id = area_id + "/f" + std::to_string(floor) + "/floor";
    fnode.kind = NodeKind::Floor;
    fnode.area_id = area_id;
    fnode.floor_id = floor;
    const uint32_t floor_index = static_cast<uint32_t>(g.nodes.size());
    g.nodes.push_back(fnode);
    g.edges.emplace_back(0u, floor_index);

    std::map<std::string, long> floor_histogram;
    long floor_children = 0;
    // Per (kind, class) sequence counters restart on every floor.
    std::map<std::pair<bool, int>, uint32_t> seq;
    while (cursor < entries.size() && entries[cursor].floor == floor) {
      const Entry& e = entries[cursor++];
      const SafetyClass& cls = taxonomy.class_by_id(e.inst->class_id);

      SceneNode node;
      node.kind = e.surface ? NodeKind::Surface : NodeKind::Instance;
      const uint32_t s = seq[{e.surface, cls.id}]++;
      node.node_id = area_id + "/f" + std::to_string(floor) + "/" +
                     to_string(node.kind) + "/" + cls.name + "/" + std::to_string(s);
      node.area_id = area_id;
      node.floor_id = floor;
      node.class_id = cls.id;
      node.class_name = cls.name;
      node.iso_name = cls.iso_name;
      node.category = to_string(cls.category);
      node.priority = to_string(cls.priority);
      node.confidence = e.inst->confidence;
      node.centroid = e.inst->centroid;
      node.box = e.inst->box;
      node.n_observations = static_cast<long>(e.inst->observations.size());
      node.point_count = static_cast<long>(e.inst->point_count);
      node.source = source_tag_of(*e.inst, source_tag);

      const uint32_t node_index = static_cast<uint32_t>(g.nodes.size());
      g.nodes.push_back(std::move(node));
      g.edges.emplace_back(floor_index, node_index);
      ++floor_children;
      ++floor_histogram[cls.name];
      ++building_histogram[cls.name];
    }
    g.nodes[floor_index].n_children = floor_children;
    g.nodes[floor_index].class_histogram = histogram_string(floor_histogram);
  }

  g.nodes[0].n_children = floor_count;
  g.nodes[0].class_histogram = histogram_string(building_histogram);
  return result;
}

SceneGraph filter_role(const SceneGraph& graph, Role role, const Taxonomy& taxonomy) {
  const RoleFilterSpec& spec = taxonomy.role_spec(role);
  SceneGraph out;
  out.graph_id = graph.graph_id;
  out.graph_attributes = graph.graph_attributes;

  std::vector<int32_t> remap(graph.nodes.size(), -1);
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    const SceneNode& node = graph.nodes[i];
    bool keep = true;
    switch (node.kind) {
      case NodeKind::Building:
      case NodeKind::Floor:
        keep = true;
        break;
      case NodeKind::Surface:
        keep = spec.keep_structural_context;
        break;
      case NodeKind::Instance: {
        // Imported graphs carry the class by name only.
        const int class_id =
            node.class_id >= 0 ? node.class_id : taxonomy.id_of(node.class_name);
        keep = taxonomy.role_retained(class_id, role);
        break;
      }
    }
    if (keep) {
      remap[i] = static_cast<int32_t>(out.nodes.size());
      out.nodes.push_back(node);
    }
  }
  for (const auto& [parent, child] : graph.edges) {
    if (remap[parent] >= 0 && remap[child] >= 0) {
      out.edges.emplace_back(static_cast<uint32_t>(remap[parent]),
                             static_cast<uint32_t>(remap[child]));
    }
  }
  return out;
}

void validate_hierarchy(const SceneGraph& graph) {
  if (graph.nodes.empty()) throw ValidationError("empty scene graph");

  std::size_t buildings = 0;
  std::set<std::string> ids;
  for (const SceneNode& node : graph.nodes) {
    if (node.kind == NodeKind::Building) ++buildings;
    if (!ids.insert(node.node_id).second) {
      throw ValidationError("duplicate node id: " + node.node_id);
    }
  }
  if (buildings != 1) {
    throw ValidationError("graph must contain exactly one Building node");
  }

  std::vector<int> parent_count(graph.nodes.size(), 0);
  for (const auto& [parent, child] : graph.edges) {
    if (parent >= graph.nodes.size() || child >= graph.nodes.size()) {
      throw ValidationError("edge references missing node");
    }
    ++parent_count[child];
  }
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    const SceneNode& node = graph.nodes[i];
    if (node.kind == NodeKind::Building) {
      if (parent_count[i] != 0) throw ValidationError("Building node has a parent");
      continue;
    }
    if (parent_count[i] != 1) {
      throw ValidationError("node " + node.node_id + " has " +
                            std::to_string(parent_count[i]) + " parents");
    }
  }
  // Surface/Instance parents must be floors.
  for (const auto& [parent, child] : graph.edges) {
    const SceneNode& c = graph.nodes[child];
    const SceneNode& p = graph.nodes[parent];
    if ((c.kind == NodeKind::Surface || c.kind == NodeKind::Instance) &&
        p.kind != NodeKind::Floor) {
      throw ValidationError("node " + c.node_id + " is not attached to a floor");
    }
    if (c.kind == NodeKind::Floor && p.kind != NodeKind::Building) {
      throw ValidationError("floor " + c.node_id + " is not attached to the building");
    }
  }
}

PayloadReport payload_stats(const PayloadView& full,
                            const std::vector<PayloadView>& views) {
  PayloadReport report;
  report.full = full;
  for (const PayloadView& view : views) {
    PayloadRow row;
    row.view = view;
    row.node_reduction =
        full.nodes ? 1.0 - static_cast<double>(view.nodes) / full.nodes : 0.0;
    row.byte_reduction =
        full.bytes ? 1.0 - static_cast<double>(view.bytes) / full.bytes : 0.0;
    report.views.push_back(row);
  }
  return report;
}

}  // namespace insight
