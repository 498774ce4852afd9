#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "insight/fusion.hpp"
#include "insight/geometry.hpp"
#include "insight/taxonomy.hpp"

namespace insight {

enum class NodeKind { Building, Floor, Surface, Instance };
const char* to_string(NodeKind k);
NodeKind node_kind_from_string(std::string_view s);

/// Floor segmentation model: a single floor per area, or sorted base
/// elevations in meters defining half-open bins [base, next).
struct FloorModel {
  std::vector<double> bases;  // empty = single floor

  static FloorModel single_floor() { return {}; }
  static FloorModel from_elevations(std::vector<double> bases);

  bool single() const { return bases.empty(); }
  int floor_count() const { return single() ? 1 : static_cast<int>(bases.size()); }
};

/// Floor index for a centroid elevation: greatest base <= z, clamped to
/// floor 0 below the lowest base.
int assign_floor(double centroid_z, const FloorModel& model);

struct SceneNode {
  std::string node_id;
  NodeKind kind = NodeKind::Instance;
  std::string area_id;
  int floor_id = -1;  // unset for Building

  // Instance / Surface payload.
  int class_id = -1;
  std::string class_name;
  std::string iso_name;
  std::string category;
  std::string priority;
  double confidence = 0.0;
  Vec3 centroid = Vec3::Zero();
  GravityAlignedBox box;
  long n_observations = 0;
  long point_count = 0;
  std::string source;  // pipeline tag

  // Building / Floor aggregates.
  long n_children = 0;
  std::string class_histogram;  // "class=count,..." sorted by class
};

/// Building -> Floor -> {Surfaces, Instances} hierarchy of one area.
struct SceneGraph {
  std::string graph_id;
  std::vector<SceneNode> nodes;
  std::vector<std::pair<uint32_t, uint32_t>> edges;  // parent -> child indices
  std::map<std::string, std::string> graph_attributes;  // e.g. provenance

  std::size_t node_count() const { return nodes.size(); }
  std::size_t edge_count() const { return edges.size(); }
};

struct BuildResult {
  SceneGraph graph;
  std::size_t rejected = 0;
  std::vector<std::string> diagnostics;
};

/// Builds the hierarchy for one area. Structural-surface instances become
/// Surface nodes, everything else Instance nodes; both attach to their
/// z-assigned floor. Instances with non-finite centroids are rejected and
/// counted. Node ids follow "{area}/f{floor}/{kind}/{class}/{seq}".
BuildResult build_scene_graph(const std::string& area_id,
                              const std::vector<FusedInstance>& instances,
                              const Taxonomy& taxonomy, const FloorModel& floors,
                              const std::string& source_tag);

/// Role projection: Building/Floor nodes always survive, Surface nodes
/// survive when the role keeps structural context, Instance nodes survive
/// per the role's retained class set. filter(g, Full) = g.
SceneGraph filter_role(const SceneGraph& graph, Role role, const Taxonomy& taxonomy);

/// Checks the hierarchy invariants: exactly one Building root, every other
/// node has exactly one parent, every Surface/Instance has a Floor parent,
/// node ids unique. Throws ValidationError on violation.
void validate_hierarchy(const SceneGraph& graph);

/// Deterministic GraphML 1.0 serialization (UTF-8, stable attribute
/// order). Identical graphs produce byte-identical documents.
std::string export_graphml(const SceneGraph& graph);

/// Strict parser for the documents export_graphml emits (plus standard
/// XML escapes/whitespace). import(export(g)) == g and
/// export(import(bytes)) reproduces writer-produced bytes exactly.
SceneGraph import_graphml(const std::string& bytes);

struct PayloadView {
  std::string name;
  std::size_t bytes = 0;
  std::size_t nodes = 0;
};

struct PayloadRow {
  PayloadView view;
  double node_reduction = 0.0;  // 1 - nodes/full.nodes
  double byte_reduction = 0.0;  // 1 - bytes/full.bytes
};

struct PayloadReport {
  PayloadView full;
  std::vector<PayloadRow> views;
};

/// Size and node-count accounting of role views against the full graph.
PayloadReport payload_stats(const PayloadView& full,
                            const std::vector<PayloadView>& views);

}  // namespace insight
