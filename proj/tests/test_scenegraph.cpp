#include <doctest.h>

#include <random>
#include <set>

#include "insight/errors.hpp"
#include "insight/scene_graph.hpp"

using namespace insight;

namespace {

const Taxonomy& taxonomy() {
  static const Taxonomy t = Taxonomy::defaults();
  return t;
}

FusedInstance inst(const std::string& cls, const Vec3& where, uint32_t seq,
                   double conf = 0.8) {
  FusedInstance f;
  f.class_id = taxonomy().id_of(cls);
  f.class_name = cls;
  f.area_id = "a";
  f.centroid = where;
  f.confidence = conf;
  f.seq = seq;
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%05u", seq);
  f.instance_id = f.area_id + "/" + cls + "/" + buf;
  f.box.center = where;
  f.box.extents = Vec3(0.4, 0.3, 0.5);
  f.observations.push_back({"img0", 0, 10, conf, Source::Sam3});
  f.point_count = 10;
  return f;
}

SceneGraph four_class_graph() {
  const std::vector<FusedInstance> instances = {
      inst("fire_extinguisher", Vec3(1, 1, 1), 0),
      inst("aed", Vec3(2, 1, 1), 1),
      inst("door", Vec3(3, 1, 1), 2),
      inst("wall", Vec3(5, 0, 1.5), 3),
  };
  return build_scene_graph("a", instances, taxonomy(), FloorModel::single_floor(),
                           "sam3")
      .graph;
}

std::set<std::string> class_names(const SceneGraph& g) {
  std::set<std::string> names;
  for (const SceneNode& n : g.nodes) {
    if (n.kind == NodeKind::Instance || n.kind == NodeKind::Surface) {
      names.insert(n.class_name);
    }
  }
  return names;
}

}  // namespace

TEST_CASE("build counts nodes and edges") {
  const std::vector<FusedInstance> instances = {
      inst("wall", Vec3(0, 0, 1.5), 0),
      inst("door", Vec3(1, 0, 1), 1),
      inst("door", Vec3(4, 0, 1), 2),
  };
  const BuildResult result = build_scene_graph("a", instances, taxonomy(),
                                               FloorModel::single_floor(), "sam3");
  const SceneGraph& g = result.graph;
  CHECK(g.node_count() == 5);  // building + floor + wall + 2 doors
  CHECK(g.edge_count() == 4);
  CHECK(result.rejected == 0);
  validate_hierarchy(g);

  CHECK(g.nodes[0].kind == NodeKind::Building);
  CHECK(g.nodes[0].node_id == "a/building");
  CHECK(g.nodes[1].kind == NodeKind::Floor);
  CHECK(g.nodes[1].node_id == "a/f0/floor");
  CHECK(g.nodes[2].kind == NodeKind::Surface);
  CHECK(g.nodes[2].node_id == "a/f0/surface/wall/0");
  CHECK(g.nodes[3].node_id == "a/f0/instance/door/0");
  CHECK(g.nodes[4].node_id == "a/f0/instance/door/1");
  CHECK(g.nodes[0].n_children == 1);
  CHECK(g.nodes[1].n_children == 3);
  CHECK(g.nodes[1].class_histogram == "door=2,wall=1");

  // Node attributes carry the exchange metadata.
  CHECK(g.nodes[3].iso_name == "IfcDoor");
  CHECK(g.nodes[3].category == "egress");
  CHECK(g.nodes[3].priority == "high");
  CHECK(g.nodes[3].source == "sam3");
}

TEST_CASE("empty input builds a building-only graph") {
  const BuildResult result = build_scene_graph("a", {}, taxonomy(),
                                               FloorModel::single_floor(), "sam3");
  CHECK(result.graph.node_count() == 1);
  CHECK(result.graph.edge_count() == 0);
  CHECK(result.graph.nodes[0].kind == NodeKind::Building);
  validate_hierarchy(result.graph);
  const std::string doc = export_graphml(result.graph);
  CHECK(import_graphml(doc).node_count() == 1);
}

TEST_CASE("non-finite centroids are rejected with a diagnostic") {
  FusedInstance bad = inst("door", Vec3(1, 1, 1), 0);
  bad.centroid.x() = std::numeric_limits<double>::quiet_NaN();
  const BuildResult result = build_scene_graph("a", {bad}, taxonomy(),
                                               FloorModel::single_floor(), "sam3");
  CHECK(result.rejected == 1);
  CHECK(result.graph.node_count() == 1);
  REQUIRE(result.diagnostics.size() == 1);
}

TEST_CASE("assign_floor") {
  const FloorModel two = FloorModel::from_elevations({0.0, 3.0});
  CHECK(assign_floor(1.2, two) == 0);
  CHECK(assign_floor(3.0, two) == 1);  // half-open bins [base, next)
  CHECK(assign_floor(-5.0, two) == 0);  // clamps below the lowest base
  CHECK(assign_floor(99.0, two) == 1);
  CHECK(assign_floor(7.7, FloorModel::single_floor()) == 0);
  CHECK_THROWS_AS((void)FloorModel::from_elevations({3.0, 0.0}), ValidationError);
}

TEST_CASE("multi-floor build bins instances by elevation") {
  const FloorModel floors = FloorModel::from_elevations({0.0, 3.0, 6.0});
  std::vector<FusedInstance> instances;
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> z(-1.0, 9.0);
  for (uint32_t i = 0; i < 60; ++i) {
    instances.push_back(inst("door", Vec3(i * 0.9, 0, z(rng)), i));
  }
  const SceneGraph g =
      build_scene_graph("a", instances, taxonomy(), floors, "sam3").graph;
  validate_hierarchy(g);

  // Every floor materializes even when empty; 1 building + 3 floors + 60.
  CHECK(g.node_count() == 64);

  // z-binning oracle: an instance's floor parent matches a direct scan.
  std::map<std::string, uint32_t> index_of;
  for (uint32_t i = 0; i < g.nodes.size(); ++i) index_of[g.nodes[i].node_id] = i;
  for (const auto& [parent, child] : g.edges) {
    const SceneNode& c = g.nodes[child];
    if (c.kind != NodeKind::Instance) continue;
    int expected = 0;
    for (std::size_t k = 0; k < floors.bases.size(); ++k) {
      if (c.centroid.z() >= floors.bases[k]) expected = static_cast<int>(k);
    }
    CHECK(g.nodes[parent].kind == NodeKind::Floor);
    CHECK(g.nodes[parent].floor_id == expected);
    CHECK(c.floor_id == expected);
  }
}

TEST_CASE("role filtering") {
  const SceneGraph g = four_class_graph();
  REQUIRE(g.node_count() == 6);  // building, floor, wall, ext, aed, door

  SUBCASE("firefighter keeps suppression, egress and structure") {
    const SceneGraph view = filter_role(g, Role::Firefighter, taxonomy());
    CHECK(class_names(view) ==
          std::set<std::string>{"fire_extinguisher", "door", "wall"});
    validate_hierarchy(view);
  }

  SUBCASE("ems keeps aed and structure") {
    const SceneGraph view = filter_role(g, Role::Ems, taxonomy());
    CHECK(class_names(view) == std::set<std::string>{"aed", "wall"});
    validate_hierarchy(view);
  }

  SUBCASE("full view is the identity") {
    const SceneGraph view = filter_role(g, Role::Full, taxonomy());
    REQUIRE(view.node_count() == g.node_count());
    REQUIRE(view.edge_count() == g.edge_count());
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      CHECK(view.nodes[i].node_id == g.nodes[i].node_id);
    }
    CHECK(view.edges == g.edges);
    CHECK(export_graphml(view) == export_graphml(g));
  }

  SUBCASE("filtered node sets are subsets") {
    for (Role role : {Role::Firefighter, Role::Ems}) {
      const SceneGraph view = filter_role(g, role, taxonomy());
      std::set<std::string> all_ids;
      for (const SceneNode& n : g.nodes) all_ids.insert(n.node_id);
      for (const SceneNode& n : view.nodes) CHECK(all_ids.count(n.node_id));
    }
  }
}

TEST_CASE("hierarchy validation catches malformed graphs") {
  SceneGraph g = four_class_graph();

  SUBCASE("duplicate parent edge") {
    g.edges.emplace_back(0, 2);  // wall now has two parents
    CHECK_THROWS_AS(validate_hierarchy(g), ValidationError);
  }
  SUBCASE("orphan node") {
    g.edges.pop_back();
    CHECK_THROWS_AS(validate_hierarchy(g), ValidationError);
  }
  SUBCASE("two buildings") {
    SceneNode extra = g.nodes[0];
    extra.node_id = "b/building";
    g.nodes.push_back(extra);
    CHECK_THROWS_AS(validate_hierarchy(g), ValidationError);
  }
}

TEST_CASE("graphml export") {
  const SceneGraph g = four_class_graph();
  const std::string doc = export_graphml(g);

  SUBCASE("well-formed document with one element per node and edge") {
    std::size_t nodes = 0, edges = 0, pos = 0;
    while ((pos = doc.find("<node ", pos)) != std::string::npos) {
      ++nodes;
      pos += 6;
    }
    pos = 0;
    while ((pos = doc.find("<edge ", pos)) != std::string::npos) {
      ++edges;
      pos += 6;
    }
    CHECK(nodes == g.node_count());
    CHECK(edges == g.edge_count());
    CHECK(doc.find("<?xml version=\"1.0\" encoding=\"UTF-8\"?>") == 0);
    CHECK(doc.find("http://graphml.graphdrawing.org/xmlns") != std::string::npos);
  }

  SUBCASE("export is deterministic") {
    CHECK(export_graphml(g) == doc);
  }

  SUBCASE("import reproduces the document byte for byte") {
    const SceneGraph back = import_graphml(doc);
    CHECK(back.node_count() == g.node_count());
    CHECK(back.edge_count() == g.edge_count());
    CHECK(export_graphml(back) == doc);
  }

  SUBCASE("graph attributes round trip") {
    SceneGraph with_attrs = g;
    with_attrs.graph_attributes["provenance"] = "tool;cfg=0123";
    with_attrs.graph_attributes["note"] = "escapes <&\"'> fine";
    const std::string doc2 = export_graphml(with_attrs);
    const SceneGraph back = import_graphml(doc2);
    CHECK(back.graph_attributes == with_attrs.graph_attributes);
    CHECK(export_graphml(back) == doc2);
  }

  SUBCASE("parser rejects trailing content and unknown keys") {
    CHECK_THROWS_AS((void)import_graphml(doc + "<extra/>"), ParseError);
    CHECK_THROWS_AS((void)import_graphml("<graphml>"), ParseError);
    std::string bad = doc;
    const std::size_t pos = bad.find("key=\"n0\"");
    bad.replace(pos, 8, "key=\"z9\"");
    CHECK_THROWS_AS((void)import_graphml(bad), ParseError);
  }
}

TEST_CASE("graphml round trip on randomized graphs") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> coord(-20.0, 20.0);
  std::uniform_real_distribution<double> conf(0.0, 1.0);
  const std::vector<std::string> classes = {"door", "wall", "aed", "exit_sign",
                                            "furniture", "ceiling"};
  for (int iter = 0; iter < 10; ++iter) {
    std::vector<FusedInstance> instances;
    std::uniform_int_distribution<int> count(0, 25);
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      FusedInstance f = inst(classes[i % classes.size()],
                             Vec3(coord(rng), coord(rng), coord(rng) + 20.0),
                             static_cast<uint32_t>(i), conf(rng));
      f.box.yaw = coord(rng) / 40.0;
      instances.push_back(f);
    }
    SceneGraph g = build_scene_graph("area_" + std::to_string(iter), instances,
                                     taxonomy(), FloorModel::single_floor(), "sam3")
                       .graph;
    g.graph_attributes["provenance"] = "seed=" + std::to_string(iter);
    const std::string doc = export_graphml(g);
    const SceneGraph back = import_graphml(doc);
    CHECK(back.node_count() == g.node_count());
    CHECK(back.edge_count() == g.edge_count());
    CHECK(export_graphml(back) == doc);
  }
}

TEST_CASE("payload stats") {
  const PayloadReport report =
      payload_stats({"full", 4200000, 30086}, {{"firefighter", 1800000, 12639},
                                               {"ems", 800000, 5589},
                                               {"full_again", 4200000, 30086}});
  CHECK(std::round(report.views[0].node_reduction * 100) == 58.0);
  CHECK(std::round(report.views[1].node_reduction * 100) == 81.0);
  CHECK(report.views[2].node_reduction == 0.0);
  CHECK(report.views[0].byte_reduction > 0.5);
}
