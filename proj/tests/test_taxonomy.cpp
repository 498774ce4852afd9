#include <doctest.h>

#include <map>
#include <set>

#include "insight/errors.hpp"
#include "insight/taxonomy.hpp"

using namespace insight;

TEST_CASE("default taxonomy matches the 23-class table") {
  const Taxonomy t = Taxonomy::defaults();
  REQUIRE(t.size() == 23);

  std::map<Category, int> counts;
  std::set<std::string> names;
  for (const SafetyClass& c : t.classes()) {
    ++counts[c.category];
    CHECK(names.insert(c.name).second);
    CHECK(!c.iso_name.empty());
  }
  CHECK(counts[Category::Egress] == 7);
  CHECK(counts[Category::FireSuppression] == 4);
  CHECK(counts[Category::FireAlarm] == 2);
  CHECK(counts[Category::UtilityControl] == 3);
  CHECK(counts[Category::Medical] == 1);
  CHECK(counts[Category::Structural] == 4);
  CHECK(counts[Category::Obstacle] == 2);

  for (int i = 0; i < t.size(); ++i) CHECK(t.class_by_id(i).id == i);

  CHECK(t.class_by_id(t.id_of("wall")).is_structural_surface);
  CHECK(t.class_by_id(t.id_of("floor")).is_structural_surface);
  CHECK(t.class_by_id(t.id_of("ceiling")).is_structural_surface);
  CHECK_FALSE(t.class_by_id(t.id_of("column")).is_structural_surface);

  CHECK(t.overlapping_classes().size() == 7);
  CHECK(t.safety_classes().size() == 15);
  // clutter is neither overlapping nor safety-critical.
  CHECK_FALSE(t.safety_classes().count(t.id_of("clutter")));
  CHECK_FALSE(t.overlapping_classes().count(t.id_of("clutter")));
}

TEST_CASE("source label mapping") {
  const Taxonomy t = Taxonomy::defaults();

  SUBCASE("aggregation and remapping") {
    CHECK(t.map_source_label("chair").kind == MappedLabel::Kind::Furniture);
    CHECK(t.map_source_label("chair").class_id == t.id_of("furniture"));
    CHECK(t.map_source_label("beam").kind == MappedLabel::Kind::Column);
    CHECK(t.map_source_label("beam").class_id == t.id_of("column"));
    CHECK(t.map_source_label("board").excluded());
    CHECK(t.map_source_label("clutter").excluded());
    const MappedLabel wall = t.map_source_label("wall");
    CHECK(wall.kind == MappedLabel::Kind::Direct);
    CHECK(wall.class_id == t.id_of("wall"));
  }

  SUBCASE("total over the 13 source tokens, deterministic") {
    REQUIRE(t.source_tokens().size() == 13);
    int direct = 0, furniture = 0, column = 0, excluded = 0;
    for (const std::string& tok : t.source_tokens()) {
      const MappedLabel first = t.map_source_label(tok);
      const MappedLabel second = t.map_source_label(tok);
      CHECK(first.kind == second.kind);
      CHECK(first.class_id == second.class_id);
      switch (first.kind) {
        case MappedLabel::Kind::Direct: ++direct; break;
        case MappedLabel::Kind::Furniture: ++furniture; break;
        case MappedLabel::Kind::Column: ++column; break;
        case MappedLabel::Kind::Excluded: ++excluded; break;
      }
    }
    CHECK(direct == 6);
    CHECK(furniture == 4);
    CHECK(column == 1);
    CHECK(excluded == 2);
  }

  SUBCASE("unknown token rejected") {
    CHECK_THROWS_AS((void)t.map_source_label("lamp"), ValidationError);
  }
}

TEST_CASE("role retention") {
  const Taxonomy t = Taxonomy::defaults();

  CHECK(t.role_retained(t.id_of("fire_extinguisher"), Role::Firefighter));
  CHECK(t.role_retained(t.id_of("aed"), Role::Ems));
  CHECK_FALSE(t.role_retained(t.id_of("fire_extinguisher"), Role::Ems));
  CHECK(t.role_retained(t.id_of("door"), Role::Firefighter));
  // EMS keeps only elevators, ramps and AEDs among instances.
  CHECK_FALSE(t.role_retained(t.id_of("door"), Role::Ems));
  CHECK(t.role_retained(t.id_of("elevator"), Role::Ems));
  // Utility control stays out of the default firefighter view.
  CHECK_FALSE(t.role_retained(t.id_of("electrical_panel"), Role::Firefighter));
  // Structural surfaces ride along in every role.
  CHECK(t.role_retained(t.id_of("wall"), Role::Ems));
  CHECK(t.role_retained(t.id_of("wall"), Role::Firefighter));

  for (const SafetyClass& c : t.classes()) {
    CHECK(t.role_retained(c.id, Role::Full));
  }

  SUBCASE("retained sets are strict subsets of Full, no suppression overlap") {
    const auto& ff = t.role_spec(Role::Firefighter).retained_classes;
    const auto& ems = t.role_spec(Role::Ems).retained_classes;
    const auto& full = t.role_spec(Role::Full).retained_classes;
    CHECK(ff.size() < full.size());
    CHECK(ems.size() < full.size());
    for (int id : ff) CHECK(full.count(id));
    for (int id : ems) {
      CHECK(full.count(id));
      if (ff.count(id)) {
        CHECK(t.class_by_id(id).category != Category::FireSuppression);
      }
    }
  }
}

TEST_CASE("cardinality caps") {
  const Taxonomy t = Taxonomy::defaults();

  CHECK(t.cap_for(t.id_of("exit_sign"), 7) == 35);
  CHECK(t.cap_for(t.id_of("aed"), 7) == 7);
  CHECK(t.cap_for(t.id_of("aed"), 0) == 0);
  CHECK_FALSE(t.cap_for(t.id_of("door"), 7).has_value());

  // Caps exist for exactly the 7 listed classes and total 126 over 7
  // subareas.
  const std::vector<int> capped = t.capped_classes();
  REQUIRE(capped.size() == 7);
  long total = 0;
  for (int id : capped) total += *t.cap_for(id, 7);
  CHECK(total == 126);
}

TEST_CASE("priority tiers") {
  const Taxonomy t = Taxonomy::defaults();
  CHECK(t.class_by_id(t.id_of("fire_alarm_panel")).priority == Priority::Critical);
  CHECK(t.class_by_id(t.id_of("aed")).priority == Priority::Critical);
  CHECK(t.class_by_id(t.id_of("gas_shutoff")).priority == Priority::Critical);
  CHECK(t.class_by_id(t.id_of("door")).priority == Priority::High);
  CHECK(t.class_by_id(t.id_of("wall")).priority == Priority::Normal);
  CHECK(t.class_by_id(t.id_of("furniture")).priority == Priority::Normal);
}

TEST_CASE("json config overrides") {
  SUBCASE("iso name and cap overrides") {
    const Taxonomy t = Taxonomy::from_json_text(R"({
      "iso_names": {"aed": "IfcMedicalDevice.DEFIBRILLATOR"},
      "caps": {"aed": 2}
    })");
    CHECK(t.class_by_id(t.id_of("aed")).iso_name == "IfcMedicalDevice.DEFIBRILLATOR");
    CHECK(t.cap_for(t.id_of("aed"), 7) == 14);
    CHECK_FALSE(t.cap_for(t.id_of("exit_sign"), 7).has_value());
  }

  SUBCASE("utility control flag widens the firefighter view") {
    const Taxonomy t = Taxonomy::from_json_text(R"({
      "roles": {"firefighter": {
        "categories": ["fire_suppression", "fire_alarm", "egress"],
        "include_utility_control": true
      }}
    })");
    CHECK(t.role_retained(t.id_of("electrical_panel"), Role::Firefighter));
    CHECK(t.role_retained(t.id_of("gas_shutoff"), Role::Firefighter));
  }

  SUBCASE("malformed json rejected") {
    CHECK_THROWS_AS((void)Taxonomy::from_json_text("{nope"), ParseError);
  }

  SUBCASE("class table must keep the published shape") {
    CHECK_THROWS_AS(
        (void)Taxonomy::from_json_text(R"({"classes": [
          {"id": 0, "name": "door", "category": "egress"}
        ]})"),
        ValidationError);
  }
}
