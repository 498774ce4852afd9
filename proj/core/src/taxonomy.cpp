#include "insight/taxonomy.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "insight/errors.hpp"

namespace insight {

using nlohmann::json;

const char* to_string(Category c) {
  switch (c) {
    case Category::Egress: return "egress";
    case Category::FireSuppression: return "fire_suppression";
    case Category::FireAlarm: return "fire_alarm";
    case Category::UtilityControl: return "utility_control";
    case Category::Medical: return "medical";
    case Category::Structural: return "structural";
    case Category::Obstacle: return "obstacle";
  }
  return "?";
}

const char* to_string(Priority p) {
  switch (p) {
    case Priority::Critical: return "critical";
    case Priority::High: return "high";
    case Priority::Normal: return "normal";
  }
  return "?";
}

const char* to_string(Role r) {
  switch (r) {
    case Role::Firefighter: return "firefighter";
    case Role::Ems: return "ems";
    case Role::Full: return "full";
  }
  return "?";
}

Role role_from_string(std::string_view s) {
  if (s == "firefighter") return Role::Firefighter;
  if (s == "ems") return Role::Ems;
  if (s == "full") return Role::Full;
  throw ValidationError("unknown role: " + std::string(s));
}

namespace {

Category category_from_string(std::string_view s) {
  if (s == "egress") return Category::Egress;
  if (s == "fire_suppression") return Category::FireSuppression;
  if (s == "fire_alarm") return Category::FireAlarm;
  if (s == "utility_control") return Category::UtilityControl;
  if (s == "medical") return Category::Medical;
  if (s == "structural") return Category::Structural;
  if (s == "obstacle") return Category::Obstacle;
  throw ValidationError("unknown category: " + std::string(s));
}

Priority priority_from_string(std::string_view s) {
  if (s == "critical") return Priority::Critical;
  if (s == "high") return Priority::High;
  if (s == "normal") return Priority::Normal;
  throw ValidationError("unknown priority: " + std::string(s));
}

struct ClassSeed {
  const char* name;
  Category category;
  const char* iso_name;
  bool structural_surface;
};

// Table order: egress, fire suppression, fire alarm, utility control,
// medical, structural, obstacles. Priorities derive from category below.
constexpr std::array<ClassSeed, 23> kDefaultClasses = {{
    {"door", Category::Egress, "IfcDoor", false},
    {"window", Category::Egress, "IfcWindow", false},
    {"stairs", Category::Egress, "IfcStair", false},
    {"elevator", Category::Egress, "IfcTransportElement", false},
    {"ramp", Category::Egress, "IfcRamp", false},
    {"exit_sign", Category::Egress, "IfcSign", false},
    {"railing", Category::Egress, "IfcRailing", false},
    {"fire_extinguisher", Category::FireSuppression, "IfcFireSuppressionTerminal", false},
    {"standpipe", Category::FireSuppression, "IfcPipeSegment", false},
    {"fire_hose_cabinet", Category::FireSuppression, "IfcFireSuppressionTerminal", false},
    {"sprinkler", Category::FireSuppression, "IfcFireSuppressionTerminal", false},
    {"fire_alarm_panel", Category::FireAlarm, "IfcUnitaryControlElement", false},
    {"fire_alarm_pull", Category::FireAlarm, "IfcAlarm", false},
    {"electrical_panel", Category::UtilityControl, "IfcElectricDistributionBoard", false},
    {"gas_shutoff", Category::UtilityControl, "IfcValve", false},
    {"water_shutoff", Category::UtilityControl, "IfcValve", false},
    {"aed", Category::Medical, "IfcMedicalDevice", false},
    {"wall", Category::Structural, "IfcWall", true},
    {"floor", Category::Structural, "IfcSlab", true},
    {"ceiling", Category::Structural, "IfcCovering", true},
    {"column", Category::Structural, "IfcColumn", false},
    {"furniture", Category::Obstacle, "IfcFurniture", false},
    {"clutter", Category::Obstacle, "IfcBuildingElementProxy", false},
}};

Priority default_priority(Category c) {
  switch (c) {
    case Category::FireAlarm:
    case Category::FireSuppression:
    case Category::Medical:
    case Category::UtilityControl:
      return Priority::Critical;
    case Category::Egress:
      return Priority::High;
    case Category::Structural:
    case Category::Obstacle:
      return Priority::Normal;
  }
  return Priority::Normal;
}

// Per-subarea caps K. Summed over the 7 subareas these give the published
// totals (aed 7, panel 7, pull 21, extinguisher 21, hose cabinet 14,
// exit sign 35, electrical panel 21).
constexpr std::array<std::pair<const char*, int>, 7> kDefaultCaps = {{
    {"aed", 1},
    {"fire_alarm_panel", 1},
    {"fire_alarm_pull", 3},
    {"fire_extinguisher", 3},
    {"fire_hose_cabinet", 2},
    {"exit_sign", 5},
    {"electrical_panel", 3},
}};

}  // namespace

Taxonomy Taxonomy::defaults() {
  Taxonomy t;
  int id = 0;
  for (const ClassSeed& seed : kDefaultClasses) {
    SafetyClass c;
    c.id = id++;
    c.name = seed.name;
    c.category = seed.category;
    c.iso_name = seed.iso_name;
    c.priority = default_priority(seed.category);
    c.is_structural_surface = seed.structural_surface;
    t.classes_.push_back(std::move(c));
  }
  t.index();

  // Source-dataset mapping: six direct, four aggregate to furniture,
  // beam remaps to column, board and clutter are excluded.
  const int furniture = t.id_of("furniture");
  const int column = t.id_of("column");
  auto direct = [&](const char* token) {
    t.source_map_.emplace_back(
        token, MappedLabel{MappedLabel::Kind::Direct, t.id_of(token)});
  };
  direct("ceiling");
  direct("floor");
  direct("wall");
  t.source_map_.emplace_back("beam", MappedLabel{MappedLabel::Kind::Column, column});
  direct("column");
  direct("window");
  direct("door");
  for (const char* tok : {"table", "chair", "sofa", "bookcase"}) {
    t.source_map_.emplace_back(tok, MappedLabel{MappedLabel::Kind::Furniture, furniture});
  }
  t.source_map_.emplace_back("board", MappedLabel{MappedLabel::Kind::Excluded, -1});
  t.source_map_.emplace_back("clutter", MappedLabel{MappedLabel::Kind::Excluded, -1});
  for (const auto& [tok, _] : t.source_map_) t.source_tokens_.push_back(tok);

  // Firefighter view: suppression, alarm and egress categories. Utility
  // control stays out of the default set (config flag below re-adds it).
  t.firefighter_.role = Role::Firefighter;
  t.firefighter_.keep_structural_context = true;
  for (const SafetyClass& c : t.classes_) {
    if (c.category == Category::FireSuppression ||
        c.category == Category::FireAlarm || c.category == Category::Egress) {
      t.firefighter_.retained_classes.insert(c.id);
    }
  }

  // EMS view: elevators, ramps and AEDs.
  t.ems_.role = Role::Ems;
  t.ems_.keep_structural_context = true;
  for (const char* name : {"elevator", "ramp", "aed"}) {
    t.ems_.retained_classes.insert(t.id_of(name));
  }

  t.full_.role = Role::Full;
  t.full_.keep_structural_context = true;
  for (const SafetyClass& c : t.classes_) t.full_.retained_classes.insert(c.id);

  for (const auto& [name, k] : kDefaultCaps) t.caps_.emplace_back(t.id_of(name), k);
  std::sort(t.caps_.begin(), t.caps_.end());

  t.validate();
  return t;
}

void Taxonomy::index() {
  overlapping_.clear();
  safety_.clear();
  for (const SafetyClass& c : classes_) {
    if (c.name == "wall" || c.name == "floor" || c.name == "ceiling" ||
        c.name == "column" || c.name == "window" || c.name == "door" ||
        c.name == "furniture") {
      overlapping_.insert(c.id);
    } else if (c.name != "clutter") {
      safety_.insert(c.id);
    }
  }
}

void Taxonomy::validate() const {
  if (classes_.size() != 23) {
    throw ValidationError("taxonomy must define exactly 23 classes, got " +
                          std::to_string(classes_.size()));
  }
  std::set<std::string> names;
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    if (classes_[i].id != static_cast<int>(i)) {
      throw ValidationError("class ids must be dense 0..22");
    }
    if (!names.insert(classes_[i].name).second) {
      throw ValidationError("duplicate class name: " + classes_[i].name);
    }
  }
  std::map<Category, int> counts;
  for (const SafetyClass& c : classes_) ++counts[c.category];
  const std::map<Category, int> expected = {
      {Category::Egress, 7},        {Category::FireSuppression, 4},
      {Category::FireAlarm, 2},     {Category::UtilityControl, 3},
      {Category::Medical, 1},       {Category::Structural, 4},
      {Category::Obstacle, 2},
  };
  if (counts != expected) {
    throw ValidationError("category membership does not match the 23-class table");
  }
  for (const auto& [id, k] : caps_) {
    if (k < 0) throw ValidationError("negative cap for class " + class_by_id(id).name);
  }
}

const SafetyClass& Taxonomy::class_by_id(int id) const {
  if (id < 0 || id >= static_cast<int>(classes_.size())) {
    throw ValidationError("class id out of range: " + std::to_string(id));
  }
  return classes_[static_cast<std::size_t>(id)];
}

const SafetyClass* Taxonomy::find(std::string_view name) const {
  for (const SafetyClass& c : classes_) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

int Taxonomy::id_of(std::string_view name) const {
  const SafetyClass* c = find(name);
  if (!c) throw ValidationError("unknown class: " + std::string(name));
  return c->id;
}

MappedLabel Taxonomy::map_source_label(std::string_view token) const {
  for (const auto& [tok, mapped] : source_map_) {
    if (tok == token) return mapped;
  }
  throw ValidationError("unknown source label: " + std::string(token));
}

bool Taxonomy::role_retained(int class_id, Role role) const {
  const SafetyClass& c = class_by_id(class_id);
  const RoleFilterSpec& spec = role_spec(role);
  if (c.is_structural_surface && spec.keep_structural_context) return true;
  return spec.retained_classes.count(class_id) > 0;
}

const RoleFilterSpec& Taxonomy::role_spec(Role role) const {
  switch (role) {
    case Role::Firefighter: return firefighter_;
    case Role::Ems: return ems_;
    case Role::Full: return full_;
  }
  return full_;
}

std::optional<int> Taxonomy::per_subarea_cap(int class_id) const {
  for (const auto& [id, k] : caps_) {
    if (id == class_id) return k;
  }
  return std::nullopt;
}

std::optional<long> Taxonomy::cap_for(int class_id, int n_subareas) const {
  if (n_subareas < 0) throw ValidationError("negative subarea count");
  const std::optional<int> k = per_subarea_cap(class_id);
  if (!k) return std::nullopt;
  return static_cast<long>(*k) * n_subareas;
}

std::vector<int> Taxonomy::capped_classes() const {
  std::vector<int> out;
  out.reserve(caps_.size());
  for (const auto& [id, _] : caps_) out.push_back(id);
  return out;
}

namespace {

RoleFilterSpec parse_role(const json& j, const Taxonomy& t, Role role) {
  RoleFilterSpec spec;
  spec.role = role;
  spec.keep_structural_context = j.value("keep_structural_context", true);
  if (j.contains("categories")) {
    for (const auto& cat : j.at("categories")) {
      const Category c = category_from_string(cat.get<std::string>());
      for (const SafetyClass& sc : t.classes()) {
        if (sc.category == c) spec.retained_classes.insert(sc.id);
      }
    }
  }
  if (j.contains("classes")) {
    for (const auto& name : j.at("classes")) {
      spec.retained_classes.insert(t.id_of(name.get<std::string>()));
    }
  }
  return spec;
}

}  // namespace

Taxonomy Taxonomy::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(ParseErrorKind::BadSyntax, std::string("taxonomy config: ") + e.what());
  }

  Taxonomy t = defaults();

  if (j.contains("classes")) {
    std::vector<SafetyClass> classes;
    for (const auto& cj : j.at("classes")) {
      SafetyClass c;
      c.id = cj.at("id").get<int>();
      c.name = cj.at("name").get<std::string>();
      c.category = category_from_string(cj.at("category").get<std::string>());
      c.iso_name = cj.value("iso_name", std::string());
      c.priority = cj.contains("priority")
                       ? priority_from_string(cj.at("priority").get<std::string>())
                       : default_priority(c.category);
      c.is_structural_surface = cj.value("is_structural_surface", false);
      classes.push_back(std::move(c));
    }
    std::sort(classes.begin(), classes.end(),
              [](const SafetyClass& a, const SafetyClass& b) { return a.id < b.id; });
    t.classes_ = std::move(classes);
    t.index();
  }

  if (j.contains("iso_names")) {
    for (const auto& [name, iso] : j.at("iso_names").items()) {
      t.classes_[static_cast<std::size_t>(t.id_of(name))].iso_name =
          iso.get<std::string>();
    }
  }

  if (j.contains("roles")) {
    const json& roles = j.at("roles");
    if (roles.contains("firefighter")) {
      t.firefighter_ = parse_role(roles.at("firefighter"), t, Role::Firefighter);
      if (roles.at("firefighter").value("include_utility_control", false)) {
        for (const SafetyClass& c : t.classes_) {
          if (c.category == Category::UtilityControl) {
            t.firefighter_.retained_classes.insert(c.id);
          }
        }
      }
    }
    if (roles.contains("ems")) {
      t.ems_ = parse_role(roles.at("ems"), t, Role::Ems);
    }
  }

  if (j.contains("caps")) {
    t.caps_.clear();
    for (const auto& [name, k] : j.at("caps").items()) {
      t.caps_.emplace_back(t.id_of(name), k.get<int>());
    }
    std::sort(t.caps_.begin(), t.caps_.end());
  }

  t.validate();
  return t;
}

Taxonomy Taxonomy::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open taxonomy config: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

}  // namespace insight
