#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace insight {

enum class Category {
  Egress,
  FireSuppression,
  FireAlarm,
  UtilityControl,
  Medical,
  Structural,
  Obstacle,
};

enum class Priority { Critical, High, Normal };

enum class Role { Firefighter, Ems, Full };

const char* to_string(Category c);
const char* to_string(Priority p);
const char* to_string(Role r);
Role role_from_string(std::string_view s);

/// One entry of the 23-class public-safety taxonomy.
struct SafetyClass {
  int id = -1;
  std::string name;
  Category category = Category::Obstacle;
  std::string iso_name;  // IFC-style exchange name, e.g. "IfcDoor"
  Priority priority = Priority::Normal;
  bool is_structural_surface = false;  // wall / floor / ceiling
};

/// Which classes a responder discipline keeps in its scene-graph view.
struct RoleFilterSpec {
  Role role = Role::Full;
  std::set<int> retained_classes;
  bool keep_structural_context = true;
};

/// Result of mapping a source-dataset label into the taxonomy.
/// Four of the source tokens aggregate into furniture, beam remaps to
/// column, board and clutter carry no pipeline equivalent.
struct MappedLabel {
  enum class Kind { Direct, Furniture, Column, Excluded };

  Kind kind = Kind::Excluded;
  int class_id = -1;  // valid unless Excluded

  bool excluded() const { return kind == Kind::Excluded; }
  std::optional<int> resolved() const {
    if (excluded()) return std::nullopt;
    return class_id;
  }
};

/// Immutable after construction; safe for unrestricted concurrent reads.
class Taxonomy {
 public:
  /// The built-in tables: 23 classes, role sets, per-subarea caps and the
  /// 13-token source-dataset mapping.
  static Taxonomy defaults();

  /// Loads overrides from a JSON config file; any omitted section falls
  /// back to the defaults. Throws ParseError / ValidationError.
  static Taxonomy from_json_file(const std::string& path);
  static Taxonomy from_json_text(const std::string& text);

  const std::vector<SafetyClass>& classes() const { return classes_; }
  const SafetyClass& class_by_id(int id) const;
  const SafetyClass* find(std::string_view name) const;
  /// Throws ValidationError for unknown names.
  int id_of(std::string_view name) const;
  int size() const { return static_cast<int>(classes_.size()); }

  /// Maps one of the 13 source-dataset tokens. Unknown tokens throw
  /// ValidationError.
  MappedLabel map_source_label(std::string_view token) const;
  const std::vector<std::string>& source_tokens() const { return source_tokens_; }

  bool role_retained(int class_id, Role role) const;
  const RoleFilterSpec& role_spec(Role role) const;

  /// Per-subarea cap K; nullopt = class is uncapped.
  std::optional<int> per_subarea_cap(int class_id) const;
  /// Total cap over n subareas; nullopt = uncapped.
  std::optional<long> cap_for(int class_id, int n_subareas) const;
  /// Class ids that carry a cap, ascending.
  std::vector<int> capped_classes() const;

  /// The 7 classes shared with the source dataset (per-point accuracy set).
  const std::set<int>& overlapping_classes() const { return overlapping_; }
  /// The 15 novel safety-critical classes (everything that is neither
  /// overlapping nor clutter).
  const std::set<int>& safety_classes() const { return safety_; }

 private:
  Taxonomy() = default;
  void index();
  void validate() const;

  std::vector<SafetyClass> classes_;
  std::vector<std::string> source_tokens_;
  std::vector<std::pair<std::string, MappedLabel>> source_map_;
  RoleFilterSpec firefighter_;
  RoleFilterSpec ems_;
  RoleFilterSpec full_;
  std::vector<std::pair<int, int>> caps_;  // (class_id, per-subarea K)
  std::set<int> overlapping_;
  std::set<int> safety_;
};

}  // namespace insight
