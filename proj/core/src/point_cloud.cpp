#include "insight/point_cloud.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <unordered_map>

#include <json.hpp>

#include "binary_io.hpp"
#include "insight/errors.hpp"

namespace insight {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::map<std::string, long> LabeledCloud::histogram(const Taxonomy& taxonomy) const {
  std::map<std::string, long> counts;
  for (int32_t id : semantic_id) ++counts[taxonomy.class_by_id(id).name];
  return counts;
}

namespace {

struct QuantizedKey {
  int64_t x, y, z;
  bool operator==(const QuantizedKey&) const = default;
};

struct QuantizedKeyHash {
  std::size_t operator()(const QuantizedKey& k) const {
    uint64_t h = 1469598103934665603ull;
    for (int64_t v : {k.x, k.y, k.z}) {
      for (int i = 0; i < 8; ++i) {
        h ^= static_cast<uint64_t>(v >> (8 * i)) & 0xFF;
        h *= 1099511628211ull;
      }
    }
    return static_cast<std::size_t>(h);
  }
};

// Duplicate world points come from the same raster pixel claimed in
// several views, so they are bit-identical; the grid absorbs rounding.
QuantizedKey quantize(const Vec3& p) {
  constexpr double kScale = 1e6;  // 1e-6 m cells
  return {static_cast<int64_t>(std::llround(p.x() * kScale)),
          static_cast<int64_t>(std::llround(p.y() * kScale)),
          static_cast<int64_t>(std::llround(p.z() * kScale))};
}

template <typename T, typename WriteFn>
void write_array(const fs::path& path, const std::vector<T>& values, WriteFn write_one) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  for (const T& v : values) write_one(out, v);
  if (!out) throw IoError("short write: " + path.string());
}

std::vector<float> read_f32_array(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<float> out;
  float v = 0.0f;
  while (detail::read_f32_le(in, v)) out.push_back(v);
  return out;
}

std::vector<int32_t> read_i32_array(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<int32_t> out;
  int32_t v = 0;
  while (detail::read_i32_le(in, v)) out.push_back(v);
  return out;
}

}  // namespace

std::vector<PointSet> resolve_point_conflicts(const std::vector<FusedInstance>& instances) {
  // Instances claim points in descending confidence (ties to the lower
  // instance id == earlier sort position).
  std::vector<std::size_t> order(instances.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (instances[a].confidence != instances[b].confidence) {
      return instances[a].confidence > instances[b].confidence;
    }
    return instances[a].instance_id < instances[b].instance_id;
  });

  std::unordered_map<QuantizedKey, bool, QuantizedKeyHash> claimed;
  std::vector<PointSet> kept(instances.size());
  for (std::size_t idx : order) {
    const FusedInstance& inst = instances[idx];
    PointSet& mine = kept[idx];
    mine.reserve(inst.points.size());
    for (const Vec3& p : inst.points) {
      if (claimed.emplace(quantize(p), true).second) mine.push_back(p);
    }
  }
  return kept;
}

LabeledCloud make_labeled_cloud(const std::string& area_id,
                                const std::vector<FusedInstance>& instances) {
  // Dense instance indices follow instance-id order.
  std::vector<std::size_t> order(instances.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return instances[a].instance_id < instances[b].instance_id;
  });

  const std::vector<PointSet> resolved = resolve_point_conflicts(instances);

  LabeledCloud cloud;
  cloud.area_id = area_id;
  int32_t dense_id = 0;
  for (std::size_t idx : order) {
    const FusedInstance& inst = instances[idx];
    for (const Vec3& p : resolved[idx]) {
      cloud.coords.push_back(static_cast<float>(p.x()));
      cloud.coords.push_back(static_cast<float>(p.y()));
      cloud.coords.push_back(static_cast<float>(p.z()));
      cloud.semantic_id.push_back(inst.class_id);
      cloud.instance_id.push_back(dense_id);
      cloud.confidence.push_back(static_cast<float>(inst.confidence));
    }
    ++dense_id;
  }
  return cloud;
}

void write_labeled_cloud(const LabeledCloud& cloud, const Taxonomy& taxonomy,
                         const std::string& dir,
                         const std::map<std::string, std::string>& provenance) {
  fs::create_directories(dir);
  const fs::path root(dir);
  write_array(root / "coord.f32le", cloud.coords, detail::write_f32_le);
  write_array(root / "segment.i32le", cloud.semantic_id, detail::write_i32_le);
  write_array(root / "instance.i32le", cloud.instance_id, detail::write_i32_le);
  write_array(root / "confidence.f32le", cloud.confidence, detail::write_f32_le);

  ordered_json manifest;
  manifest["schema"] = kPointCloudSchema;
  manifest["area_id"] = cloud.area_id;
  manifest["n_points"] = cloud.size();
  ordered_json classes = ordered_json::object();
  for (const auto& [name, n] : cloud.histogram(taxonomy)) classes[name] = n;
  manifest["classes"] = classes;
  manifest["has_color"] = false;
  if (!provenance.empty()) {
    ordered_json prov = ordered_json::object();
    for (const auto& [k, v] : provenance) prov[k] = v;
    manifest["provenance"] = prov;
  }
  std::ofstream out(root / "manifest.json");
  if (!out) throw IoError("cannot write manifest in " + dir);
  out << manifest.dump(2) << "\n";
}

LabeledCloud read_labeled_cloud(const std::string& dir) {
  const fs::path root(dir);
  std::ifstream in(root / "manifest.json");
  if (!in) throw IoError("cannot open manifest in " + dir);
  ordered_json manifest;
  try {
    in >> manifest;
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(ParseErrorKind::BadSyntax, std::string("manifest: ") + e.what());
  }
  if (manifest.value("schema", std::string()) != kPointCloudSchema) {
    throw ParseError(ParseErrorKind::BadSchema, "unsupported point cloud schema");
  }

  LabeledCloud cloud;
  cloud.area_id = manifest.value("area_id", std::string());
  cloud.coords = read_f32_array(root / "coord.f32le");
  cloud.semantic_id = read_i32_array(root / "segment.i32le");
  cloud.instance_id = read_i32_array(root / "instance.i32le");
  cloud.confidence = read_f32_array(root / "confidence.f32le");

  const std::size_t n = cloud.semantic_id.size();
  if (cloud.coords.size() != n * 3 || cloud.instance_id.size() != n ||
      cloud.confidence.size() != n) {
    throw ValidationError("labeled cloud arrays disagree in length");
  }
  const std::size_t declared = manifest.value("n_points", std::size_t{0});
  if (declared != n) {
    throw ValidationError("manifest n_points disagrees with array length");
  }
  return cloud;
}

void write_ground_truth_cloud(const GroundTruthCloud& cloud, const std::string& dir) {
  if (cloud.coords.size() != cloud.segment.size() * 3) {
    throw ValidationError("ground truth arrays disagree in length");
  }
  fs::create_directories(dir);
  const fs::path root(dir);
  write_array(root / "coord.f32le", cloud.coords, detail::write_f32_le);
  write_array(root / "segment.i32le", cloud.segment, detail::write_i32_le);
  ordered_json labels;
  labels["area_id"] = cloud.area_id;
  labels["labels"] = cloud.labels;
  std::ofstream out(root / "labels.json");
  if (!out) throw IoError("cannot write labels in " + dir);
  out << labels.dump(2) << "\n";
}

GroundTruthCloud read_ground_truth_cloud(const std::string& dir) {
  const fs::path root(dir);
  std::ifstream in(root / "labels.json");
  if (!in) throw IoError("cannot open labels.json in " + dir);
  ordered_json j;
  try {
    in >> j;
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(ParseErrorKind::BadSyntax, std::string("labels.json: ") + e.what());
  }
  GroundTruthCloud cloud;
  cloud.area_id = j.value("area_id", std::string());
  cloud.labels = j.at("labels").get<std::vector<std::string>>();
  cloud.coords = read_f32_array(root / "coord.f32le");
  cloud.segment = read_i32_array(root / "segment.i32le");
  if (cloud.coords.size() != cloud.segment.size() * 3) {
    throw ValidationError("ground truth arrays disagree in length");
  }
  for (int32_t s : cloud.segment) {
    if (s < 0 || s >= static_cast<int32_t>(cloud.labels.size())) {
      throw ValidationError("segment index outside label table");
    }
  }
  return cloud;
}

}  // namespace insight
