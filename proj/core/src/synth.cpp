#include "insight/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

#include "insight/depth_raster.hpp"
#include "insight/detections.hpp"
#include "insight/errors.hpp"
#include "insight/point_cloud.hpp"
#include "insight/rle_mask.hpp"

namespace insight {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

uint64_t derive_seed(uint64_t seed, const std::string& stream) {
  uint64_t h = 1469598103934665603ull ^ seed;
  for (char c : stream) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

// Deterministic patch of points around a center: a jittered grid on the
// top face of a fixture-sized cube. The same fixture yields the same
// patch in every view; views shift it rigidly.
PointSet fixture_patch(const Vec3& center, double size, int n_points, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-size * 0.05, size * 0.05);
  const int per_side = std::max(1, static_cast<int>(std::ceil(std::sqrt(n_points))));
  PointSet points;
  points.reserve(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    const int gx = i % per_side;
    const int gy = i / per_side;
    const double fx = per_side == 1 ? 0.0 : (gx / double(per_side - 1)) - 0.5;
    const double fy = per_side == 1 ? 0.0 : (gy / double(per_side - 1)) - 0.5;
    points.emplace_back(center.x() + fx * size + jitter(rng),
                        center.y() + fy * size + jitter(rng),
                        center.z() + jitter(rng));
  }
  return points;
}

// Grid of points on an axis-aligned rectangle (structural surfaces).
PointSet surface_grid(const Vec3& origin, const Vec3& u_dir, const Vec3& v_dir,
                      double u_len, double v_len, double step) {
  PointSet points;
  for (double u = 0.0; u <= u_len + 1e-9; u += step) {
    for (double v = 0.0; v <= v_len + 1e-9; v += step) {
      points.push_back(origin + u_dir * u + v_dir * v);
    }
  }
  return points;
}

struct ImageOut {
  std::string image_id;
  PointSet points;
  DetectionRecord record;
};

// One raster + mask per generated observation; the points occupy a
// row-major block of pixels, the rest stay sentinel.
void write_observation(const fs::path& root, const ImageOut& img, uint32_t width,
                       uint32_t height) {
  if (img.points.size() > static_cast<std::size_t>(width) * height) {
    throw ValidationError("synthetic observation exceeds raster capacity");
  }
  XyzRaster raster(width, height);
  for (std::size_t i = 0; i < img.points.size(); ++i) raster.set(i, img.points[i]);
  write_xyz_raster(raster, (root / "rasters" / (img.image_id + ".xyzr")).string());

  RleMask mask;
  mask.width = width;
  mask.height = height;
  mask.runs.emplace_back(0u, static_cast<uint32_t>(img.points.size()));
  write_rle_mask(mask, (root / "masks" / (img.image_id + ".rlem")).string());
}

Box2d block_box(std::size_t n_points, uint32_t width) {
  const double cols = std::min<std::size_t>(n_points, width);
  const double rows = (n_points + width - 1) / width;
  return {0.0, 0.0, std::max(1.0, cols), std::max(1.0, rows)};
}

// Source tokens for ground truth; furniture cycles through its four
// aggregating tokens.
const char* gt_token_for(const std::string& class_name, std::size_t ordinal) {
  if (class_name == "furniture") {
    static const char* tokens[] = {"table", "chair", "sofa", "bookcase"};
    return tokens[ordinal % 4];
  }
  if (class_name == "column") return ordinal % 2 == 0 ? "column" : "beam";
  return class_name.c_str();  // wall, floor, ceiling, door, window
}

bool has_gt_token(const std::string& class_name) {
  return class_name == "wall" || class_name == "floor" || class_name == "ceiling" ||
         class_name == "column" || class_name == "window" || class_name == "door" ||
         class_name == "furniture";
}

}  // namespace

SynthResult generate_synthetic_dataset(const SynthSpec& spec, const Taxonomy& taxonomy,
                                       const std::string& out_dir) {
  if (spec.areas.empty()) throw ValidationError("synthetic spec lists no areas");
  if (spec.views_per_fixture < 1) throw ValidationError("views_per_fixture must be >= 1");
  if (spec.points_per_view < 1) throw ValidationError("points_per_view must be >= 1");

  const fs::path root(out_dir);
  fs::create_directories(root / "rasters");
  fs::create_directories(root / "masks");
  fs::create_directories(root / "detections");

  SynthResult result;
  std::string sam3_jsonl;
  std::string cv_jsonl;

  for (const SynthAreaSpec& area : spec.areas) {
    SynthTruthArea truth;
    truth.area_id = area.area_id;

    // Place fixtures on a spacing grid inside the room.
    std::size_t total_fixtures = 0;
    for (const SynthFixtureSpec& f : area.fixtures) total_fixtures += f.count;
    const int grid_cols =
        std::max<int>(1, static_cast<int>(area.room_size.x() / spec.min_separation));

    std::vector<DetectionRecord> sam3_records;
    std::vector<DetectionRecord> cv_records;
    GroundTruthCloud gt;
    gt.area_id = area.area_id;
    std::map<std::string, int32_t> gt_label_index;
    auto gt_label = [&](const std::string& token) {
      const auto it = gt_label_index.find(token);
      if (it != gt_label_index.end()) return it->second;
      const int32_t idx = static_cast<int32_t>(gt.labels.size());
      gt.labels.push_back(token);
      gt_label_index[token] = idx;
      return idx;
    };
    auto gt_add = [&](const PointSet& points, const std::string& token) {
      const int32_t label = gt_label(token);
      for (const Vec3& p : points) {
        gt.coords.push_back(static_cast<float>(p.x()));
        gt.coords.push_back(static_cast<float>(p.y()));
        gt.coords.push_back(static_cast<float>(p.z()));
        gt.segment.push_back(label);
      }
    };

    std::size_t fixture_index = 0;
    for (const SynthFixtureSpec& fspec : area.fixtures) {
      taxonomy.id_of(fspec.class_name);  // validates the token
      for (std::size_t k = 0; k < fspec.count; ++k, ++fixture_index) {
        const int col = static_cast<int>(fixture_index) % grid_cols;
        const int row = static_cast<int>(fixture_index) / grid_cols;
        const Vec3 center(0.5 * spec.min_separation + col * spec.min_separation,
                          0.5 * spec.min_separation + row * spec.min_separation, 1.2);

        const std::string fixture_tag =
            area.area_id + "/fixture/" + std::to_string(fixture_index);
        const PointSet base = fixture_patch(
            center, spec.fixture_size, spec.points_per_view,
            derive_seed(spec.seed, fixture_tag));

        truth.fixtures.push_back({fspec.class_name, center, spec.views_per_fixture});
        ++truth.planted_per_class[fspec.class_name];

        for (int v = 0; v < spec.views_per_fixture; ++v) {
          const double angle = 2.0 * M_PI * v / spec.views_per_fixture;
          Vec3 offset(spec.view_offset * std::cos(angle),
                      spec.view_offset * std::sin(angle), 0.0);
          std::mt19937_64 rng(
              derive_seed(spec.seed, fixture_tag + "/view/" + std::to_string(v)));
          if (spec.centroid_noise > 0.0) {
            std::normal_distribution<double> noise(0.0, spec.centroid_noise);
            offset += Vec3(noise(rng), noise(rng), noise(rng));
          }

          ImageOut img;
          char buf[32];
          std::snprintf(buf, sizeof(buf), "f%04zu_v%02d", fixture_index, v);
          img.image_id = area.area_id + "-" + buf;
          img.points.reserve(base.size());
          for (const Vec3& p : base) img.points.push_back(p + offset);

          std::uniform_real_distribution<double> conf(spec.min_confidence,
                                                      spec.max_confidence);
          DetectionRecord rec;
          rec.image_id = img.image_id;
          rec.area_id = area.area_id;
          rec.class_name = fspec.class_name;
          rec.box = block_box(img.points.size(), spec.raster_width);
          rec.mask_path = "masks/" + img.image_id + ".rlem";
          rec.confidence = conf(rng);
          rec.source = Source::Sam3;
          rec.verdict = VerifierVerdict::Unverified;
          img.record = rec;

          write_observation(root, img, spec.raster_width, spec.raster_height);
          ++result.rasters_written;
          sam3_records.push_back(rec);
          ++truth.raw_detections_per_class[fspec.class_name];

          // Stack B sees every second fixture from a laterally shifted
          // viewpoint with its own confidence regime.
          if (spec.emit_cv_stack && fixture_index % 2 == 0 &&
              v < std::max(1, spec.views_per_fixture / 2)) {
            ImageOut cv_img;
            cv_img.image_id = area.area_id + "-cv-" + buf;
            const Vec3 cv_shift(spec.cv_offset, 0.0, 0.0);
            cv_img.points.reserve(base.size());
            for (const Vec3& p : base) cv_img.points.push_back(p + offset + cv_shift);

            std::uniform_real_distribution<double> cv_conf(0.30, 0.75);
            DetectionRecord cv_rec;
            cv_rec.image_id = cv_img.image_id;
            cv_rec.area_id = area.area_id;
            cv_rec.class_name = fspec.class_name;
            cv_rec.box = block_box(cv_img.points.size(), spec.raster_width);
            cv_rec.mask_path = "masks/" + cv_img.image_id + ".rlem";
            cv_rec.confidence = cv_conf(rng);
            cv_rec.source = Source::Yoloe;
            cv_rec.verdict = VerifierVerdict::Accepted;
            cv_img.record = cv_rec;

            write_observation(root, cv_img, spec.raster_width, spec.raster_height);
            ++result.rasters_written;
            cv_records.push_back(cv_rec);
          }
        }

        if (has_gt_token(fspec.class_name)) {
          gt_add(base, gt_token_for(fspec.class_name, k));
        }
      }
    }

    // Structural surfaces: three views each over disjoint grid chunks, so
    // the registry's per-area collapse is exercised across images.
    if (area.structural_surfaces) {
      struct SurfaceSpec {
        const char* class_name;
        PointSet points;
      };
      const double step = 0.5;
      std::vector<SurfaceSpec> surfaces;
      surfaces.push_back({"floor", surface_grid(Vec3::Zero(), Vec3::UnitX(),
                                                Vec3::UnitY(), area.room_size.x(),
                                                area.room_size.y(), step)});
      surfaces.push_back({"ceiling",
                          surface_grid(Vec3(0, 0, area.room_size.z()), Vec3::UnitX(),
                                       Vec3::UnitY(), area.room_size.x(),
                                       area.room_size.y(), step)});
      surfaces.push_back({"wall", surface_grid(Vec3::Zero(), Vec3::UnitX(),
                                               Vec3::UnitZ(), area.room_size.x(),
                                               area.room_size.z(), step)});
      for (const SurfaceSpec& surface : surfaces) {
        const int n_views = 3;
        const std::size_t chunk = (surface.points.size() + n_views - 1) / n_views;
        const std::size_t pixels =
            static_cast<std::size_t>(spec.raster_width) * spec.raster_height;
        for (int v = 0; v < n_views; ++v) {
          const std::size_t begin = v * chunk;
          if (begin >= surface.points.size()) break;
          const std::size_t end = std::min(begin + chunk, surface.points.size());

          ImageOut img;
          img.image_id =
              area.area_id + "-" + surface.class_name + "-v" + std::to_string(v);
          img.points.assign(surface.points.begin() + begin, surface.points.begin() + end);
          if (img.points.size() > pixels) img.points.resize(pixels);

          std::mt19937_64 rng(derive_seed(
              spec.seed, area.area_id + "/" + surface.class_name + "/" + std::to_string(v)));
          std::uniform_real_distribution<double> conf(0.85, 0.99);
          DetectionRecord rec;
          rec.image_id = img.image_id;
          rec.area_id = area.area_id;
          rec.class_name = surface.class_name;
          rec.box = block_box(img.points.size(), spec.raster_width);
          rec.mask_path = "masks/" + img.image_id + ".rlem";
          rec.confidence = conf(rng);
          rec.source = Source::Sam3;
          rec.verdict = VerifierVerdict::Unverified;
          img.record = rec;

          write_observation(root, img, spec.raster_width, spec.raster_height);
          ++result.rasters_written;
          sam3_records.push_back(rec);
          ++truth.raw_detections_per_class[surface.class_name];
        }
        gt_add(surface.points, surface.class_name);
      }
      // Boundary clutter: excluded source labels must leave accuracy
      // denominators untouched.
      std::mt19937_64 rng(derive_seed(spec.seed, area.area_id + "/clutter"));
      std::uniform_real_distribution<double> ux(0.0, area.room_size.x());
      std::uniform_real_distribution<double> uy(0.0, area.room_size.y());
      PointSet clutter;
      for (int i = 0; i < 40; ++i) clutter.emplace_back(ux(rng), uy(rng), 0.4);
      gt_add(clutter, "clutter");
    }

    // Low-confidence false positives, some verifier-rejected.
    if (spec.false_positives > 0) {
      std::mt19937_64 rng(derive_seed(spec.seed, area.area_id + "/fp"));
      std::uniform_real_distribution<double> ux(0.5, area.room_size.x() - 0.5);
      std::uniform_real_distribution<double> uy(0.5, area.room_size.y() - 0.5);
      std::uniform_real_distribution<double> conf(0.31, 0.55);
      const std::vector<std::string> fp_classes = {"fire_extinguisher", "exit_sign",
                                                   "aed", "door"};
      for (std::size_t i = 0; i < spec.false_positives; ++i) {
        const std::string cls = fp_classes[i % fp_classes.size()];
        const Vec3 center(ux(rng), uy(rng), 1.0);
        ImageOut img;
        img.image_id = area.area_id + "-fp" + std::to_string(i);
        img.points = fixture_patch(center, spec.fixture_size, spec.points_per_view,
                                   derive_seed(spec.seed, img.image_id));
        DetectionRecord rec;
        rec.image_id = img.image_id;
        rec.area_id = area.area_id;
        rec.class_name = cls;
        rec.box = block_box(img.points.size(), spec.raster_width);
        rec.mask_path = "masks/" + img.image_id + ".rlem";
        rec.confidence = conf(rng);
        rec.source = Source::Sam3;
        rec.verdict = i % 5 == 4 ? VerifierVerdict::Rejected : VerifierVerdict::Unverified;
        img.record = rec;

        write_observation(root, img, spec.raster_width, spec.raster_height);
        ++result.rasters_written;
        sam3_records.push_back(rec);
        ++truth.raw_detections_per_class[cls];
      }
    }

    sam3_jsonl += serialize_detections(sam3_records);
    cv_jsonl += serialize_detections(cv_records);
    result.detections_written += sam3_records.size() + cv_records.size();

    if (!gt.segment.empty()) {
      write_ground_truth_cloud(gt, (root / "gt" / area.area_id).string());
    }
    result.areas.push_back(std::move(truth));
  }

  {
    std::ofstream out(root / "detections" / "sam3.jsonl", std::ios::binary);
    if (!out) throw IoError("cannot write sam3.jsonl");
    out << sam3_jsonl;
  }
  if (spec.emit_cv_stack) {
    std::ofstream out(root / "detections" / "cv.jsonl", std::ios::binary);
    if (!out) throw IoError("cannot write cv.jsonl");
    out << cv_jsonl;
  }

  ordered_json truth_json;
  truth_json["seed"] = spec.seed;
  ordered_json areas_json = ordered_json::array();
  for (const SynthTruthArea& area : result.areas) {
    ordered_json aj;
    aj["area_id"] = area.area_id;
    ordered_json fixtures = ordered_json::array();
    for (const SynthTruthFixture& f : area.fixtures) {
      fixtures.push_back({{"class", f.class_name},
                          {"position", {f.position.x(), f.position.y(), f.position.z()}},
                          {"views", f.views}});
    }
    aj["fixtures"] = fixtures;
    ordered_json planted = ordered_json::object();
    for (const auto& [cls, n] : area.planted_per_class) planted[cls] = n;
    aj["planted_per_class"] = planted;
    ordered_json raw = ordered_json::object();
    for (const auto& [cls, n] : area.raw_detections_per_class) raw[cls] = n;
    aj["raw_detections_per_class"] = raw;
    areas_json.push_back(aj);
  }
  truth_json["areas"] = areas_json;
  std::ofstream out(root / "truth.json");
  if (!out) throw IoError("cannot write truth.json");
  out << truth_json.dump(2) << "\n";

  return result;
}

}  // namespace insight
