#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "insight/synth.hpp"
#include "insight/taxonomy.hpp"
#include "support/tmpdir.hpp"

using namespace insight;
namespace fs = std::filesystem;

namespace {

const Taxonomy& taxonomy() {
  static const Taxonomy t = Taxonomy::defaults();
  return t;
}

SynthSpec small_spec(uint64_t seed) {
  SynthSpec spec;
  spec.seed = seed;
  SynthAreaSpec area;
  area.area_id = "t";
  area.fixtures = {{"door", 2}, {"aed", 1}};
  area.structural_surfaces = true;
  spec.areas.push_back(area);
  spec.views_per_fixture = 3;
  spec.false_positives = 2;
  return spec;
}

std::map<std::string, std::string> file_contents(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    out[fs::relative(entry.path(), root).string()] = ss.str();
  }
  return out;
}

}  // namespace

TEST_CASE("identical seeds reproduce identical bytes") {
  testutil::TmpDir tmp1("synth1"), tmp2("synth2");
  generate_synthetic_dataset(small_spec(42), taxonomy(), tmp1.str());
  generate_synthetic_dataset(small_spec(42), taxonomy(), tmp2.str());

  const auto files1 = file_contents(tmp1.path());
  const auto files2 = file_contents(tmp2.path());
  REQUIRE(files1.size() == files2.size());
  REQUIRE(!files1.empty());
  for (const auto& [name, bytes] : files1) {
    REQUIRE(files2.count(name));
    CHECK(files2.at(name) == bytes);
  }
}

TEST_CASE("different seeds diverge") {
  testutil::TmpDir tmp1("synth3"), tmp2("synth4");
  generate_synthetic_dataset(small_spec(1), taxonomy(), tmp1.str());
  generate_synthetic_dataset(small_spec(2), taxonomy(), tmp2.str());
  const auto files1 = file_contents(tmp1.path());
  const auto files2 = file_contents(tmp2.path());
  bool any_difference = false;
  for (const auto& [name, bytes] : files1) {
    if (!files2.count(name) || files2.at(name) != bytes) any_difference = true;
  }
  CHECK(any_difference);
}

TEST_CASE("generated dataset is structurally complete") {
  testutil::TmpDir tmp("synth5");
  const SynthResult result =
      generate_synthetic_dataset(small_spec(7), taxonomy(), tmp.str());

  // 3 fixtures x 3 views + cv (fixtures 0 and 2, 1 view each) +
  // 3 surfaces x 3 views + 2 false positives.
  CHECK(result.rasters_written == 9 + 2 + 9 + 2);
  CHECK(result.detections_written == 22);
  REQUIRE(result.areas.size() == 1);
  CHECK(result.areas[0].fixtures.size() == 3);
  CHECK(result.areas[0].planted_per_class.at("door") == 2);
  CHECK(result.areas[0].raw_detections_per_class.at("door") == 6);

  CHECK(fs::exists(tmp.path() / "detections" / "sam3.jsonl"));
  CHECK(fs::exists(tmp.path() / "detections" / "cv.jsonl"));
  CHECK(fs::exists(tmp.path() / "gt" / "t" / "coord.f32le"));
  CHECK(fs::exists(tmp.path() / "truth.json"));

  std::size_t rasters = 0;
  for (const auto& entry : fs::directory_iterator(tmp.path() / "rasters")) {
    (void)entry;
    ++rasters;
  }
  CHECK(rasters == result.rasters_written);
}

TEST_CASE("invalid specs are rejected") {
  testutil::TmpDir tmp("synth6");
  SynthSpec empty;
  CHECK_THROWS(generate_synthetic_dataset(empty, taxonomy(), tmp.str()));

  SynthSpec bad = small_spec(1);
  bad.areas[0].fixtures[0].class_name = "bogus";
  CHECK_THROWS(generate_synthetic_dataset(bad, taxonomy(), tmp.str()));
}
