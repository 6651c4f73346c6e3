#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"
#include "spartun/capi.h"
#include "spartun/scene.hpp"

namespace fs = std::filesystem;

namespace {

// Takes ownership of a C string result.
std::string take(char* s) {
  REQUIRE(s != nullptr);
  std::string out(s);
  sp_string_free(s);
  return out;
}

struct SceneHandle {
  sp_scene* scene = nullptr;
  ~SceneHandle() { sp_scene_free(scene); }
};

std::string living_room_json() {
  return spartun::serialize_scene(fixtures::living_room());
}

}  // namespace

TEST_CASE("scene load, serialize and free through the C surface") {
  SceneHandle h;
  REQUIRE(sp_scene_load_json(living_room_json().c_str(), &h.scene) == SP_OK);

  char* out = nullptr;
  REQUIRE(sp_scene_serialize(h.scene, &out) == SP_OK);
  const std::string text = take(out);
  CHECK(text == living_room_json());

  // Round trip through a file.
  const auto path = fs::temp_directory_path() / "capi_scene.json";
  std::ofstream(path) << text;
  SceneHandle h2;
  REQUIRE(sp_scene_load_file(path.string().c_str(), &h2.scene) == SP_OK);
  char* out2 = nullptr;
  REQUIRE(sp_scene_serialize(h2.scene, &out2) == SP_OK);
  CHECK(take(out2) == text);
  fs::remove(path);
}

TEST_CASE("null arguments are rejected, not dereferenced") {
  CHECK(sp_scene_load_json(nullptr, nullptr) == SP_ERR_ARGUMENT);
  sp_scene* scene = nullptr;
  CHECK(sp_scene_load_json(nullptr, &scene) == SP_ERR_ARGUMENT);
  CHECK(sp_scene_serialize(nullptr, nullptr) == SP_ERR_ARGUMENT);
  CHECK(sp_sample_situation(nullptr, 1, nullptr) == SP_ERR_ARGUMENT);
  CHECK(sp_align_check(1, nullptr) == SP_ERR_ARGUMENT);
  CHECK(std::strlen(sp_last_error()) > 0);
  sp_scene_free(nullptr);  // must be a safe no-op
}

TEST_CASE("error statuses carry a readable message") {
  sp_scene* scene = nullptr;
  CHECK(sp_scene_load_file("/nonexistent/scene.json", &scene) == SP_ERR_IO);
  CHECK(std::string(sp_last_error()).find("scene") != std::string::npos);

  CHECK(sp_scene_load_json("{broken", &scene) == SP_ERR_PARSE);
  CHECK(sp_scene_load_json(R"({"id":"x","objects":[]})", &scene) !=
        SP_OK);

  char* out = nullptr;
  CHECK(sp_generate("{not a manifest", &out) == SP_ERR_CONFIG);
  CHECK(out == nullptr);
}

TEST_CASE("situation and graph exports are deterministic per seed") {
  SceneHandle h;
  REQUIRE(sp_scene_load_json(living_room_json().c_str(), &h.scene) == SP_OK);

  char* a = nullptr;
  char* b = nullptr;
  REQUIRE(sp_sample_situation(h.scene, 42, &a) == SP_OK);
  REQUIRE(sp_sample_situation(h.scene, 42, &b) == SP_OK);
  const std::string sit_a = take(a);
  CHECK(sit_a == take(b));
  const auto js = nlohmann::json::parse(sit_a);
  CHECK(js.contains("pivot_id"));
  CHECK(js.contains("quaternion"));

  char* g = nullptr;
  REQUIRE(sp_graph_json(h.scene, 42, &g) == SP_OK);
  const auto jg = nlohmann::json::parse(take(g));
  CHECK(jg.contains("Front"));
  CHECK(jg.contains("Left"));
  CHECK(jg.contains("Right"));
  CHECK(jg.contains("Backwards"));
}

TEST_CASE("render through the C surface") {
  SceneHandle h;
  REQUIRE(sp_scene_load_json(living_room_json().c_str(), &h.scene) == SP_OK);
  char* svg = nullptr;
  REQUIRE(sp_render_scene(h.scene, 7, 1, &svg) == SP_OK);
  const std::string with = take(svg);
  CHECK(with.rfind("<svg", 0) == 0);
  CHECK(with.find("class=\"arrow\"") != std::string::npos);

  REQUIRE(sp_render_scene(h.scene, 7, 0, &svg) == SP_OK);
  CHECK(take(svg).find("arrow") == std::string::npos);
}

TEST_CASE("3rscan ingestion through the C surface") {
  const char* semseg = R"({"segGroups":[
    {"label":"chair","objectId":2,
     "obb":{"centroid":[0,0,0.5],"axesLengths":[0.6,0.6,1.0],
            "normalizedAxes":[1,0,0,0,1,0,0,0,1]}},
    {"label":"table","objectId":5,
     "obb":{"centroid":[2,0,0.4],"axesLengths":[1.0,0.8,0.8]}}]})";
  char* out = nullptr;
  REQUIRE(sp_ingest_3rscan(semseg, "scan_9", &out) == SP_OK);
  const auto j = nlohmann::json::parse(take(out));
  CHECK(j["id"] == "scan_9");
  CHECK(j["objects"][0]["id"] == "chair_2");

  CHECK(sp_ingest_3rscan("{}", "scan_9", &out) == SP_ERR_PARSE);
}

TEST_CASE("generate and validate through the C surface") {
  const auto scenes = fs::temp_directory_path() / "capi_scenes";
  fs::remove_all(scenes);
  fs::create_directories(scenes);
  spartun::Rng rng(314);
  for (int i = 0; i < 4; ++i) {
    const std::string id = "scene_c" + std::to_string(i);
    std::ofstream(scenes / (id + ".json"))
        << spartun::serialize_scene(fixtures::random_scene(rng, id));
  }
  const auto out_dir = fs::temp_directory_path() / "capi_out";
  fs::remove_all(out_dir);

  nlohmann::json manifest;
  manifest["seed"] = 12;
  manifest["scene_dir"] = scenes.string();
  manifest["output_dir"] = out_dir.string();
  manifest["situations_per_scene"] = {{"captioning", 1},
                                      {"attr_rel", 2},
                                      {"affordance", 2},
                                      {"planning", 1}};
  char* report = nullptr;
  REQUIRE(sp_generate(manifest.dump().c_str(), &report) == SP_OK);
  const auto jr = nlohmann::json::parse(take(report));
  CHECK(jr["train_examples"].get<int>() + jr["test_examples"].get<int>() > 0);
  CHECK(fs::exists(out_dir / "train.jsonl"));

  char* vr = nullptr;
  REQUIRE(sp_validate((out_dir / "train.jsonl").string().c_str(),
                      scenes.string().c_str(), &vr) == SP_OK);
  const auto jv = nlohmann::json::parse(take(vr));
  CHECK(jv["failed_examples"] == 0);

  // Split and stats over the emitted train file.
  const auto tr = fs::temp_directory_path() / "capi_tr.jsonl";
  const auto te = fs::temp_directory_path() / "capi_te.jsonl";
  REQUIRE(sp_split_file((out_dir / "train.jsonl").string().c_str(),
                        tr.string().c_str(), te.string().c_str(), 1) == SP_OK);
  CHECK(fs::exists(tr));
  char* st = nullptr;
  REQUIRE(sp_stats_file(tr.string().c_str(), &st) == SP_OK);
  CHECK(nlohmann::json::parse(take(st)).contains("per_task"));
}

TEST_CASE("evaluation through the C surface") {
  const auto path = fs::temp_directory_path() / "capi_preds.jsonl";
  std::ofstream(path)
      << R"({"key":"1","question":"Which direction is the door?",)"
      << R"("prediction":"on your left","reference":"on your left"})"
      << "\n";
  char* out = nullptr;
  REQUIRE(sp_eval_file(path.string().c_str(), &out) == SP_OK);
  const auto j = nlohmann::json::parse(take(out));
  CHECK(j["exact_match"] == doctest::Approx(1.0));
  fs::remove(path);

  CHECK(sp_eval_file("/nonexistent/p.jsonl", &out) == SP_ERR_IO);
}

TEST_CASE("gradient check through the C surface") {
  double err = -1.0;
  REQUIRE(sp_align_check(1, &err) == SP_OK);
  CHECK(err >= 0.0);
  CHECK(err < 1e-5);
  double err2 = -1.0;
  REQUIRE(sp_align_check(1, &err2) == SP_OK);
  CHECK(err == err2);
}
