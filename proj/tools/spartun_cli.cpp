// Command-line front end over the shared library's C surface.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "spartun/capi.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitCheckFailed = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
}

// Owns a string returned through the C API.
struct CString {
  char* ptr = nullptr;
  ~CString() { sp_string_free(ptr); }
  std::string str() const { return ptr ? ptr : ""; }
};

int check(sp_status status) {
  if (status == SP_OK) return kExitOk;
  std::cerr << "error: " << sp_last_error() << "\n";
  return kExitError;
}

struct SceneHandle {
  sp_scene* ptr = nullptr;
  ~SceneHandle() { sp_scene_free(ptr); }
};

// Pulls "field": <number> out of a report without a JSON dependency; the
// reports are library-generated, so the textual shape is stable.
long long report_count(const std::string& report, const std::string& field) {
  const std::string needle = "\"" + field + "\": ";
  const size_t pos = report.find(needle);
  if (pos == std::string::npos) return -1;
  return std::atoll(report.c_str() + pos + needle.size());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Situated 3D scene dataset construction toolkit"};
  app.require_subcommand(1);

  // ingest
  auto* ingest = app.add_subcommand(
      "ingest", "Convert a 3RScan semantic-segmentation dump to a scene file");
  std::string ingest_input, ingest_scene_id, ingest_output;
  ingest->add_option("input", ingest_input, "semseg JSON file")->required();
  ingest->add_option("--scene-id", ingest_scene_id, "id for the new scene")
      ->required();
  ingest->add_option("-o,--output", ingest_output, "output path (default stdout)");

  // generate
  auto* generate =
      app.add_subcommand("generate", "Run the batch dataset pipeline");
  std::string manifest_path;
  generate->add_option("manifest", manifest_path, "run manifest JSON file")
      ->required();

  // validate
  auto* validate = app.add_subcommand(
      "validate", "Replay fidelity checks for a dataset against its scenes");
  std::string val_dataset, val_scene_dir, val_output;
  bool val_json = false;
  validate->add_option("dataset", val_dataset, "dataset JSONL")->required();
  validate->add_option("--scenes", val_scene_dir, "scene directory")->required();
  validate->add_option("-o,--output", val_output, "report path (default stdout)");
  validate->add_flag("--json", val_json, "emit the full JSON report");

  // split
  auto* split = app.add_subcommand("split", "Scene-stratified train/test split");
  std::string split_dataset, split_train, split_test;
  uint64_t split_seed = 0;
  split->add_option("dataset", split_dataset, "dataset JSONL")->required();
  split->add_option("--train", split_train, "train output path")->required();
  split->add_option("--test", split_test, "test output path")->required();
  split->add_option("--seed", split_seed, "shuffle seed");

  // stats
  auto* stats = app.add_subcommand("stats", "Dataset statistics");
  std::string stats_dataset, stats_output;
  stats->add_option("dataset", stats_dataset, "dataset JSONL")->required();
  stats->add_option("-o,--output", stats_output, "output path (default stdout)");

  // render
  auto* render = app.add_subcommand("render", "Bird-eye SVG of a scene");
  std::string render_scene, render_output;
  uint64_t render_seed = 0;
  bool render_scene_only = false;
  render->add_option("scene", render_scene, "scene JSON file")->required();
  render->add_option("--seed", render_seed, "situation seed");
  render->add_flag("--scene-only", render_scene_only,
                   "skip the situation overlay");
  render->add_option("-o,--output", render_output, "output path (default stdout)");

  // eval
  auto* eval = app.add_subcommand("eval", "Score a prediction file");
  std::string eval_predictions, eval_output;
  eval->add_option("predictions", eval_predictions, "predictions JSONL")
      ->required();
  eval->add_option("-o,--output", eval_output, "report path (default stdout)");

  // align-check
  auto* align = app.add_subcommand(
      "align-check", "Verify attention gradients against finite differences");
  uint64_t align_seed = 1;
  double align_tolerance = 1e-5;
  align->add_option("--seed", align_seed, "instance seed");
  align->add_option("--tolerance", align_tolerance, "max relative error allowed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) {
      CString out;
      if (int rc = check(sp_ingest_3rscan(read_file(ingest_input).c_str(),
                                          ingest_scene_id.c_str(), &out.ptr))) {
        return rc;
      }
      write_output(out.str(), ingest_output);
      return kExitOk;
    }

    if (*generate) {
      CString report;
      if (int rc = check(sp_generate(read_file(manifest_path).c_str(),
                                     &report.ptr))) {
        return rc;
      }
      std::cout << report.str();
      return kExitOk;
    }

    if (*validate) {
      CString report;
      if (int rc = check(sp_validate(val_dataset.c_str(), val_scene_dir.c_str(),
                                     &report.ptr))) {
        return rc;
      }
      const long long examples = report_count(report.str(), "examples");
      const long long violations = report_count(report.str(), "violations");
      if (val_json) {
        write_output(report.str(), val_output);
      } else {
        std::ostringstream line;
        line << "checked " << examples << " examples, " << violations
             << " violations\n";
        write_output(line.str(), val_output);
      }
      return violations > 0 ? kExitCheckFailed : kExitOk;
    }

    if (*split) {
      if (int rc = check(sp_split_file(split_dataset.c_str(),
                                       split_train.c_str(), split_test.c_str(),
                                       split_seed))) {
        return rc;
      }
      return kExitOk;
    }

    if (*stats) {
      CString out;
      if (int rc = check(sp_stats_file(stats_dataset.c_str(), &out.ptr))) {
        return rc;
      }
      write_output(out.str(), stats_output);
      return kExitOk;
    }

    if (*render) {
      SceneHandle scene;
      if (int rc = check(sp_scene_load_file(render_scene.c_str(), &scene.ptr))) {
        return rc;
      }
      CString svg;
      if (int rc = check(sp_render_scene(scene.ptr, render_seed,
                                         render_scene_only ? 0 : 1, &svg.ptr))) {
        return rc;
      }
      write_output(svg.str(), render_output);
      return kExitOk;
    }

    if (*eval) {
      CString report;
      if (int rc = check(sp_eval_file(eval_predictions.c_str(), &report.ptr))) {
        return rc;
      }
      write_output(report.str(), eval_output);
      return kExitOk;
    }

    if (*align) {
      double max_rel_err = 0.0;
      if (int rc = check(sp_align_check(align_seed, &max_rel_err))) return rc;
      std::printf("max relative error: %.3e (tolerance %.3e)\n", max_rel_err,
                  align_tolerance);
      return max_rel_err < align_tolerance ? kExitOk : kExitCheckFailed;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
