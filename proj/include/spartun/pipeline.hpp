#pragma once

#include <map>
#include <string>
#include <vector>

#include "spartun/dataset.hpp"
#include "spartun/taskgen.hpp"

namespace spartun {

enum class RunMode { Offline, Online };

struct RunManifest {
  uint64_t seed = 0;
  std::string scene_dir;
  std::string output_dir;
  std::vector<TaskKind> tasks;                // empty means all four
  std::map<TaskKind, int> situations_per_scene;  // defaults per task below
  PromptStyle style = PromptStyle::Spa;
  RunMode mode = RunMode::Offline;
  int workers = 1;
  SplitSpec split_spec = SplitSpec::defaults();
  ClientConfig client;  // online mode only

  static std::map<TaskKind, int> default_situations();
  static RunManifest from_json(const std::string& json_text);
  void validate() const;  // throws ConfigError
};

struct GenerateResult {
  size_t train_examples = 0;
  size_t test_examples = 0;
  size_t dropped_fidelity = 0;
  size_t warnings = 0;
  std::string train_path;
  std::string test_path;
  std::string stats_path;
};

// Full batch run: sample situations, build graphs, generate QA (offline
// templates or the completion endpoint), fidelity-check, dedup, split and
// emit. Progress is checkpointed to <output_dir>/ledger.jsonl; completed
// (scene, task, situation) units are skipped on resume. Output bytes do not
// depend on worker count or resume boundaries.
GenerateResult run_generate(const RunManifest& manifest);

struct ValidationSummary {
  size_t examples = 0;
  size_t failed_examples = 0;
  size_t violations = 0;
  std::vector<std::string> details;
};

// Re-derives every example's situated graph from its stored situation and
// replays the fidelity rules against it.
ValidationSummary validate_dataset(const std::string& dataset_path,
                                   const std::string& scene_dir);

// Scene files (*.json) in deterministic order.
std::vector<std::string> list_scene_files(const std::string& scene_dir);

}  // namespace spartun
