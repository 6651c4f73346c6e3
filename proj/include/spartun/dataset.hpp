#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spartun/situated.hpp"
#include "spartun/task_kind.hpp"

namespace spartun {

struct FidelityViolation {
  enum class Kind {
    UnknownObject,
    DirectionMismatch,
    CountMismatch,
    DistanceComparatorMismatch,
  };
  Kind kind;
  std::string detail;
};

const char* to_string(FidelityViolation::Kind kind);

struct FidelityReport {
  bool passed = true;
  std::vector<FidelityViolation> violations;
};

struct DatasetExample {
  std::string scene_id;
  Situation situation;
  TaskKind task = TaskKind::AttrRel;
  std::string question;  // empty for Captioning
  std::string answer;
  std::vector<std::string> target_ids;
  std::string provenance = "offline-template";
  std::optional<FidelityReport> fidelity;
};

// Rule-based audit of an example against the graph it was generated from.
// Sound, not complete: unverifiable free-text claims produce no violation.
FidelityReport fidelity_check(const DatasetExample& example,
                              const SituatedSceneGraph& graph);

// Removes exact duplicates on (scene_id, situation digest, question, answer),
// keeping the first occurrence.
std::vector<DatasetExample> dedup(std::vector<DatasetExample> examples);

struct SplitSpec {
  std::map<TaskKind, double> test_fraction;
  uint64_t seed = 0;

  // Train/test ratios matching the published per-task counts.
  static SplitSpec defaults();
};

// Scene-stratified split: all examples from one scene land on the same side.
std::pair<std::vector<DatasetExample>, std::vector<DatasetExample>> split(
    const std::vector<DatasetExample>& examples, const SplitSpec& spec);

std::string example_to_json(const DatasetExample& example);
DatasetExample example_from_json(const std::string& line);

void emit_jsonl(const std::vector<DatasetExample>& examples, std::ostream& out);
std::vector<DatasetExample> load_jsonl(const std::string& path);

// Per-task counts, per-scene situation counts, answer-length histogram and
// direction-word distribution, as deterministic JSON text.
std::string stats(const std::vector<DatasetExample>& examples);

}  // namespace spartun
