#pragma once

#include <memory>
#include <string>
#include <vector>

#include "spartun/dataset.hpp"
#include "spartun/situated.hpp"
#include "spartun/task_kind.hpp"

namespace spartun {

enum class PromptStyle { Spa, Cord };

inline const char* to_string(PromptStyle s) {
  return s == PromptStyle::Spa ? "spa" : "cord";
}
PromptStyle style_from_string(const std::string& s);

struct PromptBundle {
  TaskKind task = TaskKind::AttrRel;
  PromptStyle style = PromptStyle::Spa;
  std::string system_text;
  std::string user_text;
  std::string scene_id;
  std::string situation_digest;
};

// Instruction texts live in versioned data files so prompt drift is diffable;
// the code only does substitution.
class PromptLibrary {
 public:
  static PromptLibrary load(const std::string& prompts_dir = default_dir());
  static const std::string& default_dir();

  const std::string& instruction(TaskKind task) const;
  const std::string& spa_preamble() const { return spa_preamble_; }
  const std::string& cord_preamble() const { return cord_preamble_; }
  const std::string& system_text() const { return system_text_; }

 private:
  std::string instructions_[4];
  std::string spa_preamble_;
  std::string cord_preamble_;
  std::string system_text_;
};

PromptBundle render_prompt(TaskKind task, const Scene& scene,
                           const SituatedSceneGraph& graph, PromptStyle style,
                           const PromptLibrary& prompts);

struct ClientConfig {
  std::string endpoint;  // e.g. http://localhost:8080/v1/chat/completions
  std::string model = "gpt-4o";
  std::string api_key_env = "SPARTUN_API_KEY";
  int max_retries = 3;
  int timeout_seconds = 60;
  int max_in_flight = 4;
  double temperature = 1.0;
  int initial_backoff_ms = 200;
  std::string audit_log_path;  // JSONL; empty disables auditing
};

// Chat-completion client with bounded concurrency and exponential backoff
// on transient failures (timeouts, 429, 5xx).
class CompletionClient {
 public:
  explicit CompletionClient(ClientConfig config);
  ~CompletionClient();
  CompletionClient(const CompletionClient&) = delete;
  CompletionClient& operator=(const CompletionClient&) = delete;

  std::string complete(const PromptBundle& bundle);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct QAPair {
  std::string question;
  std::vector<std::string> target_ids;
  std::string answer;
};

struct ParseResult {
  std::vector<QAPair> pairs;
  std::vector<std::string> rejected;  // unparseable fragments, never dropped
};

// Splits a response on Q:/T:/A: markers. T: is optional (the Affordance and
// Planning exemplars omit it). Total function; failures surface as rejects.
ParseResult parse_qa(const std::string& response, TaskKind task,
                     const Scene& scene);

std::string serialize_qa(const std::vector<QAPair>& pairs);

// Deterministic template generator whose answers are computed from the
// graph. Stands in for the LLM so the pipeline is testable offline.
std::vector<DatasetExample> offline_generate(TaskKind task, const Scene& scene,
                                             const SituatedSceneGraph& graph,
                                             Rng& rng);

}  // namespace spartun
