#include "spartun/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "spartun/errors.hpp"

namespace fs = std::filesystem;

namespace spartun {

using nlohmann::json;
using nlohmann::ordered_json;

std::map<TaskKind, int> RunManifest::default_situations() {
  return {{TaskKind::Captioning, 5},
          {TaskKind::AttrRel, 10},
          {TaskKind::Affordance, 10},
          {TaskKind::Planning, 5}};
}

RunManifest RunManifest::from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("manifest is not valid JSON: ") + e.what());
  }
  RunManifest m;
  try {
    m.seed = j.value("seed", 0ULL);
    m.scene_dir = j.at("scene_dir").get<std::string>();
    m.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("tasks")) {
      for (const auto& t : j.at("tasks")) {
        m.tasks.push_back(task_from_string(t.get<std::string>()));
      }
    }
    m.situations_per_scene = default_situations();
    if (j.contains("situations_per_scene")) {
      for (const auto& [name, count] : j.at("situations_per_scene").items()) {
        m.situations_per_scene[task_from_string(name)] = count.get<int>();
      }
    }
    m.style = style_from_string(j.value("style", "spa"));
    const std::string mode = j.value("mode", "offline");
    if (mode == "offline") {
      m.mode = RunMode::Offline;
    } else if (mode == "online") {
      m.mode = RunMode::Online;
    } else {
      throw ConfigError("mode must be offline or online, got " + mode);
    }
    m.workers = j.value("workers", 1);
    if (j.contains("split")) {
      const auto& s = j.at("split");
      m.split_spec.seed = s.value("seed", 0ULL);
      if (s.contains("test_fraction")) {
        for (const auto& [name, frac] : s.at("test_fraction").items()) {
          m.split_spec.test_fraction[task_from_string(name)] =
              frac.get<double>();
        }
      }
    }
    if (j.contains("client")) {
      const auto& c = j.at("client");
      m.client.endpoint = c.value("endpoint", "");
      m.client.model = c.value("model", m.client.model);
      m.client.api_key_env = c.value("api_key_env", m.client.api_key_env);
      m.client.max_retries = c.value("max_retries", m.client.max_retries);
      m.client.timeout_seconds =
          c.value("timeout_seconds", m.client.timeout_seconds);
      m.client.max_in_flight = c.value("max_in_flight", m.client.max_in_flight);
      m.client.temperature = c.value("temperature", m.client.temperature);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad manifest field: ") + e.what());
  }
  m.validate();
  return m;
}

void RunManifest::validate() const {
  if (scene_dir.empty()) throw ConfigError("scene_dir is required");
  if (output_dir.empty()) throw ConfigError("output_dir is required");
  for (const auto& [task, count] : situations_per_scene) {
    if (count < 1) {
      throw ConfigError(std::string("situations per scene for ") +
                        to_string(task) + " must be >= 1");
    }
  }
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (mode == RunMode::Online && client.endpoint.empty()) {
    throw ConfigError("online mode requires client.endpoint");
  }
}

std::vector<std::string> list_scene_files(const std::string& scene_dir) {
  if (!fs::is_directory(scene_dir)) {
    throw IoError("scene directory not found: " + scene_dir);
  }
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(scene_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path().string());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

namespace {

struct WorkUnit {
  size_t scene_index;
  TaskKind task;
  int task_ordinal;
  int sit;
  std::string key;  // scene \x1f task \x1f sit
};

std::string unit_key(const std::string& scene_id, TaskKind task, int sit) {
  return scene_id + "\x1f" + to_string(task) + "\x1f" + std::to_string(sit);
}

// One ledger line per finished unit; examples are stored inline so resume
// never has to regenerate them.
void append_ledger(std::ofstream& out, std::mutex& mu,
                   const std::string& scene_id, TaskKind task, int sit,
                   const std::vector<DatasetExample>& examples,
                   size_t warnings) {
  ordered_json entry;
  entry["scene"] = scene_id;
  entry["task"] = to_string(task);
  entry["sit"] = sit;
  entry["warnings"] = warnings;
  ordered_json arr = ordered_json::array();
  for (const auto& e : examples) {
    arr.push_back(ordered_json::parse(example_to_json(e)));
  }
  entry["examples"] = std::move(arr);
  std::lock_guard<std::mutex> lock(mu);
  out << entry.dump() << "\n";
  out.flush();
}

struct LedgerEntry {
  std::vector<DatasetExample> examples;
  size_t warnings = 0;
};

std::map<std::string, LedgerEntry> load_ledger(const std::string& path) {
  std::map<std::string, LedgerEntry> done;
  std::ifstream in(path);
  if (!in) return done;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception&) {
      continue;  // torn tail line from an interrupted run
    }
    try {
      LedgerEntry entry;
      for (const auto& e : j.at("examples")) {
        entry.examples.push_back(example_from_json(e.dump()));
      }
      entry.warnings = j.value("warnings", 0ULL);
      done[unit_key(j.at("scene").get<std::string>(),
                    task_from_string(j.at("task").get<std::string>()),
                    j.at("sit").get<int>())] = std::move(entry);
    } catch (const std::exception&) {
      continue;
    }
  }
  return done;
}

std::vector<DatasetExample> generate_unit(const RunManifest& manifest,
                                          const Scene& scene, TaskKind task,
                                          int task_ordinal, int sit,
                                          const PromptLibrary* prompts,
                                          CompletionClient* client,
                                          size_t& warnings) {
  Rng rng = Rng::derive(manifest.seed, scene.id,
                        static_cast<uint64_t>(task_ordinal) * 10000 +
                            static_cast<uint64_t>(sit));
  Situation situation;
  try {
    situation = sample_situation(scene, rng);
  } catch (const Error&) {
    warnings += 1;  // no eligible pivot or degenerate geometry
    return {};
  }
  const SituatedSceneGraph graph = build_situated_graph(scene, situation);

  std::vector<DatasetExample> examples;
  if (manifest.mode == RunMode::Offline) {
    examples = offline_generate(task, scene, graph, rng);
  } else {
    const PromptBundle bundle =
        render_prompt(task, scene, graph, manifest.style, *prompts);
    std::string response;
    try {
      response = client->complete(bundle);
    } catch (const AuthError&) {
      throw;  // fatal, not a per-unit warning
    } catch (const Error&) {
      warnings += 1;
      return {};
    }
    const ParseResult parsed = parse_qa(response, task, scene);
    warnings += parsed.rejected.size();
    for (const auto& pair : parsed.pairs) {
      DatasetExample e;
      e.scene_id = scene.id;
      e.situation = situation;
      e.task = task;
      e.question = pair.question;
      e.answer = pair.answer;
      e.target_ids = pair.target_ids;
      e.provenance = manifest.client.model;
      examples.push_back(std::move(e));
    }
  }

  std::vector<DatasetExample> kept;
  for (auto& e : examples) {
    FidelityReport report = fidelity_check(e, graph);
    if (report.passed) {
      e.fidelity = std::move(report);
      kept.push_back(std::move(e));
    } else {
      warnings += 1;
    }
  }
  return kept;
}

}  // namespace

GenerateResult run_generate(const RunManifest& manifest) {
  manifest.validate();
  fs::create_directories(manifest.output_dir);

  std::vector<TaskKind> tasks = manifest.tasks;
  if (tasks.empty()) {
    tasks.assign(kAllTasks.begin(), kAllTasks.end());
  }

  const auto scene_files = list_scene_files(manifest.scene_dir);
  if (scene_files.empty()) {
    throw EmptyResultError("no scene files in " + manifest.scene_dir);
  }
  std::vector<Scene> scenes;
  scenes.reserve(scene_files.size());
  for (const auto& path : scene_files) scenes.push_back(load_scene_file(path));

  const std::string ledger_path = manifest.output_dir + "/ledger.jsonl";
  auto done = load_ledger(ledger_path);
  std::ofstream ledger(ledger_path, std::ios::app);
  if (!ledger) throw IoError("cannot open ledger: " + ledger_path);
  std::mutex ledger_mu;

  std::vector<WorkUnit> units;
  for (size_t s = 0; s < scenes.size(); ++s) {
    for (TaskKind task : kAllTasks) {
      if (std::find(tasks.begin(), tasks.end(), task) == tasks.end()) continue;
      const int ordinal = static_cast<int>(task);
      const int count = manifest.situations_per_scene.at(task);
      for (int sit = 0; sit < count; ++sit) {
        units.push_back(
            {s, task, ordinal, sit, unit_key(scenes[s].id, task, sit)});
      }
    }
  }

  std::unique_ptr<PromptLibrary> prompts;
  std::unique_ptr<CompletionClient> client;
  if (manifest.mode == RunMode::Online) {
    prompts = std::make_unique<PromptLibrary>(PromptLibrary::load());
    client = std::make_unique<CompletionClient>(manifest.client);
  }

  std::vector<std::vector<DatasetExample>> results(units.size());
  std::vector<size_t> unit_warnings(units.size(), 0);
  std::atomic<size_t> cursor{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto worker = [&] {
    for (;;) {
      const size_t i = cursor.fetch_add(1);
      if (i >= units.size()) return;
      {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (failure) return;
      }
      const WorkUnit& unit = units[i];
      auto it = done.find(unit.key);
      if (it != done.end()) {
        results[i] = it->second.examples;
        unit_warnings[i] = it->second.warnings;
        continue;
      }
      try {
        size_t warnings = 0;
        results[i] = generate_unit(manifest, scenes[unit.scene_index],
                                   unit.task, unit.task_ordinal, unit.sit,
                                   prompts.get(), client.get(), warnings);
        unit_warnings[i] = warnings;
        append_ledger(ledger, ledger_mu, scenes[unit.scene_index].id,
                      unit.task, unit.sit, results[i], warnings);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  const int width = std::max(1, std::min<int>(manifest.workers,
                                              static_cast<int>(units.size())));
  std::vector<std::thread> pool;
  for (int w = 0; w < width; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  // Assemble in canonical unit order so worker scheduling and resume
  // boundaries never show up in the output bytes.
  GenerateResult result;
  std::vector<DatasetExample> all;
  for (size_t i = 0; i < units.size(); ++i) {
    result.warnings += unit_warnings[i];
    for (auto& e : results[i]) all.push_back(std::move(e));
  }
  const size_t before = all.size();
  all = dedup(std::move(all));
  (void)before;

  auto [train, test] = split(all, manifest.split_spec);
  result.train_examples = train.size();
  result.test_examples = test.size();
  result.train_path = manifest.output_dir + "/train.jsonl";
  result.test_path = manifest.output_dir + "/test.jsonl";
  result.stats_path = manifest.output_dir + "/stats.json";

  {
    std::ofstream out(result.train_path, std::ios::binary);
    emit_jsonl(train, out);
  }
  {
    std::ofstream out(result.test_path, std::ios::binary);
    emit_jsonl(test, out);
  }
  {
    std::ofstream out(result.stats_path, std::ios::binary);
    out << stats(all);
  }
  return result;
}

ValidationSummary validate_dataset(const std::string& dataset_path,
                                   const std::string& scene_dir) {
  ValidationSummary summary;
  const auto examples = load_jsonl(dataset_path);
  summary.examples = examples.size();

  std::map<std::string, Scene> scenes;
  for (const auto& path : list_scene_files(scene_dir)) {
    Scene scene = load_scene_file(path);
    scenes[scene.id] = std::move(scene);
  }

  std::map<std::string, SituatedSceneGraph> graph_cache;
  for (size_t i = 0; i < examples.size(); ++i) {
    const auto& e = examples[i];
    auto sc = scenes.find(e.scene_id);
    if (sc == scenes.end()) {
      summary.failed_examples += 1;
      summary.violations += 1;
      summary.details.push_back("example " + std::to_string(i) +
                                ": unknown scene " + e.scene_id);
      continue;
    }
    const std::string cache_key = e.scene_id + "\x1f" + e.situation.digest();
    auto gi = graph_cache.find(cache_key);
    if (gi == graph_cache.end()) {
      gi = graph_cache
               .emplace(cache_key, build_situated_graph(sc->second, e.situation))
               .first;
    }
    const FidelityReport report = fidelity_check(e, gi->second);
    if (!report.passed) {
      summary.failed_examples += 1;
      summary.violations += report.violations.size();
      for (const auto& v : report.violations) {
        summary.details.push_back("example " + std::to_string(i) + " (" +
                                  e.scene_id + "): " +
                                  std::string(to_string(v.kind)) + ": " +
                                  v.detail);
      }
    }
  }
  return summary;
}

}  // namespace spartun
