#include "spartun/taskgen.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <regex>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#ifndef SPARTUN_DATA_DIR
#define SPARTUN_DATA_DIR "data"
#endif

namespace spartun {

using nlohmann::json;
using nlohmann::ordered_json;

PromptStyle style_from_string(const std::string& s) {
  if (s == "spa") return PromptStyle::Spa;
  if (s == "cord") return PromptStyle::Cord;
  throw ConfigError("unknown prompt style: " + s);
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open prompt file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) {
    text.pop_back();
  }
  return text;
}

std::string substitute(std::string text, const std::string& key,
                       const std::string& value) {
  const std::string token = "{" + key + "}";
  size_t pos = 0;
  while ((pos = text.find(token, pos)) != std::string::npos) {
    text.replace(pos, token.size(), value);
    pos += value.size();
  }
  return text;
}

std::string coord_text(const geom::Vec3& v) {
  ordered_json j = {round2(v.x), round2(v.y), round2(v.z)};
  return j.dump();
}

// "white sofa_1" when the pivot has a color attribute, else "sofa_1".
std::string pivot_phrase(const Object3D& pivot) {
  auto color = pivot.attributes.find("color");
  if (color != pivot.attributes.end()) return color->second + " " + pivot.id;
  return pivot.id;
}

const char* direction_phrase(geom::DirectionBin bin) {
  switch (bin) {
    case geom::DirectionBin::Front:
      return "in front of you";
    case geom::DirectionBin::Right:
      return "on your right";
    case geom::DirectionBin::Back:
      return "behind you";
    case geom::DirectionBin::Left:
      return "on your left";
  }
  return "?";
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

const std::string& PromptLibrary::default_dir() {
  static const std::string dir = std::string(SPARTUN_DATA_DIR) + "/prompts";
  return dir;
}

PromptLibrary PromptLibrary::load(const std::string& prompts_dir) {
  PromptLibrary lib;
  lib.instructions_[0] = read_file(prompts_dir + "/captioning.txt");
  lib.instructions_[1] = read_file(prompts_dir + "/attr_rel.txt");
  lib.instructions_[2] = read_file(prompts_dir + "/affordance.txt");
  lib.instructions_[3] = read_file(prompts_dir + "/planning.txt");
  lib.spa_preamble_ = read_file(prompts_dir + "/spa_preamble.txt");
  lib.cord_preamble_ = read_file(prompts_dir + "/cord_preamble.txt");
  lib.system_text_ = read_file(prompts_dir + "/system.txt");
  return lib;
}

const std::string& PromptLibrary::instruction(TaskKind task) const {
  return instructions_[static_cast<int>(task)];
}

PromptBundle render_prompt(TaskKind task, const Scene& scene,
                           const SituatedSceneGraph& graph, PromptStyle style,
                           const PromptLibrary& prompts) {
  const Object3D& pivot = scene.at(graph.situation.pivot_id);

  PromptBundle bundle;
  bundle.task = task;
  bundle.style = style;
  bundle.system_text = prompts.system_text();
  bundle.scene_id = graph.scene_id;
  bundle.situation_digest = graph.situation.digest();

  if (style == PromptStyle::Spa) {
    bundle.user_text = prompts.instruction(task) + "\n\n" +
                       substitute(prompts.spa_preamble(), "pivot",
                                  pivot_phrase(pivot)) +
                       "\n\n" + graph_to_json(graph);
  } else {
    std::string preamble = prompts.cord_preamble();
    preamble = substitute(preamble, "pivot", pivot_phrase(pivot));
    preamble = substitute(preamble, "stand", coord_text(graph.situation.stand));
    preamble = substitute(preamble, "pivot_center", coord_text(pivot.obb.center));

    ordered_json coords = ordered_json::object();
    for (const auto& o : scene.objects) {
      if (o.id == pivot.id) continue;
      ordered_json jo;
      jo["coordinate"] = ordered_json::parse(coord_text(o.obb.center));
      jo["affordances"] = o.affordances;
      jo["attributes"] = ordered_json::object();
      for (const auto& [k, v] : o.attributes) jo["attributes"][k] = v;
      jo["relations"] = o.relations;
      coords[o.id] = std::move(jo);
    }
    bundle.user_text =
        prompts.instruction(task) + "\n\n" + preamble + "\n\n" + coords.dump();
  }
  return bundle;
}

// ---------------------------------------------------------------------------
// Completion client

struct CompletionClient::Impl {
  ClientConfig cfg;
  std::string host;  // scheme://host:port
  std::string path;
  std::string api_key;

  std::mutex slots_mutex;
  std::condition_variable slots_cv;
  int slots_in_use = 0;

  std::mutex audit_mutex;

  void audit(const std::string& scene_id, int attempts,
             const std::string& status) {
    if (cfg.audit_log_path.empty()) return;
    std::lock_guard<std::mutex> lock(audit_mutex);
    std::ofstream out(cfg.audit_log_path, std::ios::app);
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    ordered_json j;
    j["ts"] = std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
    j["scene_id"] = scene_id;
    j["attempts"] = attempts;
    j["status"] = status;
    out << j.dump() << "\n";
  }
};

CompletionClient::CompletionClient(ClientConfig config)
    : impl_(std::make_unique<Impl>()) {
  if (config.max_retries < 0) throw ConfigError("max_retries must be >= 0");
  if (config.max_in_flight < 1) throw ConfigError("max_in_flight must be >= 1");
  impl_->cfg = std::move(config);

  const std::string& url = impl_->cfg.endpoint;
  const size_t scheme = url.find("://");
  if (scheme == std::string::npos) throw ConfigError("endpoint must be a URL: " + url);
  const size_t slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) {
    impl_->host = url;
    impl_->path = "/";
  } else {
    impl_->host = url.substr(0, slash);
    impl_->path = url.substr(slash);
  }
  if (const char* key = std::getenv(impl_->cfg.api_key_env.c_str())) {
    impl_->api_key = key;
  }
}

CompletionClient::~CompletionClient() = default;

std::string CompletionClient::complete(const PromptBundle& bundle) {
  // One slot covers the whole attempt loop; retries never multiply the
  // in-flight count.
  std::unique_lock<std::mutex> lock(impl_->slots_mutex);
  impl_->slots_cv.wait(lock, [&] {
    return impl_->slots_in_use < impl_->cfg.max_in_flight;
  });
  impl_->slots_in_use += 1;
  lock.unlock();
  struct Release {
    Impl* impl;
    ~Release() {
      std::lock_guard<std::mutex> g(impl->slots_mutex);
      impl->slots_in_use -= 1;
      impl->slots_cv.notify_one();
    }
  } release{impl_.get()};

  ordered_json body;
  body["model"] = impl_->cfg.model;
  body["messages"] = {{{"role", "system"}, {"content", bundle.system_text}},
                      {{"role", "user"}, {"content", bundle.user_text}}};
  body["temperature"] = impl_->cfg.temperature;
  const std::string payload = body.dump();

  httplib::Client client(impl_->host);
  client.set_connection_timeout(impl_->cfg.timeout_seconds, 0);
  client.set_read_timeout(impl_->cfg.timeout_seconds, 0);
  httplib::Headers headers;
  if (!impl_->api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + impl_->api_key);
  }

  int last_status = 0;
  for (int attempt = 0; attempt <= impl_->cfg.max_retries; ++attempt) {
    if (attempt > 0) {
      const int ms = impl_->cfg.initial_backoff_ms * (1 << (attempt - 1));
      std::this_thread::sleep_for(std::chrono::milliseconds(std::min(ms, 30000)));
    }
    auto res = client.Post(impl_->path, headers, payload, "application/json");
    if (!res) {
      last_status = 0;
      continue;  // transport failure, retryable
    }
    last_status = res->status;
    if (res->status == 401 || res->status == 403) {
      impl_->audit(bundle.scene_id, attempt + 1, "auth_error");
      throw AuthError("completion endpoint rejected credentials (" +
                      std::to_string(res->status) + ")");
    }
    if (res->status == 429 || res->status >= 500) continue;
    if (res->status != 200) {
      impl_->audit(bundle.scene_id, attempt + 1,
                   "http_" + std::to_string(res->status));
      throw TransportError("unexpected HTTP status " +
                           std::to_string(res->status));
    }
    try {
      json reply = json::parse(res->body);
      std::string text =
          reply.at("choices").at(0).at("message").at("content").get<std::string>();
      impl_->audit(bundle.scene_id, attempt + 1, "ok");
      return text;
    } catch (const json::exception& e) {
      impl_->audit(bundle.scene_id, attempt + 1, "malformed_response");
      throw MalformedResponseError(std::string("bad completion payload: ") +
                                   e.what());
    }
  }
  impl_->audit(bundle.scene_id, impl_->cfg.max_retries + 1,
               last_status == 429 ? "rate_limit_exhausted" : "transport_error");
  if (last_status == 429) {
    throw RateLimitExhaustedError("rate limited after " +
                                  std::to_string(impl_->cfg.max_retries + 1) +
                                  " attempts");
  }
  throw TransportError("endpoint unreachable after " +
                       std::to_string(impl_->cfg.max_retries + 1) + " attempts");
}

// ---------------------------------------------------------------------------
// Q/T/A parsing

namespace {

struct Marker {
  size_t pos;      // where the marker starts
  size_t content;  // where its content starts
  char kind;       // 'Q', 'T', 'A'
};

std::vector<Marker> find_markers(const std::string& text) {
  static const std::vector<std::pair<std::string, char>> forms = {
      {"Question:", 'Q'}, {"Answer:", 'A'}, {"Q:", 'Q'}, {"T:", 'T'}, {"A:", 'A'}};
  std::vector<Marker> out;
  for (const auto& [form, kind] : forms) {
    size_t pos = 0;
    while ((pos = text.find(form, pos)) != std::string::npos) {
      const bool boundary =
          pos == 0 || std::isspace(static_cast<unsigned char>(text[pos - 1])) ||
          text[pos - 1] == '.' || text[pos - 1] == ')';
      if (boundary) {
        bool overlapped = false;
        for (const auto& m : out) {
          if (pos >= m.pos && pos < m.content) overlapped = true;
        }
        if (!overlapped) out.push_back({pos, pos + form.size(), kind});
      }
      pos += form.size();
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Marker& a, const Marker& b) { return a.pos < b.pos; });
  return out;
}

}  // namespace

ParseResult parse_qa(const std::string& response, TaskKind task,
                     const Scene& scene) {
  (void)task;  // T: is optional everywhere; ids are validated when present
  ParseResult result;
  const auto markers = find_markers(response);

  // Trailing list numbering ("\n2. ") belongs to the next item, not to us.
  static const std::regex kTrailingEnum(R"((\n|^)\s*\d+[.)]\s*$)");
  auto segment = [&](size_t i) {
    const size_t from = markers[i].content;
    const size_t to = i + 1 < markers.size() ? markers[i + 1].pos : response.size();
    std::string raw = response.substr(from, to - from);
    raw = std::regex_replace(raw, kTrailingEnum, "$1");
    return trim(raw);
  };

  size_t first_q = markers.size();
  for (size_t i = 0; i < markers.size(); ++i) {
    if (markers[i].kind == 'Q') {
      first_q = i;
      break;
    }
  }
  {
    const size_t head_end = first_q < markers.size() ? markers[first_q].pos
                                                     : response.size();
    const std::string head = trim(response.substr(0, head_end));
    if (!head.empty()) result.rejected.push_back(head);
  }
  for (size_t i = 0; i < first_q; ++i) {
    const std::string frag = segment(i);
    if (!frag.empty()) result.rejected.push_back(std::string(1, markers[i].kind) + ": " + frag);
  }

  size_t i = first_q;
  while (i < markers.size()) {
    // Invariant here: markers[i].kind == 'Q'.
    QAPair pair;
    pair.question = segment(i);
    size_t j = i + 1;
    std::string target_text;
    bool have_answer = false;
    bool malformed = false;
    while (j < markers.size() && markers[j].kind != 'Q') {
      if (markers[j].kind == 'T' && !have_answer && target_text.empty()) {
        target_text = segment(j);
      } else if (markers[j].kind == 'A' && !have_answer) {
        pair.answer = segment(j);
        have_answer = true;
      } else {
        malformed = true;
      }
      ++j;
    }

    std::string reject_reason;
    if (pair.question.empty()) reject_reason = "empty question";
    else if (!have_answer || pair.answer.empty()) reject_reason = "missing answer";
    else if (malformed) reject_reason = "unexpected marker sequence";

    if (reject_reason.empty() && !target_text.empty()) {
      std::stringstream ss(target_text);
      std::string token;
      while (std::getline(ss, token, ',')) {
        token = trim(token);
        if (token.empty()) continue;
        if (!scene.find(token)) {
          reject_reason = "unknown target id '" + token + "'";
          break;
        }
        pair.target_ids.push_back(token);
      }
    }

    const size_t frag_end = j < markers.size() ? markers[j].pos : response.size();
    if (reject_reason.empty()) {
      result.pairs.push_back(std::move(pair));
    } else {
      result.rejected.push_back(
          reject_reason + ": " + trim(response.substr(markers[i].pos,
                                                      frag_end - markers[i].pos)));
    }
    i = j;
  }
  return result;
}

std::string serialize_qa(const std::vector<QAPair>& pairs) {
  std::string out;
  for (const auto& p : pairs) {
    out += "Q: " + p.question + "\n";
    if (!p.target_ids.empty()) {
      out += "T: ";
      for (size_t i = 0; i < p.target_ids.size(); ++i) {
        if (i > 0) out += ", ";
        out += p.target_ids[i];
      }
      out += "\n";
    }
    out += "A: " + p.answer + "\n\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Offline template generator

namespace {

std::string item_phrase(const SituatedObjectRecord& rec) {
  std::string out = "a ";
  auto color = rec.attributes.find("color");
  if (color != rec.attributes.end()) out += color->second + " ";
  out += rec.label;
  return out;
}

std::string join_labels(const Scene& scene, const std::vector<std::string>& ids) {
  std::string out;
  for (size_t i = 0; i < ids.size(); ++i) {
    if (i > 0) out += (i + 1 == ids.size() ? " and " : ", ");
    const Object3D* o = scene.find(ids[i]);
    out += o ? o->label : ids[i];
  }
  return out;
}

const char* turn_action(geom::DirectionBin bin) {
  switch (bin) {
    case geom::DirectionBin::Front:
      return "walk straight";
    case geom::DirectionBin::Right:
      return "turn right";
    case geom::DirectionBin::Back:
      return "turn around";
    case geom::DirectionBin::Left:
      return "turn left";
  }
  return "?";
}

DatasetExample base_example(TaskKind task, const SituatedSceneGraph& graph) {
  DatasetExample e;
  e.scene_id = graph.scene_id;
  e.situation = graph.situation;
  e.task = task;
  e.provenance = "offline-template";
  return e;
}

constexpr geom::DirectionBin kBinOrder[] = {
    geom::DirectionBin::Front, geom::DirectionBin::Right,
    geom::DirectionBin::Back, geom::DirectionBin::Left};

std::vector<DatasetExample> gen_attr_rel(const Scene& scene,
                                         const SituatedSceneGraph& graph,
                                         Rng& rng) {
  (void)scene;
  std::vector<DatasetExample> out;
  const auto records = graph.all_records();
  if (records.empty()) return out;

  // Counting pair: one direction where the label exists, plus the
  // clockwise-next direction (often empty, exercising the "none" answer).
  geom::DirectionBin bin = kBinOrder[rng.pick(4)];
  for (int k = 0; k < 4 && graph.buckets.at(bin).empty(); ++k) {
    bin = geom::clockwise_next(bin);
  }
  const auto& bucket = graph.buckets.at(bin);
  if (!bucket.empty()) {
    const std::string label = bucket[rng.pick(bucket.size())].label;
    for (geom::DirectionBin b : {bin, geom::clockwise_next(bin)}) {
      int count = 0;
      std::vector<std::string> ids;
      for (const auto& rec : graph.buckets.at(b)) {
        if (rec.label == label) {
          ++count;
          ids.push_back(rec.object_id);
        }
      }
      DatasetExample e = base_example(TaskKind::AttrRel, graph);
      e.question = "How many " + label + "s are " + direction_phrase(b) + "?";
      e.answer = count == 0 ? "None." : std::to_string(count) + ".";
      e.target_ids = std::move(ids);
      out.push_back(std::move(e));
    }
  }

  // Attribute lookup.
  std::vector<const SituatedObjectRecord*> colored;
  for (const auto* rec : records) {
    if (rec->attributes.count("color")) colored.push_back(rec);
  }
  if (!colored.empty()) {
    const auto* rec = colored[rng.pick(colored.size())];
    DatasetExample e = base_example(TaskKind::AttrRel, graph);
    e.question = "What is the color of the " + rec->label + " " +
                 direction_phrase(rec->direction) + "?";
    e.answer = rec->attributes.at("color") + ".";
    e.target_ids = {rec->object_id};
    out.push_back(std::move(e));
  }

  // Distance comparison between two labels, else a where-is fallback.
  std::map<std::string, const SituatedObjectRecord*> nearest_by_label;
  for (const auto* rec : records) {
    auto it = nearest_by_label.find(rec->label);
    if (it == nearest_by_label.end() || rec->distance < it->second->distance) {
      nearest_by_label[rec->label] = rec;
    }
  }
  std::vector<const SituatedObjectRecord*> nearest;
  for (const auto& [label, rec] : nearest_by_label) nearest.push_back(rec);
  const SituatedObjectRecord* a = nullptr;
  const SituatedObjectRecord* b = nullptr;
  if (nearest.size() >= 2) {
    const size_t first = rng.pick(nearest.size());
    for (size_t step = 1; step < nearest.size(); ++step) {
      const size_t second = (first + step) % nearest.size();
      if (nearest[second]->distance != nearest[first]->distance) {
        a = nearest[first];
        b = nearest[second];
        break;
      }
    }
  }
  if (a && b) {
    const auto* closer = a->distance < b->distance ? a : b;
    DatasetExample e = base_example(TaskKind::AttrRel, graph);
    e.question = "Which is closer to you, the " + a->label + " or the " +
                 b->label + "?";
    e.answer = "The " + closer->label + " " +
               direction_phrase(closer->direction) + ".";
    e.target_ids = {a->object_id, b->object_id};
    out.push_back(std::move(e));
  } else {
    const auto* rec = records[rng.pick(records.size())];
    DatasetExample e = base_example(TaskKind::AttrRel, graph);
    e.question = "Where is the " + rec->label + "?";
    e.answer = "The " + rec->label + " is " +
               direction_phrase(rec->direction) + ".";
    e.target_ids = {rec->object_id};
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<DatasetExample> gen_affordance(const Scene& scene,
                                           const SituatedSceneGraph& graph,
                                           Rng& rng) {
  std::vector<DatasetExample> out;
  // affordance -> nearest record carrying it
  std::map<std::string, const SituatedObjectRecord*> nearest;
  for (const auto* rec : graph.all_records()) {
    for (const auto& aff : rec->affordances) {
      auto it = nearest.find(aff);
      if (it == nearest.end() || rec->distance < it->second->distance) {
        nearest[aff] = rec;
      }
    }
  }
  if (nearest.empty()) return out;

  std::vector<std::string> affs;
  for (const auto& [aff, rec] : nearest) affs.push_back(aff);
  const size_t offset = rng.pick(affs.size());
  for (size_t k = 0; k < std::min<size_t>(2, affs.size()); ++k) {
    const std::string& aff = affs[(offset + k) % affs.size()];
    const auto* rec = nearest.at(aff);
    DatasetExample e = base_example(TaskKind::Affordance, graph);
    e.question = "Which object can you use for " + aff + "?";
    e.answer = "Use the " + rec->label + " " +
               direction_phrase(rec->direction) + ".";
    if (!rec->passby.empty()) {
      e.answer += " You will pass by the " + join_labels(scene, rec->passby) + ".";
    }
    e.target_ids = {rec->object_id};
    out.push_back(std::move(e));
  }

  // Reverse form: closest affordance-bearing object -> its use.
  const SituatedObjectRecord* closest = nullptr;
  for (const auto* rec : graph.all_records()) {
    if (rec->affordances.empty()) continue;
    if (!closest || rec->distance < closest->distance) closest = rec;
  }
  if (closest) {
    DatasetExample e = base_example(TaskKind::Affordance, graph);
    e.question = "What can the " + closest->label + " " +
                 direction_phrase(closest->direction) + " be used for?";
    e.answer = "It can be used for " + closest->affordances.front() + ".";
    e.target_ids = {closest->object_id};
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<DatasetExample> gen_planning(const Scene& scene,
                                         const SituatedSceneGraph& graph,
                                         Rng& rng) {
  std::vector<DatasetExample> out;
  auto records = graph.all_records();
  if (records.size() < 2) return out;
  std::sort(records.begin(), records.end(),
            [](const SituatedObjectRecord* x, const SituatedObjectRecord* y) {
              return x->object_id < y->object_id;
            });

  const int pairs = records.size() >= 3 ? 2 : 1;
  const size_t offset = rng.pick(records.size());
  for (int k = 0; k < pairs; ++k) {
    const auto* first = records[(offset + k) % records.size()];
    const auto* second = records[(offset + k + 1) % records.size()];
    const double delta = geom::normalize_deg(second->angle - first->angle);
    const geom::DirectionBin turn2 = geom::classify_direction(delta);

    DatasetExample e = base_example(TaskKind::Planning, graph);
    e.question = "I want to use the " + first->label + " and then the " +
                 second->label + ". What should I do?";
    e.answer = std::string("First ") + turn_action(first->direction) +
               " and go to the " + first->label + " " +
               direction_phrase(first->direction) + ". Then " +
               turn_action(turn2) + " and go to the " + second->label + " " +
               direction_phrase(second->direction) + ".";
    if (!first->passby.empty()) {
      e.answer += " You will pass by the " + join_labels(scene, first->passby) + ".";
    }
    e.target_ids = {first->object_id, second->object_id};
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<DatasetExample> gen_captioning(const SituatedSceneGraph& graph) {
  const std::pair<geom::DirectionBin, const char*> sections[] = {
      {geom::DirectionBin::Front, "In front of you"},
      {geom::DirectionBin::Right, "On your right"},
      {geom::DirectionBin::Back, "Behind you"},
      {geom::DirectionBin::Left, "On your left"},
  };
  std::string text;
  for (const auto& [bin, lead] : sections) {
    std::vector<const SituatedObjectRecord*> recs;
    for (const auto& rec : graph.buckets.at(bin)) recs.push_back(&rec);
    // Progressive clockwise sweep: Front spans the 315..45 wrap, so order it
    // by angle relative to the sweep start.
    std::sort(recs.begin(), recs.end(),
              [](const SituatedObjectRecord* x, const SituatedObjectRecord* y) {
                const double ax = geom::normalize_deg(x->angle + 45.0);
                const double ay = geom::normalize_deg(y->angle + 45.0);
                if (ax != ay) return ax < ay;
                return x->object_id < y->object_id;
              });
    if (!text.empty()) text += " ";
    text += lead;
    if (recs.empty()) {
      text += ", there are no objects.";
      continue;
    }
    text += recs.size() == 1 ? ", there is " : ", there are ";
    for (size_t i = 0; i < recs.size(); ++i) {
      if (i > 0) text += (i + 1 == recs.size() ? " and " : ", ");
      text += item_phrase(*recs[i]);
    }
    text += ".";
  }

  DatasetExample e = base_example(TaskKind::Captioning, graph);
  e.question = "";
  e.answer = text;
  return {std::move(e)};
}

}  // namespace

std::vector<DatasetExample> offline_generate(TaskKind task, const Scene& scene,
                                             const SituatedSceneGraph& graph,
                                             Rng& rng) {
  switch (task) {
    case TaskKind::Captioning:
      return gen_captioning(graph);
    case TaskKind::AttrRel:
      return gen_attr_rel(scene, graph, rng);
    case TaskKind::Affordance:
      return gen_affordance(scene, graph, rng);
    case TaskKind::Planning:
      return gen_planning(scene, graph, rng);
  }
  return {};
}

}  // namespace spartun
