#include "spartun/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <ostream>
#include <regex>
#include <set>
#include <sstream>

#include "json.hpp"

namespace spartun {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string lowercase(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

bool bounded_at(const std::string& text, size_t pos, size_t len) {
  const bool left_ok = pos == 0 || !word_char(text[pos - 1]);
  const bool right_ok = pos + len >= text.size() || !word_char(text[pos + len]);
  return left_ok && right_ok;
}

std::vector<size_t> find_word(const std::string& text, const std::string& word) {
  std::vector<size_t> out;
  size_t pos = 0;
  while ((pos = text.find(word, pos)) != std::string::npos) {
    if (bounded_at(text, pos, word.size())) out.push_back(pos);
    pos += 1;
  }
  return out;
}

struct DirPhrase {
  size_t begin;
  size_t end;
  geom::DirectionBin bin;
};

// Longest patterns first so overlapping shorter forms are skipped.
const std::vector<std::pair<std::string, geom::DirectionBin>>& dir_patterns() {
  static const std::vector<std::pair<std::string, geom::DirectionBin>> pats = {
      {"in front of you", geom::DirectionBin::Front},
      {"in front of me", geom::DirectionBin::Front},
      {"ahead of you", geom::DirectionBin::Front},
      {"on your left", geom::DirectionBin::Left},
      {"on your right", geom::DirectionBin::Right},
      {"on your back", geom::DirectionBin::Back},
      {"on my left", geom::DirectionBin::Left},
      {"on my right", geom::DirectionBin::Right},
      {"on the left", geom::DirectionBin::Left},
      {"on the right", geom::DirectionBin::Right},
      {"to your left", geom::DirectionBin::Left},
      {"to your right", geom::DirectionBin::Right},
      {"to your back", geom::DirectionBin::Back},
      {"to my left", geom::DirectionBin::Left},
      {"to my right", geom::DirectionBin::Right},
      {"behind you", geom::DirectionBin::Back},
      {"behind me", geom::DirectionBin::Back},
      {"in front", geom::DirectionBin::Front},
  };
  return pats;
}

std::vector<DirPhrase> find_direction_phrases(const std::string& lower) {
  std::vector<DirPhrase> out;
  for (const auto& [pat, bin] : dir_patterns()) {
    for (size_t pos : find_word(lower, pat)) {
      const size_t end = pos + pat.size();
      bool overlapped = false;
      for (const auto& p : out) {
        if (pos < p.end && end > p.begin) {
          overlapped = true;
          break;
        }
      }
      if (!overlapped) out.push_back({pos, end, bin});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const DirPhrase& a, const DirPhrase& b) { return a.begin < b.begin; });
  return out;
}

bool negated_before(const std::string& lower, size_t pos) {
  // Look at the few words preceding the mention.
  const size_t from = pos > 24 ? pos - 24 : 0;
  const std::string window = lower.substr(from, pos - from);
  for (const char* neg : {" no ", " not ", "n't ", " without ", " any "}) {
    if (window.find(neg) != std::string::npos) return true;
  }
  return window.rfind("no ", 0) == 0;
}

// Smallest gap between the mention span and the phrase span.
size_t span_gap(size_t a0, size_t a1, size_t b0, size_t b1) {
  if (a1 <= b0) return b0 - a1;
  if (b1 <= a0) return a0 - b1;
  return 0;
}

// A mention only binds to a phrase inside the same sentence.
bool same_sentence(const std::string& text, size_t a, size_t b) {
  if (a > b) std::swap(a, b);
  for (size_t i = a; i < b && i < text.size(); ++i) {
    if (text[i] == '.' || text[i] == ';' || text[i] == '?' || text[i] == '!') {
      return false;
    }
  }
  return true;
}

std::optional<int> parse_count(const std::string& lower) {
  static const std::vector<std::pair<std::string, int>> words = {
      {"none", 0},   {"zero", 0},   {"one", 1},    {"two", 2},
      {"three", 3},  {"four", 4},   {"five", 5},   {"six", 6},
      {"seven", 7},  {"eight", 8},  {"nine", 9},   {"ten", 10},
      {"eleven", 11}, {"twelve", 12}};
  // Digits win when they appear first.
  for (size_t i = 0; i < lower.size(); ++i) {
    if (std::isdigit(static_cast<unsigned char>(lower[i])) &&
        (i == 0 || !word_char(lower[i - 1]))) {
      return std::stoi(lower.substr(i));
    }
    for (const auto& [w, n] : words) {
      if (lower.compare(i, w.size(), w) == 0 && bounded_at(lower, i, w.size())) {
        return n;
      }
    }
  }
  return std::nullopt;
}

std::string singular(const std::string& word) {
  if (word.size() > 1 && word.back() == 's') return word.substr(0, word.size() - 1);
  return word;
}

}  // namespace

const char* to_string(FidelityViolation::Kind kind) {
  switch (kind) {
    case FidelityViolation::Kind::UnknownObject:
      return "UnknownObject";
    case FidelityViolation::Kind::DirectionMismatch:
      return "DirectionMismatch";
    case FidelityViolation::Kind::CountMismatch:
      return "CountMismatch";
    case FidelityViolation::Kind::DistanceComparatorMismatch:
      return "DistanceComparatorMismatch";
  }
  return "?";
}

FidelityReport fidelity_check(const DatasetExample& example,
                              const SituatedSceneGraph& graph) {
  if (example.situation.digest() != graph.situation.digest()) {
    throw GraphMismatchError("example situation does not match graph (" +
                             example.situation.digest() + " vs " +
                             graph.situation.digest() + ")");
  }

  FidelityReport report;
  auto add = [&](FidelityViolation::Kind kind, std::string detail) {
    report.violations.push_back({kind, std::move(detail)});
  };

  // Label -> buckets containing it, and label -> nearest distance.
  std::map<std::string, std::set<geom::DirectionBin>> label_bins;
  std::map<std::string, double> label_min_dist;
  std::set<std::string> known_ids{example.situation.pivot_id};
  for (const auto& [bin, records] : graph.buckets) {
    for (const auto& rec : records) {
      const std::string l = lowercase(rec.label);
      label_bins[l].insert(bin);
      auto it = label_min_dist.find(l);
      if (it == label_min_dist.end() || rec.distance < it->second) {
        label_min_dist[l] = rec.distance;
      }
      known_ids.insert(rec.object_id);
    }
  }
  const std::string pivot_label = lowercase(graph.pivot_label);

  // (d) every queried target id must exist in the scene.
  for (const auto& id : example.target_ids) {
    if (!known_ids.count(id)) {
      add(FidelityViolation::Kind::UnknownObject, "unknown target id: " + id);
    }
  }

  // (a) label mentioned with a direction word must exist in that bucket.
  const std::string answer = lowercase(example.answer);
  const auto phrases = find_direction_phrases(answer);
  if (!phrases.empty()) {
    for (const auto& [label, bins] : label_bins) {
      for (const std::string& form : {label, label + "s"}) {
        for (size_t pos : find_word(answer, form)) {
          if (negated_before(answer, pos)) continue;
          const DirPhrase* nearest = nullptr;
          size_t best = 40;  // binding window, characters
          for (const auto& p : phrases) {
            if (!same_sentence(answer, std::min(pos + form.size(), p.end),
                               std::max(pos, p.begin))) {
              continue;
            }
            const size_t gap = span_gap(pos, pos + form.size(), p.begin, p.end);
            if (gap <= best) {
              best = gap;
              nearest = &p;
            }
          }
          if (!nearest) continue;
          if (!bins.count(nearest->bin) && label != pivot_label) {
            add(FidelityViolation::Kind::DirectionMismatch,
                "'" + label + "' claimed " +
                    geom::to_string(nearest->bin) + " but present in no such bucket");
          }
        }
      }
    }
  }

  const std::string question = lowercase(example.question);

  // (b) numeric answers to "how many <label> ... <direction>" questions.
  const size_t hm = question.find("how many ");
  if (hm != std::string::npos) {
    size_t start = hm + 9;
    size_t end = question.size();
    for (const char* stop : {" are ", " is ", " do ", " can ", "?"}) {
      const size_t p = question.find(stop, start);
      if (p != std::string::npos) end = std::min(end, p);
    }
    const std::string phrase = question.substr(start, end - start);
    const auto qdirs = find_direction_phrases(question);
    std::string label;
    if (label_bins.count(phrase)) {
      label = phrase;
    } else if (label_bins.count(singular(phrase))) {
      label = singular(phrase);
    }
    if (!label.empty() && !qdirs.empty()) {
      const geom::DirectionBin bin = qdirs.front().bin;
      int expected = 0;
      auto bucket = graph.buckets.find(bin);
      if (bucket != graph.buckets.end()) {
        for (const auto& rec : bucket->second) {
          if (lowercase(rec.label) == label) ++expected;
        }
      }
      const auto got = parse_count(answer);
      if (got && *got != expected) {
        add(FidelityViolation::Kind::CountMismatch,
            "expected " + std::to_string(expected) + " for '" + label +
                "' in " + geom::to_string(bin) + ", answer says " +
                std::to_string(*got));
      }
    }
  }

  // (c) closer/farther comparatives over two named labels.
  static const std::regex cmp_re(
      "which is (closer|farther) to you, the ([a-z0-9_ ]+?) or the "
      "([a-z0-9_ ]+?)\\?");
  std::smatch m;
  if (std::regex_search(question, m, cmp_re)) {
    const bool want_closer = m[1] == "closer";
    const std::string l1 = m[2];
    const std::string l2 = m[3];
    auto d1 = label_min_dist.find(l1);
    auto d2 = label_min_dist.find(l2);
    if (d1 != label_min_dist.end() && d2 != label_min_dist.end() &&
        d1->second != d2->second) {
      const bool first_wins = want_closer ? d1->second < d2->second
                                          : d1->second > d2->second;
      const std::string& correct = first_wins ? l1 : l2;
      const std::string& wrong = first_wins ? l2 : l1;
      const size_t pc = answer.find(correct);
      const size_t pw = answer.find(wrong);
      if (pw != std::string::npos &&
          (pc == std::string::npos || pw < pc)) {
        add(FidelityViolation::Kind::DistanceComparatorMismatch,
            "expected '" + correct + "', answer names '" + wrong + "' first");
      } else if (pc == std::string::npos && pw == std::string::npos) {
        // Neither label grounded; unverifiable, no violation.
      }
    }
  }

  report.passed = report.violations.empty();
  return report;
}

std::vector<DatasetExample> dedup(std::vector<DatasetExample> examples) {
  std::set<std::string> seen;
  std::vector<DatasetExample> out;
  out.reserve(examples.size());
  for (auto& e : examples) {
    std::string key = e.scene_id + "\x1f" + e.situation.digest() + "\x1f" +
                      e.question + "\x1f" + e.answer;
    if (seen.insert(std::move(key)).second) {
      out.push_back(std::move(e));
    }
  }
  return out;
}

SplitSpec SplitSpec::defaults() {
  SplitSpec spec;
  spec.test_fraction = {
      {TaskKind::Captioning, 1350.0 / 9717.0},
      {TaskKind::AttrRel, 8168.0 / 69422.0},
      {TaskKind::Affordance, 5017.0 / 40087.0},
      {TaskKind::Planning, 2819.0 / 22253.0},
  };
  return spec;
}

std::pair<std::vector<DatasetExample>, std::vector<DatasetExample>> split(
    const std::vector<DatasetExample>& examples, const SplitSpec& spec) {
  // Scene -> per-task counts, plus per-task scene coverage.
  std::map<std::string, std::map<TaskKind, int>> per_scene;
  std::map<TaskKind, int> totals;
  std::map<TaskKind, std::set<std::string>> task_scenes;
  for (const auto& e : examples) {
    per_scene[e.scene_id][e.task] += 1;
    totals[e.task] += 1;
    task_scenes[e.task].insert(e.scene_id);
  }
  for (const auto& [task, scenes] : task_scenes) {
    if (scenes.size() < 2) {
      throw InsufficientScenesError(std::string("task ") + to_string(task) +
                                    " spans fewer than 2 scenes");
    }
  }

  const SplitSpec defaults = SplitSpec::defaults();
  std::map<TaskKind, double> need;
  for (const auto& [task, total] : totals) {
    auto it = spec.test_fraction.find(task);
    const double f = it != spec.test_fraction.end()
                         ? it->second
                         : defaults.test_fraction.at(task);
    if (!(f > 0.0 && f < 1.0)) {
      throw ConfigError("test fraction must lie in (0,1)");
    }
    need[task] = f * total;
  }

  std::vector<std::string> scenes;
  scenes.reserve(per_scene.size());
  for (const auto& [scene, counts] : per_scene) scenes.push_back(scene);
  std::sort(scenes.begin(), scenes.end());
  Rng rng(spec.seed);
  for (size_t i = scenes.size(); i > 1; --i) {
    std::swap(scenes[i - 1], scenes[rng.pick(i)]);
  }

  std::set<std::string> test_scenes;
  for (const auto& scene : scenes) {
    const auto& counts = per_scene[scene];
    double benefit = 0.0;
    double total = 0.0;
    for (const auto& [task, cnt] : counts) {
      benefit += std::min(need[task], static_cast<double>(cnt));
      total += cnt;
    }
    if (benefit * 2.0 >= total) {
      test_scenes.insert(scene);
      for (const auto& [task, cnt] : counts) {
        need[task] = std::max(0.0, need[task] - cnt);
      }
    }
  }

  std::vector<DatasetExample> train, test;
  for (const auto& e : examples) {
    (test_scenes.count(e.scene_id) ? test : train).push_back(e);
  }
  return {std::move(train), std::move(test)};
}

namespace {

ordered_json fidelity_to_json(const FidelityReport& r) {
  ordered_json j;
  j["passed"] = r.passed;
  j["violations"] = ordered_json::array();
  for (const auto& v : r.violations) {
    j["violations"].push_back({{"kind", to_string(v.kind)}, {"detail", v.detail}});
  }
  return j;
}

}  // namespace

std::string example_to_json(const DatasetExample& e) {
  ordered_json j;
  j["scene_id"] = e.scene_id;
  j["task"] = to_string(e.task);
  j["situation"] = ordered_json::parse(situation_to_json(e.situation));
  j["question"] = e.question;
  j["answer"] = e.answer;
  j["target_ids"] = e.target_ids;
  j["provenance"] = e.provenance;
  j["fidelity"] = e.fidelity ? fidelity_to_json(*e.fidelity) : ordered_json(nullptr);
  return j.dump();
}

DatasetExample example_from_json(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& err) {
    throw ParseError(std::string("malformed example JSON: ") + err.what());
  }
  DatasetExample e;
  e.scene_id = j.at("scene_id").get<std::string>();
  e.task = task_from_string(j.at("task").get<std::string>());
  const json& s = j.at("situation");
  e.situation.description = s.at("description").get<std::string>();
  e.situation.stand = {s.at("stand")[0].get<double>(),
                       s.at("stand")[1].get<double>(), 0.0};
  const json& q = s.at("quaternion");
  e.situation.orientation = {q[0].get<double>(), q[1].get<double>(),
                             q[2].get<double>(), q[3].get<double>()};
  double yaw = 2.0 * std::atan2(e.situation.orientation.qz,
                                e.situation.orientation.w) *
               180.0 / 3.14159265358979323846;
  yaw = geom::normalize_deg(yaw);
  e.situation.yaw = yaw > 180.0 ? yaw - 360.0 : yaw;
  e.situation.pivot_id = s.at("pivot_id").get<std::string>();
  e.situation.referent_id = s.at("referent_id").get<std::string>();
  e.question = j.at("question").get<std::string>();
  e.answer = j.at("answer").get<std::string>();
  for (const auto& t : j.at("target_ids")) {
    e.target_ids.push_back(t.get<std::string>());
  }
  e.provenance = j.at("provenance").get<std::string>();
  if (j.contains("fidelity") && !j.at("fidelity").is_null()) {
    FidelityReport r;
    r.passed = j["fidelity"].at("passed").get<bool>();
    for (const auto& v : j["fidelity"].at("violations")) {
      FidelityViolation fv;
      const std::string kind = v.at("kind").get<std::string>();
      if (kind == "UnknownObject") fv.kind = FidelityViolation::Kind::UnknownObject;
      else if (kind == "DirectionMismatch") fv.kind = FidelityViolation::Kind::DirectionMismatch;
      else if (kind == "CountMismatch") fv.kind = FidelityViolation::Kind::CountMismatch;
      else fv.kind = FidelityViolation::Kind::DistanceComparatorMismatch;
      fv.detail = v.at("detail").get<std::string>();
      r.violations.push_back(std::move(fv));
    }
    e.fidelity = std::move(r);
  }
  return e;
}

void emit_jsonl(const std::vector<DatasetExample>& examples, std::ostream& out) {
  for (const auto& e : examples) {
    out << example_to_json(e) << "\n";
  }
  out.flush();
  if (!out) throw IoError("failed writing dataset JSONL");
}

std::vector<DatasetExample> load_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset file: " + path);
  std::vector<DatasetExample> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(example_from_json(line));
  }
  return out;
}

std::string stats(const std::vector<DatasetExample>& examples) {
  ordered_json j;
  j["total"] = examples.size();

  ordered_json per_task = ordered_json::object();
  for (TaskKind t : kAllTasks) per_task[to_string(t)] = 0;
  for (const auto& e : examples) {
    per_task[to_string(e.task)] = per_task[to_string(e.task)].get<int>() + 1;
  }
  j["per_task"] = std::move(per_task);

  std::map<std::string, std::set<std::string>> situations;
  for (const auto& e : examples) {
    situations[e.scene_id].insert(e.situation.digest());
  }
  ordered_json per_scene = ordered_json::object();
  for (const auto& [scene, digests] : situations) {
    per_scene[scene] = digests.size();
  }
  j["per_scene_situations"] = std::move(per_scene);

  std::map<std::string, int> hist{
      {"1-5", 0}, {"6-10", 0}, {"11-20", 0}, {"21-40", 0}, {"41+", 0}};
  for (const auto& e : examples) {
    int words = 0;
    bool in_word = false;
    for (char c : e.answer) {
      const bool w = word_char(c);
      if (w && !in_word) ++words;
      in_word = w;
    }
    if (words <= 5) hist["1-5"] += 1;
    else if (words <= 10) hist["6-10"] += 1;
    else if (words <= 20) hist["11-20"] += 1;
    else if (words <= 40) hist["21-40"] += 1;
    else hist["41+"] += 1;
  }
  ordered_json jhist = ordered_json::object();
  for (const char* k : {"1-5", "6-10", "11-20", "21-40", "41+"}) jhist[k] = hist[k];
  j["answer_length_hist"] = std::move(jhist);

  std::map<std::string, int> dirs{{"left", 0}, {"right", 0}, {"front", 0}, {"back", 0}};
  for (const auto& e : examples) {
    const std::string a = lowercase(e.answer);
    if (!find_word(a, "left").empty()) dirs["left"] += 1;
    if (!find_word(a, "right").empty()) dirs["right"] += 1;
    if (!find_word(a, "front").empty() || !find_word(a, "ahead").empty()) dirs["front"] += 1;
    if (!find_word(a, "behind").empty() || !find_word(a, "back").empty() ||
        !find_word(a, "backward").empty() || !find_word(a, "backwards").empty()) {
      dirs["back"] += 1;
    }
  }
  ordered_json jdirs = ordered_json::object();
  for (const char* k : {"left", "right", "front", "back"}) jdirs[k] = dirs[k];
  j["direction_words"] = std::move(jdirs);

  return j.dump(2) + "\n";
}

}  // namespace spartun
