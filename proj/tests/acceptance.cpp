// Release gate: one pass/fail line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "json.hpp"
#include "spartun/align.hpp"
#include "spartun/dataset.hpp"
#include "spartun/evalkit.hpp"
#include "spartun/pipeline.hpp"
#include "spartun/taskgen.hpp"

#ifndef SPARTUN_CLI_PATH
#define SPARTUN_CLI_PATH "spartun"
#endif

using namespace spartun;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int n, bool ok, const std::string& what) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", n, what.c_str());
  if (!ok) g_failures += 1;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_scene_dir(const std::string& name, int n, uint64_t seed) {
  const auto dir = fresh_dir(name);
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    char id[32];
    std::snprintf(id, sizeof(id), "scene_%03d", i);
    std::ofstream(dir / (std::string(id) + ".json"), std::ios::binary)
        << serialize_scene(fixtures::random_scene(rng, id));
  }
  return dir;
}

// --- criterion 1 -----------------------------------------------------------

void check_direction_partition() {
  const auto t0 = Clock::now();
  bool ok = true;
  using geom::DirectionBin;
  ok &= geom::classify_direction(0.0) == DirectionBin::Front;
  ok &= geom::classify_direction(90.0) == DirectionBin::Right;
  ok &= geom::classify_direction(180.0) == DirectionBin::Back;
  ok &= geom::classify_direction(270.0) == DirectionBin::Left;
  ok &= geom::classify_direction(315.0) == DirectionBin::Front;
  ok &= geom::classify_direction(44.999) == DirectionBin::Front;
  ok &= geom::classify_direction(45.0) == DirectionBin::Right;
  ok &= geom::classify_direction(135.0) == DirectionBin::Back;
  ok &= geom::classify_direction(225.0) == DirectionBin::Left;

  Rng rng(1);
  std::map<DirectionBin, int> counts;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    counts[geom::classify_direction(rng.uniform() * 360.0)] += 1;
  }
  for (const auto& [bin, count] : counts) {
    const double share = static_cast<double>(count) / n;
    ok &= std::abs(share - 0.25) <= 0.01;
  }
  ok &= counts.size() == 4;
  const double dt = seconds_since(t0);
  ok &= dt < 1.0;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "direction bins are uniform quarters with exact boundaries "
                "(%.2fs)", dt);
  report(1, ok, buf);
}

// --- criterion 2 -----------------------------------------------------------

void check_passby_oracle() {
  const auto t0 = Clock::now();
  using geom::Rect2D;
  using geom::Vec2;
  Rng rng(1234);
  bool ok = true;
  int decisive = 0;
  for (int i = 0; i < 1000; ++i) {
    const Vec2 a{rng.uniform() * 8 - 4, rng.uniform() * 8 - 4};
    const Vec2 b{rng.uniform() * 8 - 4, rng.uniform() * 8 - 4};
    const Vec2 p{rng.uniform() * 6 - 3, rng.uniform() * 6 - 3};
    const Rect2D rect{{p.x, p.y},
                      {p.x + 0.2 + rng.uniform() * 2,
                       p.y + 0.2 + rng.uniform() * 2}};
    bool sampled_hit = false;
    double min_dist = 1e30;
    for (int s = 0; s <= 4096; ++s) {
      const double t = static_cast<double>(s) / 4096.0;
      const Vec2 q{a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t};
      if (q.x >= rect.lo.x && q.x <= rect.hi.x && q.y >= rect.lo.y &&
          q.y <= rect.hi.y) {
        sampled_hit = true;
      }
      const double dx = std::max({rect.lo.x - q.x, 0.0, q.x - rect.hi.x});
      const double dy = std::max({rect.lo.y - q.y, 0.0, q.y - rect.hi.y});
      min_dist = std::min(min_dist, std::hypot(dx, dy));
    }
    const bool got = geom::segment_intersects_rect(a, b, rect);
    if (sampled_hit) {
      ++decisive;
      ok &= got;
    } else if (min_dist > 1e-6) {
      ++decisive;
      ok &= !got;
    }
  }
  ok &= decisive > 900;
  const double dt = seconds_since(t0);
  ok &= dt < 10.0;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "segment/rectangle test matches dense sampling on %d decisive "
                "cases (%.2fs)", decisive, dt);
  report(2, ok, buf);
}

// --- criterion 3 -----------------------------------------------------------

void check_rigid_invariance() {
  using geom::Vec2;
  Rng meta(31337);
  bool ok = true;
  int tested = 0;
  for (int i = 0; tested < 100 && i < 220; ++i) {
    const Scene scene =
        fixtures::random_scene(meta, "scene_acc" + std::to_string(i));
    Rng rng = Rng::derive(5, scene.id, 0);
    Situation s;
    try {
      s = sample_situation(scene, rng);
    } catch (const Error&) {
      continue;
    }
    const auto base = build_situated_graph(scene, s);

    const double deg = meta.uniform() * 360.0;
    const Vec2 pivot{meta.uniform() * 6 - 3, meta.uniform() * 6 - 3};
    const Vec2 shift{meta.uniform() * 10 - 5, meta.uniform() * 10 - 5};
    Scene moved = fixtures::rotated(scene, pivot, deg);
    for (auto& o : moved.objects) {
      o.obb.center.x += shift.x;
      o.obb.center.y += shift.y;
    }
    Situation ms = s;
    const Vec2 stand2 = fixtures::rotate_about(s.stand.xy(), pivot, deg);
    ms.stand = {stand2.x + shift.x, stand2.y + shift.y, 0.0};
    double yaw2 = geom::normalize_deg(s.yaw + deg);
    ms.yaw = yaw2 > 180.0 ? yaw2 - 360.0 : yaw2;
    ms.orientation = geom::yaw_to_quaternion(ms.yaw);
    const auto movedg = build_situated_graph(moved, ms);

    for (const auto& [bin, records] : base.buckets) {
      const auto& mrec = movedg.buckets.at(bin);
      if (mrec.size() != records.size()) {
        ok = false;
        continue;
      }
      for (size_t k = 0; k < records.size(); ++k) {
        ok &= mrec[k].object_id == records[k].object_id;
        ok &= std::abs(mrec[k].distance - records[k].distance) < 1e-6;
        const double d = std::abs(
            geom::normalize_deg(mrec[k].angle - records[k].angle + 180.0) -
            180.0);
        ok &= d < 1e-6;
        ok &= mrec[k].passby == records[k].passby;
      }
    }
    ++tested;
  }
  ok &= tested == 100;
  report(3, ok,
         "situated graphs survive global rotation+translation on 100 fixtures");
}

// --- criterion 4 -----------------------------------------------------------

void check_determinism_via_cli() {
  const auto scenes = write_scene_dir("acc_scenes_det", 8, 55);
  const auto out_a = fresh_dir("acc_det_a");
  const auto out_b = fresh_dir("acc_det_b");
  bool ok = true;
  for (const auto& out : {out_a, out_b}) {
    nlohmann::json m;
    m["seed"] = 17;
    m["scene_dir"] = scenes.string();
    m["output_dir"] = out.string();
    m["situations_per_scene"] = {{"captioning", 2},
                                 {"attr_rel", 4},
                                 {"affordance", 4},
                                 {"planning", 2}};
    const auto manifest = out / "manifest.json";
    std::ofstream(manifest) << m.dump();
    const std::string cmd = std::string(SPARTUN_CLI_PATH) + " generate " +
                            manifest.string() + " > /dev/null";
    ok &= std::system(cmd.c_str()) == 0;
  }
  for (const char* name : {"train.jsonl", "test.jsonl", "stats.json"}) {
    const std::string a = read_file(out_a / name);
    ok &= !a.empty();
    ok &= a == read_file(out_b / name);
  }
  report(4, ok, "two identical offline runs emit byte-identical datasets");
}

// --- criterion 5 -----------------------------------------------------------

struct PhraseHit {
  size_t begin;
  size_t end;
  geom::DirectionBin bin;
};

const std::vector<std::pair<std::string, geom::DirectionBin>>& phrases() {
  static const std::vector<std::pair<std::string, geom::DirectionBin>> p = {
      {"in front of you", geom::DirectionBin::Front},
      {"on your right", geom::DirectionBin::Right},
      {"behind you", geom::DirectionBin::Back},
      {"on your left", geom::DirectionBin::Left},
  };
  return p;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool word_bounded(const std::string& text, size_t pos, size_t len) {
  auto wordc = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
  };
  const bool l = pos == 0 || !wordc(text[pos - 1]);
  const bool r = pos + len >= text.size() || !wordc(text[pos + len]);
  return l && r;
}

bool same_sentence(const std::string& text, size_t a, size_t b) {
  if (a > b) std::swap(a, b);
  for (size_t i = a; i < b && i < text.size(); ++i) {
    if (text[i] == '.' || text[i] == ';' || text[i] == '?' || text[i] == '!') {
      return false;
    }
  }
  return true;
}

void check_fidelity_closure() {
  Rng meta(777);
  size_t examples = 0;
  size_t clean = 0;
  size_t mutants = 0;
  size_t caught = 0;

  for (int s = 0; s < 30; ++s) {
    const Scene scene =
        fixtures::random_scene(meta, "scene_mut" + std::to_string(s));
    for (int sit = 0; sit < 3; ++sit) {
      Rng rng = Rng::derive(9, scene.id, static_cast<uint64_t>(sit));
      Situation situation;
      try {
        situation = sample_situation(scene, rng);
      } catch (const Error&) {
        continue;
      }
      const auto graph = build_situated_graph(scene, situation);

      std::map<std::string, std::set<geom::DirectionBin>> label_bins;
      for (const auto& [bin, records] : graph.buckets) {
        for (const auto& rec : records) label_bins[lower(rec.label)].insert(bin);
      }

      for (TaskKind task : kAllTasks) {
        for (const auto& e : offline_generate(task, scene, graph, rng)) {
          ++examples;
          if (fidelity_check(e, graph).passed) ++clean;

          const std::string answer = lower(e.answer);
          const std::string question = lower(e.question);

          // Count mutation: bump every numeric direction-count answer by one.
          if (question.find("how many") != std::string::npos) {
            DatasetExample m = e;
            if (answer == "none.") {
              m.answer = "1.";
            } else if (!answer.empty() &&
                       std::isdigit(static_cast<unsigned char>(answer[0]))) {
              m.answer = std::to_string(std::stoi(answer) + 1) + ".";
            } else {
              m.answer.clear();
            }
            if (!m.answer.empty()) {
              ++mutants;
              if (!fidelity_check(m, graph).passed) ++caught;
            }
          }

          // Direction mutation: move the single direction phrase to a bin
          // holding none of the labels the answer names.
          std::vector<PhraseHit> hits;
          for (const auto& [pat, bin] : phrases()) {
            size_t pos = 0;
            while ((pos = answer.find(pat, pos)) != std::string::npos) {
              hits.push_back({pos, pos + pat.size(), bin});
              pos += pat.size();
            }
          }
          bool negated = false;
          for (const char* neg : {" no ", " not ", "n't", "none", " any "}) {
            if (answer.find(neg) != std::string::npos) negated = true;
          }
          if (hits.size() != 1 || negated) continue;
          const PhraseHit& hit = hits.front();

          std::set<geom::DirectionBin> blocked{hit.bin};
          bool bound = false;
          for (const auto& [label, bins] : label_bins) {
            if (label == lower(graph.pivot_label)) continue;
            for (const std::string& form : {label, label + "s"}) {
              size_t pos = 0;
              while ((pos = answer.find(form, pos)) != std::string::npos) {
                if (word_bounded(answer, pos, form.size())) {
                  blocked.insert(bins.begin(), bins.end());
                  const size_t gap = pos >= hit.end ? pos - hit.end
                                     : pos + form.size() <= hit.begin
                                         ? hit.begin - pos - form.size()
                                         : 0;
                  if (gap <= 20 &&
                      same_sentence(answer, std::min(pos, hit.begin),
                                    std::max(pos + form.size(), hit.end))) {
                    bound = true;
                  }
                }
                pos += 1;
              }
            }
          }
          if (!bound) continue;
          const geom::DirectionBin all_bins[] = {
              geom::DirectionBin::Front, geom::DirectionBin::Right,
              geom::DirectionBin::Back, geom::DirectionBin::Left};
          for (geom::DirectionBin b : all_bins) {
            if (blocked.count(b)) continue;
            DatasetExample m = e;
            std::string swapped;
            for (const auto& [pat, bin] : phrases()) {
              if (bin == b) swapped = pat;
            }
            m.answer = e.answer.substr(0, hit.begin) + swapped +
                       e.answer.substr(hit.end);
            ++mutants;
            if (!fidelity_check(m, graph).passed) ++caught;
            break;
          }
        }
      }
    }
  }

  const double catch_rate =
      mutants ? static_cast<double>(caught) / static_cast<double>(mutants) : 0.0;
  const bool ok = examples > 300 && clean == examples && mutants >= 100 &&
                  catch_rate >= 0.95;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "%zu/%zu offline examples pass fidelity; %zu/%zu injected "
                "spatial mutations caught (%.1f%%)",
                clean, examples, caught, mutants, catch_rate * 100.0);
  report(5, ok, buf);
}

// --- criterion 6 -----------------------------------------------------------

void check_split_shares() {
  Rng rng(2024);
  std::vector<DatasetExample> corpus;
  for (int i = 0; i < 120; ++i) {
    char id[32];
    std::snprintf(id, sizeof(id), "scene_split_%03d", i);
    DatasetExample base;
    base.scene_id = id;
    base.situation.pivot_id = "sofa_1";
    base.situation.referent_id = "tv_1";
    base.situation.stand = {static_cast<double>(i), 0.0, 0.0};
    base.situation.orientation = geom::yaw_to_quaternion(0.0);
    auto push = [&](TaskKind t, size_t n) {
      for (size_t k = 0; k < n; ++k) {
        DatasetExample e = base;
        e.task = t;
        e.question = std::string(to_string(t)) + std::to_string(k);
        e.answer = "a";
        corpus.push_back(std::move(e));
      }
    };
    push(TaskKind::Captioning, 4 + rng.pick(3));
    push(TaskKind::AttrRel, 30 + rng.pick(15));
    push(TaskKind::Affordance, 15 + rng.pick(10));
    push(TaskKind::Planning, 8 + rng.pick(5));
  }

  const auto [train, test] = split(corpus, SplitSpec::defaults());
  std::set<std::string> train_scenes, test_scenes;
  std::map<TaskKind, double> total, in_test;
  for (const auto& e : corpus) total[e.task] += 1;
  for (const auto& e : train) train_scenes.insert(e.scene_id);
  for (const auto& e : test) {
    test_scenes.insert(e.scene_id);
    in_test[e.task] += 1;
  }
  bool ok = true;
  for (const auto& s : test_scenes) ok &= train_scenes.count(s) == 0;
  double worst = 0.0;
  for (TaskKind t : kAllTasks) {
    const double share = in_test[t] / total[t];
    const double want = SplitSpec::defaults().test_fraction.at(t);
    worst = std::max(worst, std::abs(share - want));
  }
  ok &= worst <= 0.02;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "per-task test shares within %.2f points of the published "
                "fractions; no scene crosses the split", worst * 100.0);
  report(6, ok, buf);
}

// --- criterion 7 -----------------------------------------------------------

align::Matrix accept_random_matrix(std::mt19937_64& eng, size_t r, size_t c,
                                   double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  align::Matrix m(r, c);
  for (double& v : m.data) v = u(eng);
  return m;
}

align::FeatureMatrix accept_random_features(std::mt19937_64& eng, size_t k) {
  std::uniform_real_distribution<double> dist(0.1, 6.0);
  std::uniform_real_distribution<double> ang(-M_PI, M_PI);
  align::FeatureMatrix f;
  for (size_t i = 0; i < k; ++i) f.object_ids.push_back("o_" + std::to_string(i));
  f.data.resize(k * k);
  for (auto& ft : f.data) {
    const double h = ang(eng);
    const double v = ang(eng) / 2.0;
    ft = {dist(eng), std::sin(h), std::cos(h), std::sin(v), std::cos(v)};
  }
  return f;
}

align::AttentionParams accept_random_params(std::mt19937_64& eng, size_t d,
                                            double scale) {
  align::AttentionParams p = align::AttentionParams::zeros(d, 8);
  std::uniform_real_distribution<double> u(-scale, scale);
  for (double& v : p.w_q.data) v = u(eng);
  for (double& v : p.w_k.data) v = u(eng);
  for (double& v : p.w_v.data) v = u(eng);
  for (double& v : p.mlp_w1.data) v = u(eng);
  for (double& v : p.mlp_b1) v = u(eng);
  for (double& v : p.mlp_w2) v = u(eng);
  p.mlp_b2 = u(eng);
  return p;
}

align::Matrix accept_oracle_forward(const align::Matrix& o,
                                    const align::FeatureMatrix& f,
                                    const align::AttentionParams& p,
                                    bool with_bias) {
  const size_t k = o.rows, d = o.cols;
  auto proj = [&](const align::Matrix& w) {
    align::Matrix out(k, d);
    for (size_t i = 0; i < k; ++i)
      for (size_t j = 0; j < d; ++j)
        for (size_t t = 0; t < d; ++t) out.at(i, j) += o.at(i, t) * w.at(t, j);
    return out;
  };
  const align::Matrix q = proj(p.w_q), kk = proj(p.w_k), v = proj(p.w_v);
  align::Matrix s(k, k);
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j < k; ++j) {
      double dot = 0.0;
      for (size_t t = 0; t < d; ++t) dot += q.at(i, t) * kk.at(j, t);
      s.at(i, j) = dot / std::sqrt(static_cast<double>(d));
      if (with_bias) {
        const auto& ft = f.at(i, j);
        const double in[5] = {ft.d, ft.sin_h, ft.cos_h, ft.sin_v, ft.cos_v};
        double b = p.mlp_b2;
        for (size_t u = 0; u < p.hidden(); ++u) {
          double z = p.mlp_b1[u];
          for (size_t a = 0; a < 5; ++a) z += in[a] * p.mlp_w1.at(a, u);
          b += p.mlp_w2[u] * std::tanh(z);
        }
        s.at(i, j) += b;
      }
    }
  }
  align::Matrix out(k, d);
  for (size_t i = 0; i < k; ++i) {
    double mx = s.at(i, 0);
    for (size_t j = 1; j < k; ++j) mx = std::max(mx, s.at(i, j));
    double z = 0.0;
    std::vector<double> e(k);
    for (size_t j = 0; j < k; ++j) {
      e[j] = std::exp(s.at(i, j) - mx);
      z += e[j];
    }
    for (size_t j = 0; j < k; ++j)
      for (size_t t = 0; t < d; ++t) out.at(i, t) += e[j] / z * v.at(j, t);
  }
  return out;
}

void check_alignment_numerics() {
  const auto t0 = Clock::now();
  bool ok = true;

  std::mt19937_64 eng(20260824);
  for (int trial = 0; trial < 20; ++trial) {
    const size_t k = 1 + eng() % 6;
    const size_t d = 1 + eng() % 8;
    const auto o = accept_random_matrix(eng, k, d, 1.5);
    const auto f = accept_random_features(eng, k);
    const auto p = accept_random_params(eng, d, 0.8);
    const auto got = align::spatial_attention_forward(o, f, p);
    const auto want = accept_oracle_forward(o, f, p, true);
    for (size_t i = 0; i < got.data.size(); ++i) {
      ok &= std::abs(got.data[i] - want.data[i]) < 1e-12;
    }
  }

  {
    const size_t k = 5, d = 4;
    const auto o = accept_random_matrix(eng, k, d, 1.0);
    const auto f = accept_random_features(eng, k);
    auto p = accept_random_params(eng, d, 0.9);
    p.mlp_w1 = align::Matrix(5, 8);
    p.mlp_b1.assign(8, 0.0);
    p.mlp_w2.assign(8, 0.0);
    p.mlp_b2 = 0.0;
    const auto got = align::spatial_attention_forward(o, f, p);
    const auto plain = accept_oracle_forward(o, f, p, false);
    for (size_t i = 0; i < got.data.size(); ++i) {
      ok &= std::abs(got.data[i] - plain.data[i]) < 1e-12;
    }
  }

  double worst = 0.0;
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    std::mt19937_64 g(seed * 7919);
    const size_t k = 2 + g() % 4;
    const size_t d = 2 + g() % 5;
    const auto o = accept_random_matrix(g, k, d, 1.0);
    const auto f = accept_random_features(g, k);
    const auto p = accept_random_params(g, d, 0.6);
    const auto w = accept_random_matrix(g, k, d, 1.0);
    worst = std::max(worst, align::grad_check(o, f, p, w));
  }
  ok &= worst < 1e-5;

  const double dt = seconds_since(t0);
  ok &= dt < 30.0;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "attention matches the brute-force oracle; worst gradient "
                "error %.2e over 20 seeds (%.1fs)", worst, dt);
  report(7, ok, buf);
}

// --- criterion 8 -----------------------------------------------------------

void check_metric_sanity() {
  bool ok = true;
  const auto self = eval::tokenize("turn left at the red table");
  ok &= eval::bleu4(self, self) == 1.0;
  ok &= eval::rouge_l(self, self) == 1.0;
  ok &= eval::bleu4(eval::tokenize("alpha beta gamma delta"),
                    eval::tokenize("one two three four")) == 0.0;
  ok &= eval::rouge_l(eval::tokenize("alpha beta"),
                      eval::tokenize("one two")) == 0.0;

  // Hand-computed cases.
  const double bleu = eval::bleu4(eval::tokenize("the cat sat on the mat"),
                                  eval::tokenize("the cat sat on a mat"));
  ok &= std::abs(bleu - std::pow(1.0 / 12.0, 0.25)) < 1e-9;
  const double p = 2.0 / 3.0, r = 0.5, b2 = 1.44;
  const double rouge = eval::rouge_l(eval::tokenize("the cat sat"),
                                     eval::tokenize("cat sat on mat"));
  ok &= std::abs(rouge - (1.0 + b2) * p * r / (r + b2 * p)) < 1e-9;

  // Synthetic bias file: 97 of 100 direction answers say "left".
  const auto path = fs::temp_directory_path() / "acc_bias.jsonl";
  {
    std::ofstream out(path);
    for (int i = 0; i < 100; ++i) {
      nlohmann::json j;
      j["key"] = "k" + std::to_string(i);
      j["question"] = "Which direction should I turn?";
      j["prediction"] = i < 97 ? "Turn left." : "Turn right.";
      j["reference"] = "left";
      out << j.dump() << "\n";
    }
  }
  const auto dist = eval::direction_distribution(
      eval::load_predictions(path.string()));
  ok &= std::abs(dist.fractions.at("left") - 0.97) < 1e-12;
  report(8, ok,
         "metric edge values, hand-computed scores, and the 0.97 left-bias "
         "audit all match");
}

// --- criterion 9 -----------------------------------------------------------

void check_prompt_fidelity() {
  bool ok = true;
  const PromptLibrary prompts = PromptLibrary::load();
  const Scene scene = fixtures::living_room();
  Rng rng = Rng::derive(1, scene.id, 0);
  const Situation sit = sample_situation(scene, rng);
  const auto graph = build_situated_graph(scene, sit);

  auto contains = [&ok](const std::string& hay, const std::string& needle) {
    if (hay.find(needle) == std::string::npos) ok = false;
  };

  const auto spa_plan =
      render_prompt(TaskKind::Planning, scene, graph, PromptStyle::Spa, prompts);
  contains(spa_plan.user_text, "generate 6 meaningful question-answer pairs");
  contains(spa_plan.user_text,
           "compose a scene graph in JSON format with four keys: \"left\", "
           "\"right\", \"front\", \"backwards\"");
  contains(spa_plan.system_text,
           "You are an AI visual assistant situated in a 3D scene.");

  const auto spa_attr =
      render_prompt(TaskKind::AttrRel, scene, graph, PromptStyle::Spa, prompts);
  contains(spa_attr.user_text,
           "generate at least 10 meaningful question-answer pairs");
  contains(spa_attr.user_text,
           "Q: <question> T: <queried object_id(s)> A: <Answer>");

  const auto spa_capt = render_prompt(TaskKind::Captioning, scene, graph,
                                      PromptStyle::Spa, prompts);
  contains(spa_capt.user_text, "ON MY LEFT/RIGHT/FRONT/BACK");
  contains(spa_capt.user_text,
           "following a 360 degree clockwise rotation from your current "
           "orientation");

  const auto spa_aff = render_prompt(TaskKind::Affordance, scene, graph,
                                     PromptStyle::Spa, prompts);
  contains(spa_aff.user_text,
           "Ask questions about object affordance and object utility based on "
           "common sense");

  const auto cord = render_prompt(TaskKind::AttrRel, scene, graph,
                                  PromptStyle::Cord, prompts);
  contains(cord.user_text, "[315-360,0-45] is defined as Front");
  contains(cord.user_text, "[45-135] is RIGHT, [135-225] is BACK");
  report(9, ok, "rendered prompts carry the stored instruction text verbatim");
}

// --- criterion 10 ----------------------------------------------------------

void check_scale_smoke() {
  const auto t0 = Clock::now();
  const auto scenes = write_scene_dir("acc_scenes_scale", 20, 7);
  const auto out = fresh_dir("acc_scale_out");
  nlohmann::json m;
  m["seed"] = 3;
  m["scene_dir"] = scenes.string();
  m["output_dir"] = out.string();
  const auto result = run_generate(RunManifest::from_json(m.dump()));
  const double dt = seconds_since(t0);

  std::map<TaskKind, double> counts;
  double total = 0.0;
  for (const char* name : {"train.jsonl", "test.jsonl"}) {
    for (const auto& e : load_jsonl((out / name).string())) {
      counts[e.task] += 1;
      total += 1;
    }
  }
  bool ok = total > 500 && dt < 60.0;
  ok &= total ==
        static_cast<double>(result.train_examples + result.test_examples);

  // Published per-task corpus proportions.
  const std::map<TaskKind, double> want = {
      {TaskKind::Captioning, 9717.0 / 141479.0},
      {TaskKind::AttrRel, 69422.0 / 141479.0},
      {TaskKind::Affordance, 40087.0 / 141479.0},
      {TaskKind::Planning, 22253.0 / 141479.0},
  };
  double worst_rel = 0.0;
  for (const auto& [task, frac] : want) {
    const double share = counts[task] / total;
    worst_rel = std::max(worst_rel, std::abs(share - frac) / frac);
  }
  ok &= worst_rel <= 0.25;
  ok &= counts[TaskKind::AttrRel] > counts[TaskKind::Affordance];
  ok &= counts[TaskKind::AttrRel] > counts[TaskKind::Planning];
  for (TaskKind t : {TaskKind::AttrRel, TaskKind::Affordance,
                     TaskKind::Planning}) {
    ok &= counts[TaskKind::Captioning] < counts[t];
  }
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "20-scene offline run: %.0f examples in %.1fs, worst task-"
                "share deviation %.0f%% of the corpus proportions",
                total, dt, worst_rel * 100.0);
  report(10, ok, buf);
}

}  // namespace

int main() {
  check_direction_partition();
  check_passby_oracle();
  check_rigid_invariance();
  check_determinism_via_cli();
  check_fidelity_closure();
  check_split_shares();
  check_alignment_numerics();
  check_metric_sanity();
  check_prompt_fidelity();
  check_scale_smoke();
  if (g_failures) {
    std::printf("%d criteria failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
