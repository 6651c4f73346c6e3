#include "spartun/evalkit.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "spartun/errors.hpp"

namespace spartun::eval {

using nlohmann::json;
using nlohmann::ordered_json;

std::string normalize(const std::string& text) {
  std::string lowered;
  lowered.reserve(text.size());
  for (char ch : text) {
    const unsigned char c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      lowered.push_back(static_cast<char>(std::tolower(c)));
    } else {
      lowered.push_back(' ');
    }
  }
  std::istringstream ss(lowered);
  std::string word;
  std::string out;
  while (ss >> word) {
    if (word == "a" || word == "an" || word == "the") continue;
    if (!out.empty()) out.push_back(' ');
    out += word;
  }
  return out;
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char ch : text) {
    const unsigned char c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      tokens.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(cur);
  return tokens;
}

int exact_match(const std::string& pred, const std::string& ref) {
  return normalize(pred) == normalize(ref) ? 1 : 0;
}

namespace {

std::map<std::string, size_t> ngram_counts(const std::vector<std::string>& toks,
                                           size_t n) {
  std::map<std::string, size_t> counts;
  if (toks.size() < n) return counts;
  for (size_t i = 0; i + n <= toks.size(); ++i) {
    std::string key;
    for (size_t j = 0; j < n; ++j) {
      key += toks[i + j];
      key.push_back('\x1f');
    }
    counts[key] += 1;
  }
  return counts;
}

}  // namespace

double bleu4(const std::vector<std::string>& pred,
             const std::vector<std::string>& ref) {
  if (pred.empty() || ref.empty()) return 0.0;
  double log_sum = 0.0;
  for (size_t n = 1; n <= 4; ++n) {
    const auto pc = ngram_counts(pred, n);
    const auto rc = ngram_counts(ref, n);
    size_t total = 0;
    size_t clipped = 0;
    for (const auto& [gram, count] : pc) {
      total += count;
      auto it = rc.find(gram);
      if (it != rc.end()) clipped += std::min(count, it->second);
    }
    if (total == 0 || clipped == 0) return 0.0;
    log_sum += std::log(static_cast<double>(clipped) /
                        static_cast<double>(total));
  }
  double bp = 1.0;
  if (pred.size() < ref.size()) {
    bp = std::exp(1.0 - static_cast<double>(ref.size()) /
                            static_cast<double>(pred.size()));
  }
  return bp * std::exp(log_sum / 4.0);
}

double rouge_l(const std::vector<std::string>& pred,
               const std::vector<std::string>& ref, double beta) {
  if (pred.empty() || ref.empty()) return 0.0;
  const size_t m = pred.size();
  const size_t n = ref.size();
  std::vector<size_t> prev(n + 1, 0);
  std::vector<size_t> cur(n + 1, 0);
  for (size_t i = 1; i <= m; ++i) {
    for (size_t j = 1; j <= n; ++j) {
      if (pred[i - 1] == ref[j - 1]) {
        cur[j] = prev[j - 1] + 1;
      } else {
        cur[j] = std::max(prev[j], cur[j - 1]);
      }
    }
    std::swap(prev, cur);
  }
  const double lcs = static_cast<double>(prev[n]);
  if (lcs == 0.0) return 0.0;
  const double p = lcs / static_cast<double>(m);
  const double r = lcs / static_cast<double>(n);
  const double b2 = beta * beta;
  return (1.0 + b2) * p * r / (r + b2 * p);
}

DirectionDistribution direction_distribution(
    const std::vector<PredictionRecord>& records,
    const std::string& question_prefix) {
  std::string prefix;
  for (char c : question_prefix) {
    prefix.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }

  DirectionDistribution dist;
  static const std::set<std::string> keywords = {"left", "right", "forward",
                                                 "backward"};
  for (const auto& rec : records) {
    std::string q;
    for (char c : rec.question) {
      q.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (q.compare(0, prefix.size(), prefix) != 0) continue;

    std::string bucket = "other";
    for (const auto& tok : tokenize(rec.prediction)) {
      if (keywords.count(tok)) {
        bucket = tok;
        break;
      }
      // Common synonyms map onto the audit's canonical axes.
      if (tok == "front" || tok == "forwards" || tok == "straight") {
        bucket = "forward";
        break;
      }
      if (tok == "back" || tok == "backwards" || tok == "behind") {
        bucket = "backward";
        break;
      }
    }
    dist.counts[bucket] += 1;
    dist.total += 1;
  }
  if (dist.total == 0) {
    dist.undefined = true;
    return dist;
  }
  for (const auto& [bucket, count] : dist.counts) {
    dist.fractions[bucket] =
        static_cast<double>(count) / static_cast<double>(dist.total);
  }
  return dist;
}

std::vector<PredictionRecord> load_predictions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open prediction file: " + path);
  std::vector<PredictionRecord> out;
  std::set<std::string> seen;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError("bad JSON on line " + std::to_string(lineno) + ": " +
                       e.what());
    }
    PredictionRecord rec;
    try {
      rec.key = j.at("key").get<std::string>();
      rec.question = j.value("question", "");
      rec.prediction = j.at("prediction").get<std::string>();
      rec.reference = j.at("reference").get<std::string>();
    } catch (const json::exception& e) {
      throw SchemaError("line " + std::to_string(lineno) + ": " + e.what());
    }
    if (j.contains("external_scores")) {
      for (const auto& [name, value] : j.at("external_scores").items()) {
        rec.external_scores[name] = value.get<double>();
      }
    }
    if (!seen.insert(rec.key).second) {
      throw ValidationError("duplicate prediction key '" + rec.key +
                            "' on line " + std::to_string(lineno));
    }
    out.push_back(std::move(rec));
  }
  return out;
}

EvalReport evaluate(const std::vector<PredictionRecord>& records,
                    const std::string& direction_prefix) {
  EvalReport report;
  report.records = records.size();
  std::map<std::string, std::pair<double, size_t>> external;
  for (const auto& rec : records) {
    report.exact_match += exact_match(rec.prediction, rec.reference);
    const auto pt = tokenize(rec.prediction);
    const auto rt = tokenize(rec.reference);
    report.bleu4 += bleu4(pt, rt);
    report.rouge_l += rouge_l(pt, rt);
    for (const auto& [name, value] : rec.external_scores) {
      external[name].first += value;
      external[name].second += 1;
    }
  }
  if (!records.empty()) {
    const double n = static_cast<double>(records.size());
    report.exact_match /= n;
    report.bleu4 /= n;
    report.rouge_l /= n;
  }
  for (const auto& [name, sum_count] : external) {
    report.external_scores[name] =
        sum_count.first / static_cast<double>(sum_count.second);
  }
  report.directions = direction_distribution(records, direction_prefix);
  return report;
}

std::string report_to_json(const EvalReport& report) {
  ordered_json j;
  j["records"] = report.records;
  j["exact_match"] = report.exact_match;
  j["bleu4"] = report.bleu4;
  j["rouge_l"] = report.rouge_l;
  if (!report.external_scores.empty()) {
    j["external_scores"] = report.external_scores;
  }
  ordered_json dir;
  dir["total"] = report.directions.total;
  dir["undefined"] = report.directions.undefined;
  dir["counts"] = report.directions.counts;
  dir["fractions"] = report.directions.fractions;
  j["direction_distribution"] = std::move(dir);
  return j.dump(2) + "\n";
}

}  // namespace spartun::eval
