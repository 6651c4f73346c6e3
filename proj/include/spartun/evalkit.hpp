#pragma once

#include <map>
#include <string>
#include <vector>

namespace spartun::eval {

struct PredictionRecord {
  std::string key;  // unique per file
  std::string question;
  std::string prediction;
  std::string reference;
  // Externally computed metric values merged verbatim into reports.
  std::map<std::string, double> external_scores;
};

struct DirectionDistribution {
  std::map<std::string, size_t> counts;     // left/right/forward/backward/other
  std::map<std::string, double> fractions;  // empty when undefined
  size_t total = 0;
  bool undefined = false;  // no record matched the question filter
};

struct EvalReport {
  size_t records = 0;
  double exact_match = 0.0;
  double bleu4 = 0.0;
  double rouge_l = 0.0;
  std::map<std::string, double> external_scores;  // averaged where present
  DirectionDistribution directions;
};

// Lowercase, strip punctuation, collapse whitespace, drop articles a/an/the.
std::string normalize(const std::string& text);

// Lowercase, split on non-alphanumeric runs.
std::vector<std::string> tokenize(const std::string& text);

int exact_match(const std::string& pred, const std::string& ref);

// Unsmoothed BLEU-4: geometric mean of clipped 1..4-gram precisions times
// the brevity penalty; zero when any precision is zero.
double bleu4(const std::vector<std::string>& pred,
             const std::vector<std::string>& ref);

// LCS F-measure. beta > 1 favors recall.
double rouge_l(const std::vector<std::string>& pred,
               const std::vector<std::string>& ref, double beta = 1.2);

DirectionDistribution direction_distribution(
    const std::vector<PredictionRecord>& records,
    const std::string& question_prefix = "which direction");

std::vector<PredictionRecord> load_predictions(const std::string& path);

EvalReport evaluate(const std::vector<PredictionRecord>& records,
                    const std::string& direction_prefix = "which direction");

std::string report_to_json(const EvalReport& report);

}  // namespace spartun::eval
