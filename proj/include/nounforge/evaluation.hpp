#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nounforge/analyzer.hpp"

namespace nounforge {

// A hand-bracketed compound from a gold file.
struct GoldItem {
  std::vector<std::string> words;
  BinaryParse gold;
  std::size_t line = 0;
};

struct LineError {
  std::size_t line = 0;
  std::string message;
};

struct GoldSet {
  std::vector<GoldItem> items;
  std::vector<LineError> errors;
};

// `<w1> <w2> ... <wn>\t<bracket>` where bracket is bracket text over the same
// words, or `L` / `R` for a three-word compound. Requires n >= 3.
// Throws ParseError tagged with line_no.
GoldItem parse_gold_line(std::string_view line, std::size_t line_no);

// Malformed lines are collected in errors and skipped.
GoldSet load_gold(std::istream& source);

struct EvalItem {
  std::size_t line = 0;
  std::vector<std::string> words;
  std::string gold;
  std::string predicted;
  bool correct = false;
  bool gold_left_branching = false;
  // log score of the best analysis minus that of the runner-up
  double score_gap = 0.0;
  std::size_t links_correct = 0;
  std::size_t links_total = 0;
};

struct EvalReport {
  std::size_t total = 0;
  std::size_t correct = 0;
  std::size_t baseline_correct = 0;
  std::size_t links_correct = 0;
  std::size_t links_total = 0;
  std::vector<EvalItem> items;
  std::vector<LineError> errors;

  std::optional<double> accuracy() const;
  std::optional<double> baseline_accuracy() const;
  std::optional<double> link_accuracy() const;
};

// Exact-tree accuracy of the top analysis against gold, with the
// always-left-branching baseline scored in the same pass. Items the analyzer
// rejects are moved to errors.
EvalReport evaluate(const LinkModel& model, const GoldSet& gold, const AnalyzeOptions& options = {});

nlohmann::ordered_json to_json(const EvalReport& report);

// One analyze record: words, up to top_k ranked brackets, chosen bracket.
nlohmann::ordered_json analysis_record(std::span<const std::string> words,
                                       std::span<const ScoredAnalysis> ranked, std::size_t top_k);

}  // namespace nounforge
