#include "nounforge/evaluation.hpp"

#include <istream>

#include "nounforge/errors.hpp"
#include "text_util.hpp"

namespace nounforge {

GoldItem parse_gold_line(std::string_view line, std::size_t line_no) {
  auto fields = detail::split_tabs(line);
  if (fields.size() != 2) throw ParseError(line_no, "expected '<words>\\t<bracket>'");
  GoldItem item{{}, BinaryParse::leaf(1), line_no};
  for (const auto& w : detail::split_whitespace(fields[0])) item.words.push_back(normalize_word(w));
  const auto n = item.words.size();
  if (n < 3) throw ParseError(line_no, "gold items need at least 3 words, got " + std::to_string(n));

  std::string_view bracket = fields[1];
  if (bracket == "L" || bracket == "R") {
    if (n != 3) throw ParseError(line_no, "L/R shorthand only applies to three-word compounds");
    item.gold = bracket == "L" ? BinaryParse::left_branching(3)
                               : BinaryParse::join(BinaryParse::leaf(1),
                                                   BinaryParse::join(BinaryParse::leaf(2), BinaryParse::leaf(3)));
    return item;
  }
  BracketedCompound parsed = [&] {
    try {
      return parse_bracket_text(bracket);
    } catch (const ParseError& e) {
      throw ParseError(line_no, e.what());
    }
  }();
  if (parsed.words.size() != n) throw ParseError(line_no, "bracket covers a different number of words");
  for (std::size_t i = 0; i < n; ++i) {
    if (normalize_word(parsed.words[i]) != item.words[i]) {
      throw ParseError(line_no, "bracket word '" + parsed.words[i] + "' does not match '" + item.words[i] + "'");
    }
  }
  item.gold = std::move(parsed.parse);
  return item;
}

GoldSet load_gold(std::istream& source) {
  GoldSet set;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(source, raw)) {
    ++line_no;
    auto line = detail::strip_cr(raw);
    if (detail::is_skippable(line)) continue;
    try {
      set.items.push_back(parse_gold_line(line, line_no));
    } catch (const ParseError& e) {
      set.errors.push_back({line_no, e.what()});
    } catch (const DomainError& e) {
      set.errors.push_back({line_no, "line " + std::to_string(line_no) + ": " + e.what()});
    }
  }
  return set;
}

namespace {

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

nlohmann::ordered_json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

std::optional<double> EvalReport::accuracy() const { return ratio(correct, total); }
std::optional<double> EvalReport::baseline_accuracy() const { return ratio(baseline_correct, total); }
std::optional<double> EvalReport::link_accuracy() const { return ratio(links_correct, links_total); }

EvalReport evaluate(const LinkModel& model, const GoldSet& gold, const AnalyzeOptions& options) {
  EvalReport report;
  report.errors = gold.errors;
  for (const auto& item : gold.items) {
    std::vector<ScoredAnalysis> ranked;
    try {
      ranked = analyze(model, item.words, options);
    } catch (const DomainError& e) {
      report.errors.push_back({item.line, "line " + std::to_string(item.line) + ": " + e.what()});
      continue;
    }
    EvalItem out;
    out.line = item.line;
    out.words = item.words;
    out.gold = bracket_text(item.gold, item.words);
    out.predicted = bracket_text(ranked.front().parse, item.words);
    out.correct = ranked.front().parse == item.gold;
    out.gold_left_branching = item.gold.is_left_branching();
    out.score_gap = ranked.size() > 1 ? ranked[0].log_score - ranked[1].log_score : 0.0;

    const auto gold_parents = parse_to_structure(item.gold).parents();
    const auto& predicted_parents = ranked.front().structure.parents();
    out.links_total = gold_parents.size();
    for (std::size_t i = 0; i < gold_parents.size(); ++i) out.links_correct += gold_parents[i] == predicted_parents[i];

    ++report.total;
    report.correct += out.correct;
    report.baseline_correct += out.gold_left_branching;
    report.links_correct += out.links_correct;
    report.links_total += out.links_total;
    report.items.push_back(std::move(out));
  }
  return report;
}

nlohmann::ordered_json to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["total"] = report.total;
  j["correct"] = report.correct;
  j["accuracy"] = optional_number(report.accuracy());
  j["baseline_correct"] = report.baseline_correct;
  j["baseline_accuracy"] = optional_number(report.baseline_accuracy());
  j["link_accuracy"] = optional_number(report.link_accuracy());
  j["items"] = nlohmann::ordered_json::array();
  for (const auto& item : report.items) {
    nlohmann::ordered_json r;
    r["line"] = item.line;
    r["words"] = item.words;
    r["gold"] = item.gold;
    r["predicted"] = item.predicted;
    r["correct"] = item.correct;
    r["baseline_correct"] = item.gold_left_branching;
    r["score_gap"] = item.score_gap;
    r["links_correct"] = item.links_correct;
    r["links_total"] = item.links_total;
    j["items"].push_back(std::move(r));
  }
  j["errors"] = nlohmann::ordered_json::array();
  for (const auto& e : report.errors) j["errors"].push_back({{"line", e.line}, {"error", e.message}});
  return j;
}

nlohmann::ordered_json analysis_record(std::span<const std::string> words, std::span<const ScoredAnalysis> ranked,
                                       std::size_t top_k) {
  nlohmann::ordered_json j;
  j["words"] = std::vector<std::string>(words.begin(), words.end());
  j["analyses"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < ranked.size() && i < top_k; ++i) {
    j["analyses"].push_back({{"bracket", bracket_text(ranked[i].parse, words)},
                             {"score", ranked[i].score},
                             {"log_score", ranked[i].log_score}});
  }
  j["chosen"] = ranked.empty() ? nlohmann::ordered_json(nullptr)
                               : nlohmann::ordered_json(bracket_text(ranked.front().parse, words));
  return j;
}

}  // namespace nounforge
