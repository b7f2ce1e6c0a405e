#pragma once

#include <span>
#include <string>
#include <vector>

#include "nounforge/lexicon.hpp"
#include "nounforge/model.hpp"
#include "nounforge/structures.hpp"

namespace nounforge {

enum class UnknownWordPolicy {
  kSingleton,  // an unknown word forms its own category "UNK:<word>"
  kError,
};

struct Sense {
  CategoryIndex category;  // kUnknownCategory for an unknown-word singleton
  double prior;            // P(category | word)
};

// The words of a compound resolved to their candidate senses.
class Compound {
 public:
  // Throws DomainError for an empty word list, or for an unknown word under
  // UnknownWordPolicy::kError.
  static Compound resolve(const Thesaurus& thesaurus, std::span<const std::string> words,
                          UnknownWordPolicy policy = UnknownWordPolicy::kSingleton);

  int size() const noexcept { return static_cast<int>(words_.size()); }
  const std::vector<std::string>& words() const noexcept { return words_; }
  // Senses of the word at 1-based position i.
  const std::vector<Sense>& senses(Position i) const { return senses_.at(static_cast<std::size_t>(i - 1)); }

 private:
  std::vector<std::string> words_;
  std::vector<std::vector<Sense>> senses_;
};

// (1/choice(s)) * sum over all sense assignments of
//   prod_{links i->j} P(s_i -> s_j) * prod_j P(s_j | w_j)
// The |S|^n factor common to every structure of the string is left out.
// Exponential in n; kept as the reference for the factorized versions.
double score_structure_bruteforce(const LinkModel& model, const Compound& compound, const ModStructure& structure);

// Same value by leaf-to-root message passing.
double score_structure_dp(const LinkModel& model, const Compound& compound, const ModStructure& structure);

// log of score_structure_dp, accumulated in log space (-inf for a zero score).
double log_score_structure_dp(const LinkModel& model, const Compound& compound, const ModStructure& structure);

struct ScoredAnalysis {
  ModStructure structure;
  BinaryParse parse;
  double score;
  double log_score;
};

struct AnalyzeOptions {
  UnknownWordPolicy unknown_words = UnknownWordPolicy::kSingleton;
  int max_words = 8;
  // Multiply every score by |S|^n, turning relative scores into the full
  // posterior numerator.
  bool include_class_constant = false;
};

// One analysis per structure, best first. Exact ties keep canonical
// enumeration order, which favours left-branching parses.
// Throws DomainError when the compound exceeds options.max_words.
std::vector<ScoredAnalysis> analyze(const LinkModel& model, const Compound& compound,
                                    const AnalyzeOptions& options = {});
std::vector<ScoredAnalysis> analyze(const LinkModel& model, std::span<const std::string> words,
                                    const AnalyzeOptions& options = {});

}  // namespace nounforge
