#include "nounforge/analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nounforge/errors.hpp"

namespace nounforge {

Compound Compound::resolve(const Thesaurus& thesaurus, std::span<const std::string> words,
                           UnknownWordPolicy policy) {
  if (words.empty()) throw DomainError("compound has no words");
  Compound c;
  for (const auto& raw : words) {
    std::string w = normalize_word(raw);
    std::vector<Sense> senses;
    if (auto known = thesaurus.find_word(w)) {
      for (CategoryIndex s : thesaurus.categories_of(known->id)) senses.push_back({s, sense_prior(thesaurus, w, s)});
    } else if (policy == UnknownWordPolicy::kSingleton) {
      senses.push_back({kUnknownCategory, 1.0});
    } else {
      throw DomainError("unknown word: '" + w + "'");
    }
    c.words_.push_back(std::move(w));
    c.senses_.push_back(std::move(senses));
  }
  return c;
}

namespace {

void check_sizes(const Compound& compound, const ModStructure& structure) {
  if (compound.size() != structure.size()) {
    throw DomainError("structure has " + std::to_string(structure.size()) + " positions, compound has " +
                      std::to_string(compound.size()) + " words");
  }
}

double log_sum_exp(const std::vector<double>& terms) {
  double top = -std::numeric_limits<double>::infinity();
  for (double t : terms) top = std::max(top, t);
  if (!std::isfinite(top)) return top;
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - top);
  return top + std::log(sum);
}

}  // namespace

double score_structure_bruteforce(const LinkModel& model, const Compound& compound, const ModStructure& structure) {
  check_sizes(compound, structure);
  const int n = compound.size();
  const auto links = structure.links();
  std::vector<std::size_t> pick(static_cast<std::size_t>(n), 0);
  double total = 0.0;
  for (;;) {
    double term = 1.0;
    for (Position j = 1; j <= n; ++j) term *= compound.senses(j)[pick[static_cast<std::size_t>(j - 1)]].prior;
    for (auto [i, j] : links) {
      term *= model.link_probability(compound.senses(i)[pick[static_cast<std::size_t>(i - 1)]].category,
                                     compound.senses(j)[pick[static_cast<std::size_t>(j - 1)]].category);
    }
    total += term;

    int d = 0;
    while (d < n) {
      auto& digit = pick[static_cast<std::size_t>(d)];
      if (++digit < compound.senses(d + 1).size()) break;
      digit = 0;
      ++d;
    }
    if (d == n) break;
  }
  return total / static_cast<double>(choice(structure));
}

double score_structure_dp(const LinkModel& model, const Compound& compound, const ModStructure& structure) {
  check_sizes(compound, structure);
  const int n = compound.size();
  // message[j-1][k]: mass of the subtree rooted at j given j takes its k-th sense
  std::vector<std::vector<double>> message(static_cast<std::size_t>(n));
  for (Position j = 1; j <= n; ++j) {
    const auto& senses = compound.senses(j);
    auto& msg = message[static_cast<std::size_t>(j - 1)];
    msg.resize(senses.size());
    for (std::size_t k = 0; k < senses.size(); ++k) {
      double value = senses[k].prior;
      for (Position child : structure.children(j)) {
        const auto& child_senses = compound.senses(child);
        const auto& child_msg = message[static_cast<std::size_t>(child - 1)];
        double inflow = 0.0;
        for (std::size_t c = 0; c < child_senses.size(); ++c) {
          inflow += model.link_probability(child_senses[c].category, senses[k].category) * child_msg[c];
        }
        value *= inflow;
      }
      msg[k] = value;
    }
  }
  double total = 0.0;
  for (double v : message.back()) total += v;
  return total / static_cast<double>(choice(structure));
}

double log_score_structure_dp(const LinkModel& model, const Compound& compound, const ModStructure& structure) {
  check_sizes(compound, structure);
  const int n = compound.size();
  std::vector<std::vector<double>> message(static_cast<std::size_t>(n));
  std::vector<double> terms;
  for (Position j = 1; j <= n; ++j) {
    const auto& senses = compound.senses(j);
    auto& msg = message[static_cast<std::size_t>(j - 1)];
    msg.resize(senses.size());
    for (std::size_t k = 0; k < senses.size(); ++k) {
      double value = std::log(senses[k].prior);
      for (Position child : structure.children(j)) {
        const auto& child_senses = compound.senses(child);
        const auto& child_msg = message[static_cast<std::size_t>(child - 1)];
        terms.clear();
        for (std::size_t c = 0; c < child_senses.size(); ++c) {
          terms.push_back(std::log(model.link_probability(child_senses[c].category, senses[k].category)) +
                          child_msg[c]);
        }
        value += log_sum_exp(terms);
      }
      msg[k] = value;
    }
  }
  return log_sum_exp(message.back()) - std::log(static_cast<double>(choice(structure)));
}

std::vector<ScoredAnalysis> analyze(const LinkModel& model, const Compound& compound, const AnalyzeOptions& options) {
  const int n = compound.size();
  if (n > options.max_words) {
    throw DomainError("compound has " + std::to_string(n) + " words; the limit is " +
                      std::to_string(options.max_words));
  }
  auto structures = enumerate_structures(n);

  std::vector<double> linear;
  bool use_log = n > 8;
  if (!use_log) {
    for (const auto& s : structures) {
      double v = score_structure_dp(model, compound, s);
      if (v < std::numeric_limits<double>::min()) use_log = true;
      linear.push_back(v);
    }
  }

  const double log_classes = std::log(static_cast<double>(model.thesaurus().class_count()));
  std::vector<ScoredAnalysis> out;
  out.reserve(structures.size());
  for (std::size_t i = 0; i < structures.size(); ++i) {
    double log_score = use_log ? log_score_structure_dp(model, compound, structures[i]) : std::log(linear[i]);
    double score = use_log ? std::exp(log_score) : linear[i];
    if (options.include_class_constant) {
      log_score += n * log_classes;
      score = use_log ? std::exp(log_score) : score * std::pow(static_cast<double>(model.thesaurus().class_count()), n);
    }
    BinaryParse parse = structure_to_parse(structures[i]);
    out.push_back(ScoredAnalysis{std::move(structures[i]), std::move(parse), score, log_score});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ScoredAnalysis& a, const ScoredAnalysis& b) { return a.log_score > b.log_score; });
  return out;
}

std::vector<ScoredAnalysis> analyze(const LinkModel& model, std::span<const std::string> words,
                                    const AnalyzeOptions& options) {
  return analyze(model, Compound::resolve(model.thesaurus(), words, options.unknown_words), options);
}

}  // namespace nounforge
