#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nounforge/lexicon.hpp"

namespace nounforge {

// Sparse token counts of two-word compounds "w1 w2". Zero counts are never
// stored and total() always equals the sum of the entries.
class PairCounts {
 public:
  using Key = std::pair<std::string, std::string>;

  // Words are normalized. Adding zero is a no-op.
  void add(std::string_view w1, std::string_view w2, std::uint64_t count);
  // Sum merge; associative and commutative.
  void merge(const PairCounts& other);

  std::uint64_t count(std::string_view w1, std::string_view w2) const;
  std::uint64_t total() const noexcept { return total_; }
  std::size_t size() const noexcept { return counts_.size(); }
  bool empty() const noexcept { return counts_.empty(); }
  const std::map<Key, std::uint64_t>& entries() const noexcept { return counts_; }

  // `<w1>\t<w2>\t<count>` sorted by key; ingest_pair_counts reads it back.
  void dump(std::ostream& out) const;
  std::string digest() const;

  friend bool operator==(const PairCounts&, const PairCounts&) = default;

 private:
  std::map<Key, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

// Reads `<w1>\t<w2>\t<count>` lines ('#' comments and blank lines skipped).
// Duplicate keys sum. Throws ParseError on a malformed line or bad count.
PairCounts ingest_pair_counts(std::istream& source);

// Whitespace split; the characters . , ; : ! ? ( ) [ ] { } " become their own
// tokens so that they break compound runs.
std::vector<std::string> tokenize_corpus_line(std::string_view line);

// Counts every maximal run of exactly two consecutive in-thesaurus tokens.
PairCounts extract_pairs(std::span<const std::string> tokens, const Thesaurus& thesaurus);

// Runs extract_pairs over each line of a corpus. Lines are split into up to
// `shards` contiguous blocks counted concurrently, then merged.
PairCounts count_corpus(std::istream& source, const Thesaurus& thesaurus, unsigned shards = 1);

// sum_{w1 in s1, w2 in s2} count(w1 w2) / (ambiguity(w1) * ambiguity(w2)).
// Throws DomainError for a category index outside the thesaurus.
double raw_affinity(const PairCounts& counts, const Thesaurus& thesaurus, CategoryIndex s1,
                    CategoryIndex s2);

// Category used by the analyzer for words outside the thesaurus.
inline constexpr CategoryIndex kUnknownCategory = std::numeric_limits<CategoryIndex>::max();

// Source of link probabilities P(modifier -> head | head is modified).
class LinkModel {
 public:
  virtual ~LinkModel() = default;
  virtual const Thesaurus& thesaurus() const = 0;
  virtual double link_probability(CategoryIndex modifier, CategoryIndex head) const = 0;
};

// Trained P(s1 -> s2 | exists z: z -> s2), normalized per head over all
// modifier categories. Cells with positive raw affinity are stored; the
// remaining cells of a head share its floor probability.
class AssociationModel final : public LinkModel {
 public:
  struct Cell {
    CategoryIndex modifier;
    double probability;
  };

  // cells[head] lists that head's stored cells. Throws ValidationError for an
  // empty class system, probabilities outside (0, 1], or heads whose stored
  // mass exceeds 1.
  AssociationModel(std::shared_ptr<const Thesaurus> thesaurus, double epsilon,
                   std::vector<std::vector<Cell>> cells, std::string metadata = {});

  const Thesaurus& thesaurus() const override { return *thesaurus_; }
  const std::shared_ptr<const Thesaurus>& shared_thesaurus() const noexcept { return thesaurus_; }

  // Unknown-category rules: an unknown head behaves like an untrained head
  // (uniform 1/|S|); an unknown modifier into a known head gets the head's floor.
  double link_probability(CategoryIndex modifier, CategoryIndex head) const override;

  // Probability shared by every non-stored cell of the head.
  double floor_probability(CategoryIndex head) const;
  std::span<const Cell> stored_cells(CategoryIndex head) const;
  std::size_t stored_cell_count() const noexcept;

  // All |S| modifiers of the head with their probabilities, by index.
  std::vector<double> modifier_distribution(CategoryIndex head) const;

  double epsilon() const noexcept { return epsilon_; }
  const std::string& metadata() const noexcept { return metadata_; }
  std::size_t class_count() const noexcept { return thesaurus_->class_count(); }

 private:
  std::shared_ptr<const Thesaurus> thesaurus_;
  double epsilon_;
  std::vector<std::vector<Cell>> cells_;  // by head, modifiers ascending
  std::vector<double> floor_;
  std::string metadata_;
};

// Per-head normalization of (raw_affinity + epsilon). Words in the counts but
// not in the thesaurus are skipped. Throws DomainError when epsilon <= 0 and
// ValidationError for an empty thesaurus.
AssociationModel train(const PairCounts& counts, std::shared_ptr<const Thesaurus> thesaurus,
                       double epsilon = 1e-6);

// Header `nounforge-model v1 epsilon=<e> thesaurus_digest=<hex>`, an optional
// `# <metadata>` line, then `<s1>\t<s2>\t<p>` cells sorted by (s2, s1) with
// 17 significant digits.
void save_model(const AssociationModel& model, std::ostream& sink);

// Throws ParseError on malformed input and ValidationError when the header's
// digest does not match the supplied thesaurus.
AssociationModel load_model(std::istream& source, std::shared_ptr<const Thesaurus> thesaurus);

struct ModelHeader {
  double epsilon = 0.0;
  std::string thesaurus_digest;
};

ModelHeader parse_model_header(std::string_view line);

}  // namespace nounforge
