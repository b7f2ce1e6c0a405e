#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nounforge {

using WordId = std::uint32_t;
using CategoryIndex = std::uint32_t;

// A word interned by a Thesaurus. Ids are dense and assigned in surface order,
// so equal surfaces in the same thesaurus always carry equal ids.
struct Word {
  std::string surface;
  WordId id = 0;

  friend bool operator==(const Word&, const Word&) = default;
};

// A semantic class: a flat, nonempty set of words under an opaque label.
struct Category {
  std::string id;
  std::vector<WordId> members;  // ascending

  std::size_t size() const noexcept { return members.size(); }

  friend bool operator==(const Category&, const Category&) = default;
};

// Exact value of a probability with integer numerator/denominator, reduced.
struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Rational&, const Rational&) = default;
};

// Lowercases ASCII letters. Throws DomainError for empty input or input
// containing whitespace.
std::string normalize_word(std::string_view raw);

class Thesaurus;

// Accumulates (category, word) records; duplicates collapse.
class ThesaurusBuilder {
 public:
  ThesaurusBuilder& add(std::string_view category, std::string_view word);
  Thesaurus build() const;

 private:
  std::map<std::string, std::set<std::string>, std::less<>> records_;
};

// Immutable class system: categories as word sets plus the word -> categories
// index. Safe for concurrent reads.
class Thesaurus {
 public:
  Thesaurus() = default;

  std::size_t class_count() const noexcept { return categories_.size(); }
  std::size_t word_count() const noexcept { return words_.size(); }

  const std::vector<Category>& categories() const noexcept { return categories_; }
  const Category& category(CategoryIndex index) const;
  std::optional<CategoryIndex> find_category(std::string_view label) const;

  // Lookup after normalization; nullopt for unknown or unnormalizable input.
  std::optional<Word> find_word(std::string_view surface) const;
  const std::string& surface(WordId id) const;

  // Categories containing the word, ascending by index.
  std::span<const CategoryIndex> categories_of(WordId id) const;

  // Canonical dump: `<category>\t<word>` sorted by category then word.
  void dump(std::ostream& out) const;
  std::string dump() const;
  // Lowercase hex SHA-256 of dump().
  std::string digest() const;

  friend bool operator==(const Thesaurus&, const Thesaurus&) = default;

 private:
  friend class ThesaurusBuilder;

  std::vector<std::string> words_;  // sorted; WordId indexes this
  std::vector<Category> categories_;  // sorted by label
  std::vector<std::vector<CategoryIndex>> word_index_;
};

// Reads `<category>\t<word>` records. Blank lines and lines starting with '#'
// are skipped. Throws ParseError on a malformed line.
Thesaurus load_thesaurus(std::istream& source);
Thesaurus load_thesaurus_file(const std::string& path);

// cats(w): empty when w is unknown.
std::vector<CategoryIndex> cats(const Thesaurus& thesaurus, std::string_view word);

// |cats(w)|. Throws DomainError for an unknown word.
std::size_t ambiguity(const Thesaurus& thesaurus, std::string_view word);

// P(s | w) under equi-probable classes and P(w | s) = 1/|s|:
//   (1/|s|) / sum_{s' in cats(w)} 1/|s'|
// Throws DomainError unless s is in cats(w).
double sense_prior(const Thesaurus& thesaurus, std::string_view word, CategoryIndex s);

// Same quantity as an exact fraction. Throws DomainError when the reduced
// fraction does not fit in 64 bits.
Rational sense_prior_exact(const Thesaurus& thesaurus, std::string_view word, CategoryIndex s);

}  // namespace nounforge
