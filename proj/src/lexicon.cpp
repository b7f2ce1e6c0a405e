#include "nounforge/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "nounforge/digest.hpp"
#include "nounforge/errors.hpp"
#include "text_util.hpp"

namespace nounforge {

std::string normalize_word(std::string_view raw) {
  if (raw.empty()) throw DomainError("empty word");
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    if (detail::is_space(c)) throw DomainError("word contains whitespace: '" + std::string(raw) + "'");
    out.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c);
  }
  return out;
}

ThesaurusBuilder& ThesaurusBuilder::add(std::string_view category, std::string_view word) {
  if (category.empty()) throw DomainError("empty category label");
  records_[std::string(category)].insert(normalize_word(word));
  return *this;
}

Thesaurus ThesaurusBuilder::build() const {
  Thesaurus t;
  std::set<std::string> vocabulary;
  for (const auto& [label, members] : records_) {
    if (members.empty()) throw ValidationError("category '" + label + "' has no members");
    vocabulary.insert(members.begin(), members.end());
  }
  t.words_.assign(vocabulary.begin(), vocabulary.end());
  t.word_index_.resize(t.words_.size());

  auto id_of = [&](const std::string& w) {
    auto it = std::lower_bound(t.words_.begin(), t.words_.end(), w);
    return static_cast<WordId>(it - t.words_.begin());
  };

  t.categories_.reserve(records_.size());
  for (const auto& [label, members] : records_) {
    Category c{label, {}};
    c.members.reserve(members.size());
    auto index = static_cast<CategoryIndex>(t.categories_.size());
    for (const auto& w : members) {
      WordId id = id_of(w);
      c.members.push_back(id);
      t.word_index_[id].push_back(index);
    }
    std::sort(c.members.begin(), c.members.end());
    t.categories_.push_back(std::move(c));
  }
  return t;
}

const Category& Thesaurus::category(CategoryIndex index) const {
  if (index >= categories_.size()) throw DomainError("category index out of range");
  return categories_[index];
}

std::optional<CategoryIndex> Thesaurus::find_category(std::string_view label) const {
  auto it = std::lower_bound(categories_.begin(), categories_.end(), label,
                             [](const Category& c, std::string_view l) { return c.id < l; });
  if (it == categories_.end() || it->id != label) return std::nullopt;
  return static_cast<CategoryIndex>(it - categories_.begin());
}

std::optional<Word> Thesaurus::find_word(std::string_view surface) const {
  std::string key;
  try {
    key = normalize_word(surface);
  } catch (const DomainError&) {
    return std::nullopt;
  }
  auto it = std::lower_bound(words_.begin(), words_.end(), key);
  if (it == words_.end() || *it != key) return std::nullopt;
  return Word{key, static_cast<WordId>(it - words_.begin())};
}

const std::string& Thesaurus::surface(WordId id) const {
  if (id >= words_.size()) throw DomainError("word id out of range");
  return words_[id];
}

std::span<const CategoryIndex> Thesaurus::categories_of(WordId id) const {
  if (id >= word_index_.size()) throw DomainError("word id out of range");
  return word_index_[id];
}

void Thesaurus::dump(std::ostream& out) const {
  for (const auto& c : categories_) {
    // members are id-ordered, and ids follow surface order
    for (WordId w : c.members) out << c.id << '\t' << words_[w] << '\n';
  }
}

std::string Thesaurus::dump() const {
  std::ostringstream out;
  dump(out);
  return out.str();
}

std::string Thesaurus::digest() const { return sha256_hex(dump()); }

Thesaurus load_thesaurus(std::istream& source) {
  ThesaurusBuilder builder;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(source, raw)) {
    ++line_no;
    auto line = detail::strip_cr(raw);
    if (detail::is_skippable(line)) continue;
    auto fields = detail::split_tabs(line);
    if (fields.size() != 2) {
      throw ParseError(line_no, "expected 2 tab-separated fields, got " + std::to_string(fields.size()));
    }
    if (fields[0].empty() || fields[1].empty()) throw ParseError(line_no, "empty field");
    try {
      builder.add(fields[0], fields[1]);
    } catch (const DomainError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return builder.build();
}

Thesaurus load_thesaurus_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open thesaurus file: " + path);
  return load_thesaurus(in);
}

std::vector<CategoryIndex> cats(const Thesaurus& thesaurus, std::string_view word) {
  auto w = thesaurus.find_word(word);
  if (!w) return {};
  auto span = thesaurus.categories_of(w->id);
  return {span.begin(), span.end()};
}

std::size_t ambiguity(const Thesaurus& thesaurus, std::string_view word) {
  auto w = thesaurus.find_word(word);
  if (!w) throw DomainError("unknown word: '" + std::string(word) + "'");
  return thesaurus.categories_of(w->id).size();
}

namespace {

std::span<const CategoryIndex> checked_senses(const Thesaurus& thesaurus, std::string_view word,
                                              CategoryIndex s) {
  auto w = thesaurus.find_word(word);
  if (!w) throw DomainError("unknown word: '" + std::string(word) + "'");
  auto senses = thesaurus.categories_of(w->id);
  if (!std::binary_search(senses.begin(), senses.end(), s)) {
    throw DomainError("category is not a sense of '" + std::string(word) + "'");
  }
  return senses;
}

}  // namespace

double sense_prior(const Thesaurus& thesaurus, std::string_view word, CategoryIndex s) {
  auto senses = checked_senses(thesaurus, word, s);
  try {
    return sense_prior_exact(thesaurus, word, s).value();
  } catch (const DomainError&) {
    double z = 0.0;
    for (CategoryIndex c : senses) z += 1.0 / static_cast<double>(thesaurus.category(c).size());
    return (1.0 / static_cast<double>(thesaurus.category(s).size())) / z;
  }
}

Rational sense_prior_exact(const Thesaurus& thesaurus, std::string_view word, CategoryIndex s) {
  using u128 = unsigned __int128;
  constexpr u128 kLimit = u128{1} << 63;
  auto senses = checked_senses(thesaurus, word, s);

  // sum_{s'} 1/|s'| = num/den, kept reduced
  u128 num = 0;
  u128 den = 1;
  for (CategoryIndex c : senses) {
    u128 size = thesaurus.category(c).size();
    num = num * size + den;
    den = den * size;
    if (num >= kLimit || den >= kLimit) throw DomainError("sense prior fraction overflows");
    auto g = std::gcd(static_cast<std::uint64_t>(num), static_cast<std::uint64_t>(den));
    num /= g;
    den /= g;
  }
  // P = (1/|s|) / (num/den) = den / (|s| * num)
  u128 p_num = den;
  u128 p_den = static_cast<u128>(thesaurus.category(s).size()) * num;
  if (p_den >= kLimit) throw DomainError("sense prior fraction overflows");
  auto g = std::gcd(static_cast<std::uint64_t>(p_num), static_cast<std::uint64_t>(p_den));
  return Rational{static_cast<std::uint64_t>(p_num / g), static_cast<std::uint64_t>(p_den / g)};
}

}  // namespace nounforge
