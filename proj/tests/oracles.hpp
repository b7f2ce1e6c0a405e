#pragma once

// Test-only reference computations. Each one follows the textbook definition
// directly and shares no code path with the library routine it checks.

#include <cstdint>
#include <functional>
#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "nounforge/lexicon.hpp"
#include "nounforge/model.hpp"
#include "nounforge/structures.hpp"

namespace oracle {

// C(k) = sum_{i<k} C(i) C(k-1-i), C(0) = 1
inline std::uint64_t catalan(int k) {
  if (k <= 0) return 1;
  std::uint64_t sum = 0;
  for (int i = 0; i < k; ++i) sum += catalan(i) * catalan(k - 1 - i);
  return sum;
}

// (1/size_i) / sum_j (1/size_j)
inline std::vector<double> normalize_inverse_sizes(const std::vector<std::size_t>& sizes) {
  double z = 0.0;
  for (auto s : sizes) z += 1.0 / static_cast<double>(s);
  std::vector<double> out;
  for (auto s : sizes) out.push_back((1.0 / static_cast<double>(s)) / z);
  return out;
}

// Walks the cross product of members rather than the count table.
inline double cross_product_affinity(const nounforge::PairCounts& counts, const nounforge::Thesaurus& t,
                                     nounforge::CategoryIndex s1, nounforge::CategoryIndex s2) {
  double sum = 0.0;
  for (auto w1 : t.category(s1).members) {
    for (auto w2 : t.category(s2).members) {
      auto n = counts.count(t.surface(w1), t.surface(w2));
      if (n == 0) continue;
      sum += static_cast<double>(n) /
             static_cast<double>(t.categories_of(w1).size() * t.categories_of(w2).size());
    }
  }
  return sum;
}

// Rightmost-leaf rule applied by walking left()/right() subtrees.
inline std::vector<int> parents_by_rule(const nounforge::BinaryParse& p) {
  std::vector<int> parents(static_cast<std::size_t>(p.size() - 1), 0);
  std::function<void(const nounforge::BinaryParse&)> walk = [&](const nounforge::BinaryParse& t) {
    if (t.is_leaf()) return;
    auto l = t.left();
    auto r = t.right();
    auto rightmost = [](const nounforge::BinaryParse& x) { return x.leaves().back(); };
    parents[static_cast<std::size_t>(rightmost(l) - 1)] = rightmost(r);
    walk(l);
    walk(r);
  };
  walk(p);
  return parents;
}

// Random thesaurus: `categories` labels c00.., `words` words w00.., each word
// in 1..max_ambiguity random categories. Every category gets a member.
inline nounforge::Thesaurus random_thesaurus(std::mt19937& rng, int categories, int words, int max_ambiguity) {
  nounforge::ThesaurusBuilder b;
  auto label = [](const char* prefix, int i) {
    std::string s = prefix;
    if (i < 10) s += '0';
    return s + std::to_string(i);
  };
  std::uniform_int_distribution<int> pick_cat(0, categories - 1);
  std::uniform_int_distribution<int> pick_amb(1, max_ambiguity);
  // every category gets a member; with categories <= words each word ends with at
  // most max_ambiguity senses
  std::vector<std::set<int>> senses(static_cast<std::size_t>(words));
  for (int c = 0; c < categories; ++c) senses[static_cast<std::size_t>(c % words)].insert(c);
  for (int w = 0; w < words; ++w) {
    auto& mine = senses[static_cast<std::size_t>(w)];
    const std::size_t k = static_cast<std::size_t>(std::min(pick_amb(rng), categories));
    while (mine.size() < k) mine.insert(pick_cat(rng));
    for (int c : mine) b.add(label("c", c), label("w", w));
  }
  return b.build();
}

inline nounforge::PairCounts random_counts(std::mt19937& rng, const nounforge::Thesaurus& t, int entries,
                                           int max_count) {
  nounforge::PairCounts c;
  std::uniform_int_distribution<int> pick_word(0, static_cast<int>(t.word_count()) - 1);
  std::uniform_int_distribution<int> pick_count(1, max_count);
  for (int i = 0; i < entries; ++i) {
    c.add(t.surface(static_cast<nounforge::WordId>(pick_word(rng))),
          t.surface(static_cast<nounforge::WordId>(pick_word(rng))), static_cast<std::uint64_t>(pick_count(rng)));
  }
  return c;
}

}  // namespace oracle
