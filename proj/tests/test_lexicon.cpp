#include <doctest.h>

#include <random>
#include <sstream>

#include "nounforge/errors.hpp"
#include "nounforge/lexicon.hpp"
#include "oracles.hpp"

using namespace nounforge;

namespace {

Thesaurus from_text(const std::string& text) {
  std::istringstream in(text);
  return load_thesaurus(in);
}

CategoryIndex index_of(const Thesaurus& t, const std::string& label) { return t.find_category(label).value(); }

}  // namespace

TEST_CASE("load_thesaurus builds categories and the word index") {
  auto t = from_text("tools\tmug\ntools\thammer\n");
  CHECK(t.class_count() == 1);
  CHECK(t.categories()[0].id == "tools");
  CHECK(t.categories()[0].size() == 2);

  auto two = from_text("tools\tmug\nfaces\tmug\n");
  CHECK(cats(two, "mug").size() == 2);
  CHECK(ambiguity(two, "mug") == 2);
}

TEST_CASE("empty thesaurus is valid") {
  auto t = from_text("");
  CHECK(t.class_count() == 0);
  CHECK(t.word_count() == 0);
  CHECK(cats(t, "mug").empty());
}

TEST_CASE("comments, blank lines, CRLF and case are handled") {
  auto t = from_text("# header\n\n   \ntools\tMug\r\nTools\thammer\n");
  CHECK(t.class_count() == 2);  // labels are case-sensitive
  CHECK(t.find_word("MUG").has_value());
  CHECK(t.find_word("mug")->surface == "mug");
}

TEST_CASE("malformed thesaurus lines report their line number") {
  auto expect_line = [](const std::string& text, std::size_t line) {
    try {
      from_text(text);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == line);
    }
  };
  expect_line("tools\tmug\nbroken line\n", 2);
  expect_line("a\tb\tc\n", 1);
  expect_line("\tmug\n", 1);
  expect_line("tools\t\n", 1);
  expect_line("tools\tcoffee mug\n", 1);
}

TEST_CASE("builder rejects empty categories") {
  // unreachable from the file format, but the builder is public
  CHECK_THROWS_AS(ThesaurusBuilder{}.add("", "mug"), DomainError);
}

TEST_CASE("loading is idempotent on repeated records") {
  const std::string text = "tools\tmug\nfaces\tmug\ntools\thammer\nanimals\tcat\n";
  auto once = from_text(text);
  auto twice = from_text(text + text);
  CHECK(once == twice);
  CHECK(once.dump() == twice.dump());
  CHECK(once.digest() == twice.digest());
}

TEST_CASE("dump is sorted and round-trips") {
  auto t = from_text("z\tb\na\tz\na\ta\nz\ta\n");
  CHECK(t.dump() == "a\ta\na\tz\nz\ta\nz\tb\n");
  CHECK(from_text(t.dump()) == t);
  CHECK(t.digest().size() == 64);
}

TEST_CASE("word index matches category membership") {
  std::mt19937 rng(7);
  for (int round = 0; round < 20; ++round) {
    auto t = oracle::random_thesaurus(rng, 8, 12, 3);
    for (WordId w = 0; w < t.word_count(); ++w) {
      std::vector<CategoryIndex> expected;
      for (CategoryIndex c = 0; c < t.class_count(); ++c) {
        const auto& m = t.category(c).members;
        if (std::find(m.begin(), m.end(), w) != m.end()) expected.push_back(c);
      }
      CHECK(cats(t, t.surface(w)) == expected);
      CHECK_FALSE(expected.empty());
    }
  }
}

TEST_CASE("cats and ambiguity") {
  auto t = from_text("a\tx\nb\tx\nc\tx\nb\ty\n");
  CHECK(cats(t, "y") == std::vector<CategoryIndex>{index_of(t, "b")});
  CHECK(cats(t, "x").size() == 3);
  CHECK(ambiguity(t, "x") == 3);
  CHECK(ambiguity(t, "y") == 1);
  CHECK(cats(t, "nope").empty());
  CHECK_THROWS_AS(ambiguity(t, "nope"), DomainError);
}

TEST_CASE("sense_prior values") {
  auto t = from_text(
      "solo\tonly\n"
      "eq1\tpair\neq1\tp1\n"
      "eq2\tpair\neq2\tp2\n"
      "small\tmixed\nsmall\tm1\n"
      "big\tmixed\nbig\tb1\nbig\tb2\nbig\tb3\nbig\tb4\nbig\tb5\nbig\tb6\nbig\tb7\n");
  CHECK(sense_prior(t, "only", index_of(t, "solo")) == 1.0);
  CHECK(sense_prior(t, "pair", index_of(t, "eq1")) == 0.5);
  CHECK(sense_prior(t, "pair", index_of(t, "eq2")) == 0.5);

  // sizes 2 and 8: compare with the independent normalizer
  auto expected = oracle::normalize_inverse_sizes({2, 8});
  CHECK(expected[0] == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(sense_prior(t, "mixed", index_of(t, "small")) == doctest::Approx(expected[0]).epsilon(1e-15));
  CHECK(sense_prior(t, "mixed", index_of(t, "big")) == doctest::Approx(expected[1]).epsilon(1e-15));
  CHECK(sense_prior_exact(t, "mixed", index_of(t, "small")) == Rational{4, 5});
  CHECK(sense_prior_exact(t, "mixed", index_of(t, "big")) == Rational{1, 5});

  CHECK_THROWS_AS(sense_prior(t, "only", index_of(t, "big")), DomainError);
  CHECK_THROWS_AS(sense_prior(t, "ghost", index_of(t, "big")), DomainError);
}

TEST_CASE("sense priors sum to one and obey the size ratio law") {
  std::mt19937 rng(11);
  for (int round = 0; round < 50; ++round) {
    auto t = oracle::random_thesaurus(rng, 10, 15, 4);
    for (WordId w = 0; w < t.word_count(); ++w) {
      const auto& word = t.surface(w);
      auto senses = cats(t, word);
      double sum = 0.0;
      for (auto s : senses) sum += sense_prior(t, word, s);
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
      for (auto s1 : senses) {
        for (auto s2 : senses) {
          // p1 / p2 == |s2| / |s1|, cross-multiplied in exact integers
          auto p1 = sense_prior_exact(t, word, s1);
          auto p2 = sense_prior_exact(t, word, s2);
          unsigned __int128 lhs = static_cast<unsigned __int128>(p1.num) * p2.den * t.category(s1).size();
          unsigned __int128 rhs = static_cast<unsigned __int128>(p2.num) * p1.den * t.category(s2).size();
          CHECK(lhs == rhs);
        }
      }
    }
  }
}
