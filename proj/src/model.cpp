#include "nounforge/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <future>
#include <istream>
#include <ostream>
#include <sstream>

#include "nounforge/digest.hpp"
#include "nounforge/errors.hpp"
#include "text_util.hpp"

namespace nounforge {

void PairCounts::add(std::string_view w1, std::string_view w2, std::uint64_t count) {
  if (count == 0) return;
  counts_[Key{normalize_word(w1), normalize_word(w2)}] += count;
  total_ += count;
}

void PairCounts::merge(const PairCounts& other) {
  for (const auto& [key, n] : other.counts_) counts_[key] += n;
  total_ += other.total_;
}

std::uint64_t PairCounts::count(std::string_view w1, std::string_view w2) const {
  auto it = counts_.find(Key{normalize_word(w1), normalize_word(w2)});
  return it == counts_.end() ? 0 : it->second;
}

void PairCounts::dump(std::ostream& out) const {
  for (const auto& [key, n] : counts_) out << key.first << '\t' << key.second << '\t' << n << '\n';
}

std::string PairCounts::digest() const {
  std::ostringstream out;
  dump(out);
  return sha256_hex(out.str());
}

PairCounts ingest_pair_counts(std::istream& source) {
  PairCounts counts;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(source, raw)) {
    ++line_no;
    auto line = detail::strip_cr(raw);
    if (detail::is_skippable(line)) continue;
    auto fields = detail::split_tabs(line);
    if (fields.size() != 3) {
      throw ParseError(line_no, "expected 3 tab-separated fields, got " + std::to_string(fields.size()));
    }
    if (fields[0].empty() || fields[1].empty()) throw ParseError(line_no, "empty word field");
    if (fields[2].empty() || fields[2].front() == '-') throw ParseError(line_no, "count must be a nonnegative integer");
    std::uint64_t n = 0;
    auto [end, ec] = std::from_chars(fields[2].data(), fields[2].data() + fields[2].size(), n);
    if (ec != std::errc{} || end != fields[2].data() + fields[2].size()) {
      throw ParseError(line_no, "bad count '" + std::string(fields[2]) + "'");
    }
    try {
      counts.add(fields[0], fields[1], n);
    } catch (const DomainError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return counts;
}

std::vector<std::string> tokenize_corpus_line(std::string_view line) {
  static constexpr std::string_view kBreakers = ".,;:!?()[]{}\"";
  std::vector<std::string> tokens;
  for (const auto& chunk : detail::split_whitespace(line)) {
    std::string current;
    for (char c : chunk) {
      if (kBreakers.find(c) != std::string_view::npos) {
        if (!current.empty()) tokens.push_back(normalize_word(current));
        current.clear();
        tokens.emplace_back(1, c);
      } else {
        current.push_back(c);
      }
    }
    if (!current.empty()) tokens.push_back(normalize_word(current));
  }
  return tokens;
}

PairCounts extract_pairs(std::span<const std::string> tokens, const Thesaurus& thesaurus) {
  PairCounts counts;
  std::size_t i = 0;
  while (i < tokens.size()) {
    if (!thesaurus.find_word(tokens[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < tokens.size() && thesaurus.find_word(tokens[j])) ++j;
    if (j - i == 2) counts.add(tokens[i], tokens[i + 1], 1);
    i = j;
  }
  return counts;
}

PairCounts count_corpus(std::istream& source, const Thesaurus& thesaurus, unsigned shards) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(source, line);) lines.push_back(std::move(line));
  shards = std::max(1u, std::min<unsigned>(shards, static_cast<unsigned>(std::max<std::size_t>(lines.size(), 1))));

  auto count_block = [&](std::size_t begin, std::size_t end) {
    PairCounts local;
    for (std::size_t k = begin; k < end; ++k) local.merge(extract_pairs(tokenize_corpus_line(lines[k]), thesaurus));
    return local;
  };

  std::vector<std::future<PairCounts>> parts;
  const std::size_t block = (lines.size() + shards - 1) / shards;
  for (std::size_t begin = 0; begin < lines.size(); begin += block) {
    parts.push_back(std::async(std::launch::async, count_block, begin, std::min(lines.size(), begin + block)));
  }
  PairCounts total;
  for (auto& part : parts) total.merge(part.get());
  return total;
}

double raw_affinity(const PairCounts& counts, const Thesaurus& thesaurus, CategoryIndex s1, CategoryIndex s2) {
  const auto& c1 = thesaurus.category(s1);
  const auto& c2 = thesaurus.category(s2);
  double sum = 0.0;
  for (const auto& [key, n] : counts.entries()) {
    auto w1 = thesaurus.find_word(key.first);
    auto w2 = thesaurus.find_word(key.second);
    if (!w1 || !w2) continue;
    if (!std::binary_search(c1.members.begin(), c1.members.end(), w1->id)) continue;
    if (!std::binary_search(c2.members.begin(), c2.members.end(), w2->id)) continue;
    auto a1 = thesaurus.categories_of(w1->id).size();
    auto a2 = thesaurus.categories_of(w2->id).size();
    sum += static_cast<double>(n) / static_cast<double>(a1 * a2);
  }
  return sum;
}

namespace {

// Floor of a head: the mass its stored cells leave over, shared evenly by the
// remaining cells. Derived from stored values only, so a reloaded model
// reproduces it bit for bit.
double floor_from_cells(std::span<const AssociationModel::Cell> cells, std::size_t class_count) {
  if (cells.empty()) return 1.0 / static_cast<double>(class_count);
  if (cells.size() >= class_count) return 0.0;
  long double stored = 0.0L;
  for (const auto& c : cells) stored += c.probability;
  long double rest = (1.0L - stored) / static_cast<long double>(class_count - cells.size());
  // Rounding can eat a floor far below the stored cells' precision; keep it positive.
  return std::max(static_cast<double>(rest), std::numeric_limits<double>::min());
}

}  // namespace

AssociationModel::AssociationModel(std::shared_ptr<const Thesaurus> thesaurus, double epsilon,
                                   std::vector<std::vector<Cell>> cells, std::string metadata)
    : thesaurus_(std::move(thesaurus)), epsilon_(epsilon), cells_(std::move(cells)), metadata_(std::move(metadata)) {
  if (!thesaurus_ || thesaurus_->class_count() == 0) throw ValidationError("model needs a nonempty class system");
  if (!(epsilon_ > 0.0) || !std::isfinite(epsilon_)) throw ValidationError("epsilon must be positive");
  const auto k = thesaurus_->class_count();
  if (cells_.size() > k) throw ValidationError("more heads than categories");
  cells_.resize(k);
  floor_.resize(k);
  for (std::size_t head = 0; head < k; ++head) {
    auto& row = cells_[head];
    std::sort(row.begin(), row.end(), [](const Cell& a, const Cell& b) { return a.modifier < b.modifier; });
    long double mass = 0.0L;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i].modifier >= k) throw ValidationError("cell modifier outside the class system");
      if (i > 0 && row[i].modifier == row[i - 1].modifier) throw ValidationError("duplicate cell");
      if (!(row[i].probability > 0.0 && row[i].probability <= 1.0)) {
        throw ValidationError("cell probability outside (0, 1]");
      }
      mass += row[i].probability;
    }
    if (mass > 1.0L + 1e-9L) throw ValidationError("stored mass exceeds 1 for head " + thesaurus_->category(static_cast<CategoryIndex>(head)).id);
    floor_[head] = floor_from_cells(row, k);
  }
}

double AssociationModel::link_probability(CategoryIndex modifier, CategoryIndex head) const {
  const auto k = class_count();
  if (head == kUnknownCategory) return 1.0 / static_cast<double>(k);
  if (head >= k) throw DomainError("head category out of range");
  if (modifier == kUnknownCategory) return floor_[head];
  if (modifier >= k) throw DomainError("modifier category out of range");
  const auto& row = cells_[head];
  auto it = std::lower_bound(row.begin(), row.end(), modifier,
                             [](const Cell& c, CategoryIndex m) { return c.modifier < m; });
  if (it != row.end() && it->modifier == modifier) return it->probability;
  return floor_[head];
}

double AssociationModel::floor_probability(CategoryIndex head) const {
  if (head >= class_count()) throw DomainError("head category out of range");
  return floor_[head];
}

std::span<const AssociationModel::Cell> AssociationModel::stored_cells(CategoryIndex head) const {
  if (head >= class_count()) throw DomainError("head category out of range");
  return cells_[head];
}

std::size_t AssociationModel::stored_cell_count() const noexcept {
  std::size_t n = 0;
  for (const auto& row : cells_) n += row.size();
  return n;
}

std::vector<double> AssociationModel::modifier_distribution(CategoryIndex head) const {
  std::vector<double> out(class_count(), floor_probability(head));
  for (const auto& c : cells_[head]) out[c.modifier] = c.probability;
  return out;
}

AssociationModel train(const PairCounts& counts, std::shared_ptr<const Thesaurus> thesaurus, double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw DomainError("epsilon must be a positive finite number");
  if (!thesaurus || thesaurus->class_count() == 0) throw ValidationError("cannot train on an empty thesaurus");
  const auto k = thesaurus->class_count();

  // raw[head][modifier], filled by spreading each count over cats(w1) x cats(w2)
  std::vector<std::map<CategoryIndex, double>> raw(k);
  std::uint64_t used = 0;
  std::uint64_t skipped = 0;
  for (const auto& [key, n] : counts.entries()) {
    auto w1 = thesaurus->find_word(key.first);
    auto w2 = thesaurus->find_word(key.second);
    if (!w1 || !w2) {
      skipped += n;
      continue;
    }
    used += n;
    auto senses1 = thesaurus->categories_of(w1->id);
    auto senses2 = thesaurus->categories_of(w2->id);
    const double share = static_cast<double>(n) / static_cast<double>(senses1.size() * senses2.size());
    for (CategoryIndex s2 : senses2) {
      for (CategoryIndex s1 : senses1) raw[s2][s1] += share;
    }
  }

  std::vector<std::vector<AssociationModel::Cell>> cells(k);
  for (std::size_t head = 0; head < k; ++head) {
    if (raw[head].empty()) continue;
    double mass = 0.0;
    for (const auto& [mod, r] : raw[head]) mass += r;
    const double denominator = mass + static_cast<double>(k) * epsilon;
    for (const auto& [mod, r] : raw[head]) cells[head].push_back({mod, (r + epsilon) / denominator});
  }

  std::ostringstream meta;
  meta << "pairs_digest=" << counts.digest() << " pair_tokens=" << used << " skipped_tokens=" << skipped;
  return AssociationModel(std::move(thesaurus), epsilon, std::move(cells), meta.str());
}

namespace {

std::string shortest_decimal(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

double parse_double(std::string_view text, std::size_t line_no, const char* what) {
  double v = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || end != text.data() + text.size()) {
    throw ParseError(line_no, std::string("bad ") + what + " '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

void save_model(const AssociationModel& model, std::ostream& sink) {
  const auto& t = model.thesaurus();
  sink << "nounforge-model v1 epsilon=" << shortest_decimal(model.epsilon())
       << " thesaurus_digest=" << t.digest() << '\n';
  if (!model.metadata().empty()) sink << "# " << model.metadata() << '\n';
  char buf[64];
  for (CategoryIndex head = 0; head < t.class_count(); ++head) {
    for (const auto& c : model.stored_cells(head)) {
      std::snprintf(buf, sizeof buf, "%.17g", c.probability);
      sink << t.category(c.modifier).id << '\t' << t.category(head).id << '\t' << buf << '\n';
    }
  }
}

ModelHeader parse_model_header(std::string_view line) {
  auto parts = detail::split_whitespace(line);
  if (parts.size() != 4 || parts[0] != "nounforge-model" || parts[1] != "v1" ||
      parts[2].rfind("epsilon=", 0) != 0 || parts[3].rfind("thesaurus_digest=", 0) != 0) {
    throw ParseError(1, "expected 'nounforge-model v1 epsilon=<e> thesaurus_digest=<hex>'");
  }
  ModelHeader h;
  h.epsilon = parse_double(std::string_view(parts[2]).substr(8), 1, "epsilon");
  h.thesaurus_digest = parts[3].substr(17);
  if (h.thesaurus_digest.size() != 64 ||
      h.thesaurus_digest.find_first_not_of("0123456789abcdef") != std::string::npos) {
    throw ParseError(1, "thesaurus_digest must be 64 lowercase hex digits");
  }
  return h;
}

AssociationModel load_model(std::istream& source, std::shared_ptr<const Thesaurus> thesaurus) {
  if (!thesaurus) throw ValidationError("load_model needs a thesaurus");
  std::string raw;
  if (!std::getline(source, raw)) throw ParseError(1, "empty model file");
  ModelHeader header = parse_model_header(detail::strip_cr(raw));
  if (header.thesaurus_digest != thesaurus->digest()) {
    throw ValidationError("model was trained on a different thesaurus (digest " + header.thesaurus_digest + ")");
  }

  std::vector<std::vector<AssociationModel::Cell>> cells(thesaurus->class_count());
  std::string metadata;
  std::size_t line_no = 1;
  while (std::getline(source, raw)) {
    ++line_no;
    auto line = detail::strip_cr(raw);
    if (line.starts_with("# ") && line_no == 2) {
      metadata = std::string(line.substr(2));
      continue;
    }
    if (detail::is_skippable(line)) continue;
    auto fields = detail::split_tabs(line);
    if (fields.size() != 3) throw ParseError(line_no, "expected 3 tab-separated fields");
    auto s1 = thesaurus->find_category(fields[0]);
    auto s2 = thesaurus->find_category(fields[1]);
    if (!s1 || !s2) throw ParseError(line_no, "unknown category");
    double p = parse_double(fields[2], line_no, "probability");
    if (!(p > 0.0 && p <= 1.0)) throw ParseError(line_no, "probability outside (0, 1]");
    cells[*s2].push_back({*s1, p});
  }
  return AssociationModel(std::move(thesaurus), header.epsilon, std::move(cells), std::move(metadata));
}

}  // namespace nounforge
