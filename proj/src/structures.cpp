#include "nounforge/structures.hpp"

#include <algorithm>
#include <functional>

#include "nounforge/errors.hpp"

namespace nounforge {

BinaryParse BinaryParse::leaf(Position position) {
  if (position < 1) throw DomainError("leaf position must be >= 1");
  BinaryParse p;
  p.nodes_.push_back(Node{position, position, -1, -1});
  return p;
}

BinaryParse BinaryParse::join(const BinaryParse& left, const BinaryParse& right) {
  if (right.first() != left.last() + 1) {
    throw DomainError("join: right constituent must start at " + std::to_string(left.last() + 1));
  }
  BinaryParse p;
  p.nodes_.reserve(left.nodes_.size() + right.nodes_.size() + 1);
  p.nodes_ = left.nodes_;
  const int offset = static_cast<int>(left.nodes_.size());
  for (Node n : right.nodes_) {
    if (!n.is_leaf()) {
      n.left += offset;
      n.right += offset;
    }
    p.nodes_.push_back(n);
  }
  p.nodes_.push_back(Node{left.first(), right.last(), left.root_index(),
                          static_cast<int>(p.nodes_.size()) - 1});
  return p;
}

BinaryParse BinaryParse::left_branching(int n) {
  if (n < 1) throw DomainError("parse size must be >= 1");
  BinaryParse p = leaf(1);
  for (Position i = 2; i <= n; ++i) p = join(p, leaf(i));
  return p;
}

BinaryParse BinaryParse::subtree(int index) const {
  // postorder: a subtree's nodes form a contiguous block ending at its root
  const Node& top = nodes_.at(static_cast<std::size_t>(index));
  int span = 2 * (top.last - top.first + 1) - 1;
  int begin = index - span + 1;
  BinaryParse p;
  p.nodes_.assign(nodes_.begin() + begin, nodes_.begin() + index + 1);
  for (Node& n : p.nodes_) {
    if (!n.is_leaf()) {
      n.left -= begin;
      n.right -= begin;
    }
  }
  return p;
}

BinaryParse BinaryParse::left() const {
  if (is_leaf()) throw DomainError("leaf has no children");
  return subtree(root().left);
}

BinaryParse BinaryParse::right() const {
  if (is_leaf()) throw DomainError("leaf has no children");
  return subtree(root().right);
}

std::vector<Position> BinaryParse::leaves() const {
  std::vector<Position> out;
  for (const Node& n : nodes_) {
    if (n.is_leaf()) out.push_back(n.first);
  }
  return out;
}

bool BinaryParse::is_left_branching() const {
  for (const Node& n : nodes_) {
    if (!n.is_leaf() && !nodes_[static_cast<std::size_t>(n.right)].is_leaf()) return false;
  }
  return true;
}

ModStructure::ModStructure(std::vector<Position> parents) : parent_(std::move(parents)) {
  const int n = size();
  children_.assign(static_cast<std::size_t>(n) + 1, {});
  for (Position i = 1; i < n; ++i) {
    Position p = parent_[static_cast<std::size_t>(i - 1)];
    if (p <= i || p > n) {
      throw ValidationError("parent(" + std::to_string(i) + ") = " + std::to_string(p) +
                            " must lie in (" + std::to_string(i) + ", " + std::to_string(n) + "]");
    }
    children_[static_cast<std::size_t>(p)].push_back(i);
  }
  // Children precede their parent, so one ascending sweep settles every subtree.
  first_.assign(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> count(static_cast<std::size_t>(n) + 1, 1);
  for (Position j = 1; j <= n; ++j) {
    Position lo = j;
    for (Position c : children_[static_cast<std::size_t>(j)]) {
      lo = std::min(lo, first_[static_cast<std::size_t>(c)]);
      count[static_cast<std::size_t>(j)] += count[static_cast<std::size_t>(c)];
    }
    if (count[static_cast<std::size_t>(j)] != j - lo + 1) {
      throw ValidationError("subtree rooted at " + std::to_string(j) + " is not a contiguous interval");
    }
    first_[static_cast<std::size_t>(j)] = lo;
  }
}

Position ModStructure::parent(Position i) const {
  if (i < 1 || i >= size()) throw DomainError("position has no parent: " + std::to_string(i));
  return parent_[static_cast<std::size_t>(i - 1)];
}

const std::vector<Position>& ModStructure::children(Position j) const {
  if (j < 1 || j > size()) throw DomainError("position out of range: " + std::to_string(j));
  return children_[static_cast<std::size_t>(j)];
}

Position ModStructure::subtree_first(Position j) const {
  if (j < 1 || j > size()) throw DomainError("position out of range: " + std::to_string(j));
  return first_[static_cast<std::size_t>(j)];
}

std::vector<std::pair<Position, Position>> ModStructure::links() const {
  std::vector<std::pair<Position, Position>> out;
  out.reserve(parent_.size());
  for (std::size_t i = 0; i < parent_.size(); ++i) out.emplace_back(static_cast<Position>(i + 1), parent_[i]);
  return out;
}

bool ModStructure::is_chain() const {
  for (std::size_t i = 0; i < parent_.size(); ++i) {
    if (parent_[i] != static_cast<Position>(i + 2)) return false;
  }
  return true;
}

namespace {

std::vector<BinaryParse> parses_over(Position lo, Position hi) {
  if (lo == hi) return {BinaryParse::leaf(lo)};
  std::vector<BinaryParse> out;
  for (Position split = hi - 1; split >= lo; --split) {
    auto lefts = parses_over(lo, split);
    auto rights = parses_over(split + 1, hi);
    for (const auto& l : lefts) {
      for (const auto& r : rights) out.push_back(BinaryParse::join(l, r));
    }
  }
  return out;
}

}  // namespace

std::vector<BinaryParse> enumerate_parses(int n) {
  if (n < 1) throw DomainError("enumerate_parses: n must be >= 1");
  return parses_over(1, n);
}

ModStructure parse_to_structure(const BinaryParse& parse) {
  if (parse.first() != 1) throw DomainError("parse must cover positions starting at 1");
  std::vector<Position> parents(static_cast<std::size_t>(parse.size() - 1), 0);
  for (const auto& node : parse.nodes()) {
    if (node.is_leaf()) continue;
    Position modifier = parse.node(node.left).last;
    parents[static_cast<std::size_t>(modifier - 1)] = parse.node(node.right).last;
  }
  return ModStructure(std::move(parents));
}

BinaryParse structure_to_parse(const ModStructure& structure) {
  // Subtree of j = join(T(c1), join(T(c2), ... join(T(ck), leaf j))) for children c1 < ... < ck.
  std::function<BinaryParse(Position)> build = [&](Position j) {
    const auto& kids = structure.children(j);
    BinaryParse acc = BinaryParse::leaf(j);
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) acc = BinaryParse::join(build(*it), acc);
    return acc;
  };
  return build(structure.root());
}

std::vector<ModStructure> enumerate_structures(int n) {
  std::vector<ModStructure> out;
  for (const auto& p : enumerate_parses(n)) out.push_back(parse_to_structure(p));
  return out;
}

std::uint64_t choice(const ModStructure& structure) {
  std::uint64_t product = 1;
  for (Position j = 1; j <= structure.size(); ++j) {
    auto k = structure.children(j).size();
    if (k > 0) product *= k;
  }
  return product;
}

std::set<std::vector<Position>> generable_strings(const ModStructure& structure) {
  std::function<std::set<std::vector<Position>>(Position)> emit = [&](Position j) {
    std::vector<Position> kids = structure.children(j);
    std::set<std::vector<Position>> out;
    do {
      std::set<std::vector<Position>> partial{{}};
      for (Position c : kids) {
        auto sub = emit(c);
        std::set<std::vector<Position>> next;
        for (const auto& prefix : partial) {
          for (const auto& s : sub) {
            auto seq = prefix;
            seq.insert(seq.end(), s.begin(), s.end());
            next.insert(std::move(seq));
          }
        }
        partial = std::move(next);
      }
      for (auto seq : partial) {
        seq.push_back(j);
        out.insert(std::move(seq));
      }
    } while (std::next_permutation(kids.begin(), kids.end()));
    return out;
  };
  return emit(structure.root());
}

std::string bracket_text(const BinaryParse& parse, std::span<const std::string> words) {
  if (parse.first() != 1 || static_cast<std::size_t>(parse.size()) != words.size()) {
    throw DomainError("bracket_text: parse covers " + std::to_string(parse.size()) + " words, got " +
                      std::to_string(words.size()));
  }
  std::function<void(int, std::string&)> render = [&](int index, std::string& out) {
    const auto& node = parse.node(index);
    if (node.is_leaf()) {
      out += words[static_cast<std::size_t>(node.first - 1)];
      return;
    }
    out += '(';
    render(node.left, out);
    out += ' ';
    render(node.right, out);
    out += ')';
  };
  std::string out;
  render(parse.root_index(), out);
  return out;
}

namespace {

class BracketReader {
 public:
  explicit BracketReader(std::string_view text) : text_(text) {}

  BracketedCompound read() {
    BinaryParse p = expr();
    if (pos_ != text_.size()) fail("trailing input");
    return BracketedCompound{std::move(words_), std::move(p)};
  }

 private:
  BinaryParse expr() {
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (text_[pos_] == '(') {
      ++pos_;
      BinaryParse l = expr();
      expect(' ');
      BinaryParse r = expr();
      expect(')');
      return BinaryParse::join(l, r);
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')' && text_[pos_] != ' ' &&
           text_[pos_] != '\t' && text_[pos_] != '\n' && text_[pos_] != '\r') {
      ++pos_;
    }
    if (pos_ == start) fail("expected word or '('");
    words_.emplace_back(text_.substr(start, pos_ - start));
    return BinaryParse::leaf(static_cast<Position>(words_.size()));
  }

  void expect(char c) {
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(0, "bracket text at column " + std::to_string(pos_ + 1) + ": " + what);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<std::string> words_;
};

}  // namespace

BracketedCompound parse_bracket_text(std::string_view text) { return BracketReader(text).read(); }

}  // namespace nounforge
