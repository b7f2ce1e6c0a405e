#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nounforge {

// Word positions are 1-based, mirroring w1 ... wn.
using Position = int;

// An ordered binary tree whose leaves read 1..n left to right. Nodes are kept
// in postorder in a flat vector, so the root is always the last node.
class BinaryParse {
 public:
  struct Node {
    Position first = 0;  // leftmost leaf under this node
    Position last = 0;   // rightmost leaf under this node
    int left = -1;       // node indices; -1 for leaves
    int right = -1;

    bool is_leaf() const noexcept { return left < 0; }
    friend bool operator==(const Node&, const Node&) = default;
  };

  static BinaryParse leaf(Position position);
  // Requires right to start immediately after left ends.
  static BinaryParse join(const BinaryParse& left, const BinaryParse& right);
  // Fully left-branching tree over 1..n.
  static BinaryParse left_branching(int n);

  // Number of leaves. Leaves of a standalone parse span 1..size().
  int size() const noexcept { return root().last - root().first + 1; }
  Position first() const noexcept { return root().first; }
  Position last() const noexcept { return root().last; }
  bool is_leaf() const noexcept { return root().is_leaf(); }

  const Node& root() const noexcept { return nodes_.back(); }
  const Node& node(int index) const { return nodes_.at(static_cast<std::size_t>(index)); }
  std::span<const Node> nodes() const noexcept { return nodes_; }
  int root_index() const noexcept { return static_cast<int>(nodes_.size()) - 1; }

  BinaryParse left() const;
  BinaryParse right() const;

  // Positions of the leaves in left-to-right order.
  std::vector<Position> leaves() const;
  bool is_left_branching() const;

  friend bool operator==(const BinaryParse&, const BinaryParse&) = default;

 private:
  BinaryParse() = default;
  BinaryParse subtree(int index) const;

  std::vector<Node> nodes_;
};

// A modification tree over positions 1..n rooted at n: every position i < n
// modifies a unique parent(i) > i, and every subtree covers a contiguous
// interval ending at its root. Construction validates eagerly.
class ModStructure {
 public:
  // parents[i-1] = parent(i) for i in 1..n-1; n = parents.size() + 1.
  explicit ModStructure(std::vector<Position> parents);

  int size() const noexcept { return static_cast<int>(parent_.size()) + 1; }
  Position root() const noexcept { return size(); }
  Position parent(Position i) const;
  // Children of j in ascending order.
  const std::vector<Position>& children(Position j) const;
  // Leftmost position covered by the subtree rooted at j.
  Position subtree_first(Position j) const;
  const std::vector<Position>& parents() const noexcept { return parent_; }
  // (modifier, head) pairs in modifier order.
  std::vector<std::pair<Position, Position>> links() const;

  bool is_chain() const;

  friend bool operator==(const ModStructure& a, const ModStructure& b) { return a.parent_ == b.parent_; }
  friend auto operator<=>(const ModStructure& a, const ModStructure& b) { return a.parent_ <=> b.parent_; }

 private:
  std::vector<Position> parent_;
  std::vector<std::vector<Position>> children_;  // indexed by position, [0] unused
  std::vector<Position> first_;                  // indexed by position, [0] unused
};

// All parses of 1..n. Order: recursively by split point with the largest
// left constituent first, so the fully left-branching parse comes first.
std::vector<BinaryParse> enumerate_parses(int n);

// The left child's rightmost leaf modifies the right child's rightmost leaf.
ModStructure parse_to_structure(const BinaryParse& parse);

// Inverse of parse_to_structure.
BinaryParse structure_to_parse(const ModStructure& structure);

// Image of enumerate_parses(n) under parse_to_structure, same order.
std::vector<ModStructure> enumerate_structures(int n);

// Product of child counts over nodes with at least one child.
std::uint64_t choice(const ModStructure& structure);

// Every emission order a postorder generator can produce: each node after all
// of its descendants, each subtree contiguous, siblings in any order.
std::set<std::vector<Position>> generable_strings(const ModStructure& structure);

// `expr := word | "(" expr " " expr ")"`.
std::string bracket_text(const BinaryParse& parse, std::span<const std::string> words);

struct BracketedCompound {
  std::vector<std::string> words;
  BinaryParse parse;
};

// Strict reader for bracket_text output. Throws ParseError.
BracketedCompound parse_bracket_text(std::string_view text);

}  // namespace nounforge
