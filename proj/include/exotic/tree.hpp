#pragma once

#include "exotic/rational.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace exotic {

// Thrown on malformed tree text or invalid decorations. `kind` distinguishes
// grammar errors from semantic ones so the CLI can name the failing rule.
class TreeError : public std::runtime_error {
public:
  enum class Kind { Syntax, Pairing, Degenerate };
  TreeError(Kind k, const std::string& msg)
      : std::runtime_error(msg), kind(k) {}
  Kind kind;
};

enum class Colour : std::uint8_t { Root, Alpha, Beta };

// Non-planar rooted tree whose non-root vertices are coloured alpha or beta,
// with beta vertices matched in pairs (the noise-contraction decoration).
//
// Values are immutable once constructed; construction canonicalizes:
//   * children are stored in the order of the minimal serialization,
//   * pair ids are renumbered 1..P by first appearance in that serialization,
//   * key() is the minimal serialization itself, so equal keys <=> isomorphic
//     as coloured paired trees.
//
// Construction rejects degenerate pairings: any pairing whose merged
// time-identification graph is cyclic (this includes both members of a pair
// lying on one root-to-leaf path). Such shapes are unreachable by natural
// growth, admit no leaf-removal sites, and carry a vanishing realization, so
// every operation in this library is total on the values that construct.
class ExoticTree {
public:
  struct Node {
    Colour colour = Colour::Alpha;
    int pair_id = 0; // 1..pair_count for Beta, 0 otherwise
    std::vector<int> children;
  };

  // Grammar: tree := "o" children? ; node := ("a" | "b#" INT) children? ;
  // children := "(" node ("," node)* ")" ; whitespace insignificant; INT >= 1.
  static ExoticTree parse(const std::string& text);

  // Single-vertex tree "o".
  static ExoticTree leaf();

  // Build from explicit structure (parents[v] = parent index, parents[0] = -1
  // for the root; pair ids arbitrary positive on Beta vertices, 0 elsewhere).
  // Canonicalizes and validates exactly like parse().
  static ExoticTree build(const std::vector<int>& parents,
                          const std::vector<Colour>& colours,
                          const std::vector<int>& pair_ids);

  const std::string& key() const { return key_; }
  std::string format() const { return key_; }

  int node_count() const { return static_cast<int>(nodes_.size()); }
  const Node& node(int v) const { return nodes_[static_cast<size_t>(v)]; }
  int root() const { return 0; }
  int parent(int v) const { return parents_[static_cast<size_t>(v)]; }
  // Index of the paired vertex, -1 for non-beta vertices.
  int partner(int v) const { return partners_[static_cast<size_t>(v)]; }
  int fertility(int v) const {
    return static_cast<int>(nodes_[static_cast<size_t>(v)].children.size());
  }

  int alpha_count() const { return alpha_count_; }
  int beta_count() const { return 2 * pair_count_; }
  int pair_count() const { return pair_count_; }
  int exotic_order() const { return alpha_count_ + pair_count_ + 1; }
  int edge_count() const { return exotic_order() - 1; }

  bool operator==(const ExoticTree& o) const { return key_ == o.key_; }
  bool operator<(const ExoticTree& o) const { return key_ < o.key_; }

private:
  friend struct TreeBuilder;
  ExoticTree() = default;
  std::vector<Node> nodes_;
  std::vector<int> parents_;
  std::vector<int> partners_;
  std::string key_;
  int alpha_count_ = 0;
  int pair_count_ = 0;
};

struct TreeGradings {
  int vertex_count = 0; // raw vertices, root included
  int alpha_count = 0;
  int beta_count = 0;
  int exotic_order = 0; // alpha_count + beta_count/2 + 1
  int edge_count = 0;   // exotic_order - 1
  std::vector<int> fertility;
};

TreeGradings gradings(const ExoticTree& t);

// Non-root vertices with each beta pair merged to a single element, ordered by
// "child strictly below parent". Acyclic for every constructible tree.
struct MergedPoset {
  int element_count = 0;
  // below_mask[i] has bit j set iff element j is strictly below element i
  // (transitive closure). Element count never exceeds exotic_order - 1.
  std::vector<std::uint32_t> below_mask;
  // element index for each non-root vertex of the originating tree
  std::vector<int> element_of_vertex;
};

MergedPoset merged_poset(const ExoticTree& t);

// Size of the colour- and pairing-preserving automorphism group, counted by
// explicit backtracking (pairings cross branches, so the classical
// product-over-identical-subtrees formula does not apply).
BigInt automorphism_count(const ExoticTree& t);

} // namespace exotic
