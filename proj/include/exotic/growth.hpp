#pragma once

#include "exotic/rational.hpp"
#include "exotic/tree.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace exotic {

struct WeightedTreeEntry {
  ExoticTree tree;
  long multiplicity = 0; // number of grafting sites producing this tree
  Rat weight;            // multiplicity for alpha grafts, multiplicity/2 for pair grafts
};
using WeightedTreeMultiset = std::map<std::string, WeightedTreeEntry>;

// One alpha leaf attached to each vertex, grouped by resulting tree.
WeightedTreeMultiset graft_alpha(const ExoticTree& t);

// A fresh beta pair attached to each ordered vertex pair (v, w), v = w
// allowed; grouped by resulting tree, weight = multiplicity / 2.
WeightedTreeMultiset graft_beta_pair(const ExoticTree& t);

// Fertility caps used to skip trees whose elementary differential vanishes
// identically (polynomial coefficients). Caps < 0 mean unbounded.
struct GrowthRule {
  int max_alpha_fertility = -1;
  int max_beta_fertility = -1;
  int max_root_fertility = -1;
  bool allow_alpha = true;
  bool allow_beta = true;
};

// All canonical trees grouped by edge count 0..max_order, generated by
// breadth-first natural growth with canonical-key dedup. Fertility only
// increases along growth, so rule pruning never blocks a path to an
// in-rule tree.
std::vector<std::vector<ExoticTree>> enumerate_trees(
    int max_order, const std::optional<GrowthRule>& rule = std::nullopt);

// Shared, cached unruled enumeration (grows monotonically, thread-safe).
// Returns levels 0..max_order; the reference stays valid for the process
// lifetime.
const std::vector<std::vector<ExoticTree>>& enumeration_up_to(int max_order);

struct RemovalEntry {
  ExoticTree tree;
  long site_count = 0;
};
using RemovalMultiset = std::map<std::string, RemovalEntry>;

// Leaf-removal sites: every alpha leaf is one site; every pair whose both
// members are leaves is one site. Requires exotic_order >= 2.
RemovalMultiset removal_multiset(const ExoticTree& t);

// Root-cut sites: every alpha child of the root is one site (the vertex is
// removed and its branches regraft onto the root); every pair whose both
// members are root children is one site (both vertices removed, branches
// regraft onto the root). Requires exotic_order >= 2.
RemovalMultiset effective_cut_multiset(const ExoticTree& t);

// Leaf-removal recursion order/tau! = sum over sites of 1/tau'!, base 1 for
// the bare root; agrees with the classical recursive tree factorial on
// beta-free trees. Memoized by canonical key.
Rat tree_factorial(const ExoticTree& t);

// exotic_order! / (automorphism_count * tree_factorial)
Rat cm_weight(const ExoticTree& t);

// Weighted count of natural-growth histories reaching t: sum over histories
// of the per-step site multiplicities, halved once per pair graft. Computed
// by an independent backward recursion over growth predecessors; equals
// cm_weight on every constructible tree.
Rat cm_weight_by_growth(const ExoticTree& t);

// Resolve each merged beta pair into all order-preserving interleavings
// (shuffles) of its two closing paths, producing a multiset of beta-free
// trees with sum of multiplicities = product of shuffle counts.
std::map<std::string, std::pair<ExoticTree, long>> reduce_tree(
    const ExoticTree& t);

// Exact linear-extension count by dynamic programming over down-closed
// subsets; intended for posets of at most ~20 elements.
BigInt linear_extensions(const MergedPoset& p);

// r with realization(t-tree) = r * t^edge_count, i.e.
// exotic_order! / (tree_factorial * edge_count!).
Rat realization_coefficient(const ExoticTree& t);

} // namespace exotic
