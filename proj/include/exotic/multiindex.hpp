#pragma once

#include "exotic/jets.hpp"
#include "exotic/rational.hpp"
#include "exotic/tree.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace exotic {

// Sparse counters describing a pre-Feynman diagram: how many alpha vertices
// of each fertility, how many beta pairs of each (sorted) fertility pair,
// plus one root marker with its fertility.
struct FeynmanMultiIndex {
  std::map<int, long> gamma_alpha;                 // fertility -> count (>0)
  std::map<std::pair<int, int>, long> gamma_beta;  // (k1<=k2) -> count (>0)
  int root_fertility = 0;

  // Text form: "b.M" root marker, "aN^k" alpha entries, "B(k1,k2)^k" beta
  // entries, "^1" omitted, space separated, root first then ascending keys.
  std::string text() const;
  static FeynmanMultiIndex parse(const std::string& s);

  bool operator==(const FeynmanMultiIndex& o) const {
    return root_fertility == o.root_fertility && gamma_alpha == o.gamma_alpha &&
           gamma_beta == o.gamma_beta;
  }
  bool operator<(const FeynmanMultiIndex& o) const;
};

struct MultiGradings {
  long length = 0;      // total vertices, root included
  long psi_legs = 0;    // slots: sum of fertilities
  long tilde_legs = 0;  // one per alpha vertex, two per pair
  bool populated = false;
  long length_alpha = 0;
  long length_beta = 0; // pair count
};

MultiGradings multi_gradings(const FeynmanMultiIndex& g);

// prod_n gamma_alpha(n)! (n!)^{gamma_alpha(n)+gamma_root(n)} *
// prod_k gamma_beta(k)! (k1!k2!)^{gamma_beta(k)} * 2^{sum_i gamma_beta(i,i)}
BigInt symmetry_factor_multi(const FeynmanMultiIndex& g);

// Fertility census of a tree: root marker, alpha entries, one beta entry per
// pair keyed by the sorted fertilities of its members.
FeynmanMultiIndex counting_map(const ExoticTree& t);

// All canonical trees whose census equals g (filters the shared enumeration
// at edge count length-1). Throws std::invalid_argument when g is not
// populated.
std::vector<ExoticTree> trees_for(const FeynmanMultiIndex& g);

// trees_for with the weight sigma_F(g)/sigma_e(tree) attached; each weight
// equals the leg-pairing count reported by contraction_oracle.
std::vector<std::pair<ExoticTree, Rat>> phi_expand(const FeynmanMultiIndex& g);

// Exhaustive leg-pairing enumeration on the pre-Feynman diagram: bijections
// from parent legs to child slots; pairings producing self-loops, directed
// cycles, disconnected graphs, or degenerate pairings are discarded;
// survivors are bucketed by canonical tree key. Guarded to at most 8 legs
// (8! bijections). Throws std::invalid_argument when g is unpopulated and
// std::length_error past the guard.
std::map<std::string, long> contraction_oracle(const FeynmanMultiIndex& g);

// Polynomial in t (power -> coefficient): sum over phi_expand of
// weight * realization_coefficient(tree) * t^{edge_count}. All preimage
// trees share edge count length-1, so at most one power is present.
// Unpopulated indices realize to the zero polynomial.
std::map<int, Rat> realization_multi(const FeynmanMultiIndex& g);

// prod (alpha^{(n)})^{gamma_alpha(n)} * f^{(root fertility)} *
// prod (beta^{(k1)} beta^{(k2)})^{gamma_beta(k)} at u0.
Scalar elementary_differential_multi(const FeynmanMultiIndex& g,
                                     const Jet& alpha, const Jet& beta,
                                     const Jet& f);

// All populated indices with the given total vertex count, optionally
// restricted by fertility caps (same semantics as GrowthRule).
struct MultiIndexRule {
  int max_alpha_fertility = -1;
  int max_beta_fertility = -1;
  int max_root_fertility = -1;
  bool allow_alpha = true;
  bool allow_beta = true;
};
std::vector<FeynmanMultiIndex> enumerate_populated(
    int length, const MultiIndexRule& rule = {});

} // namespace exotic
