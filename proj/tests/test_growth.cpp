#include "exotic/growth.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <set>
#include <string>
#include <vector>

using exotic::ExoticTree;
using exotic::GrowthRule;
using exotic::Rat;

namespace {

std::set<std::string> level_keys(const std::vector<std::vector<ExoticTree>>& l,
                                 size_t k) {
  std::set<std::string> out;
  for (const ExoticTree& t : l.at(k))
    out.insert(t.key());
  return out;
}

Rat tf(const std::string& s) {
  return exotic::tree_factorial(ExoticTree::parse(s));
}

} // namespace

TEST_CASE("enumeration by edge grading matches the hand census") {
  auto levels = exotic::enumerate_trees(2, GrowthRule{});
  REQUIRE(levels.size() == 3);
  CHECK(level_keys(levels, 0) == std::set<std::string>{"o"});
  CHECK(level_keys(levels, 1) ==
        std::set<std::string>{"o(a)", "o(b#1,b#1)"});
  CHECK(level_keys(levels, 2) ==
        std::set<std::string>{"o(a(a))", "o(a,a)", "o(a(b#1,b#1))",
                              "o(a(b#1),b#1)", "o(a,b#1,b#1)",
                              "o(b#1(a),b#1)", "o(b#1,b#1,b#2,b#2)",
                              "o(b#1(b#2),b#1,b#2)", "o(b#1(b#2,b#2),b#1)",
                              "o(b#1(b#2),b#1(b#2))"});
}

TEST_CASE("pair-free enumeration reproduces the classical tree counts") {
  GrowthRule no_pairs;
  no_pairs.allow_beta = false;
  auto levels = exotic::enumerate_trees(6, no_pairs);
  std::vector<size_t> expected = {1, 1, 2, 4, 9, 20, 48};
  REQUIRE(levels.size() == expected.size());
  for (size_t k = 0; k < expected.size(); ++k)
    CHECK(levels[k].size() == expected[k]);
}

TEST_CASE("fertility caps restrict enumeration") {
  GrowthRule chains;
  chains.max_root_fertility = 1;
  chains.max_alpha_fertility = 1;
  chains.allow_beta = false;
  auto levels = exotic::enumerate_trees(5, chains);
  for (size_t k = 0; k < levels.size(); ++k)
    CHECK(levels[k].size() == 1); // only the chain survives

  GrowthRule flat;
  flat.max_alpha_fertility = 0;
  flat.allow_beta = false;
  auto flat_levels = exotic::enumerate_trees(5, flat);
  for (const auto& level : flat_levels)
    for (const ExoticTree& t : level) {
      for (int v = 1; v < t.node_count(); ++v)
        CHECK(t.fertility(v) == 0);
    }

  GrowthRule no_drift;
  no_drift.allow_alpha = false;
  auto pair_levels = exotic::enumerate_trees(3, no_drift);
  for (const auto& level : pair_levels)
    for (const ExoticTree& t : level)
      CHECK(t.alpha_count() == 0);
}

TEST_CASE("the shared enumeration cache grows monotonically") {
  const auto& small = exotic::enumeration_up_to(1);
  CHECK(small.size() >= 2);
  const auto& bigger = exotic::enumeration_up_to(3);
  CHECK(bigger.size() >= 4);
  CHECK(&small == &bigger); // same shared storage
  CHECK(bigger[1].size() == 2);
  CHECK(bigger[2].size() == 10);
}

TEST_CASE("grafting a drift leaf onto the bare root") {
  ExoticTree root = ExoticTree::parse("o");
  auto grafts = exotic::graft_alpha(root);
  REQUIRE(grafts.size() == 1);
  const auto& entry = grafts.begin()->second;
  CHECK(entry.tree.key() == "o(a)");
  CHECK(entry.weight == Rat(1));
}

TEST_CASE("grafting a pair onto the bare root") {
  ExoticTree root = ExoticTree::parse("o");
  auto grafts = exotic::graft_beta_pair(root);
  REQUIRE(grafts.size() == 1);
  const auto& entry = grafts.begin()->second;
  CHECK(entry.tree.key() == "o(b#1,b#1)");
  CHECK(entry.weight == Rat(1, 2));
}

TEST_CASE("grafting a pair onto a two-vertex tree covers ordered sites") {
  ExoticTree t = ExoticTree::parse("o(a)");
  auto grafts = exotic::graft_beta_pair(t);
  // Ordered placements over {root, a}: (root,root), (root,a), (a,root),
  // (a,a): four placements, three distinct trees.
  std::set<std::string> keys;
  Rat total(0);
  for (const auto& [key, entry] : grafts) {
    keys.insert(key);
    total += entry.weight;
  }
  CHECK(keys == std::set<std::string>{"o(a,b#1,b#1)", "o(a(b#1),b#1)",
                                      "o(a(b#1,b#1))"});
  CHECK(total == Rat(2)); // 4 placements, 1/2 each
  CHECK(grafts.at("o(a(b#1),b#1)").weight == Rat(1)); // two mirror placements
}

TEST_CASE("leaf removal multisets") {
  ExoticTree t = ExoticTree::parse("o(a(a),a)");
  auto removals = exotic::removal_multiset(t);
  REQUIRE(removals.size() == 2);
  CHECK(removals.at("o(a,a)").site_count == 1);
  CHECK(removals.at("o(a(a))").site_count == 1);

  ExoticTree p = ExoticTree::parse("o(a(b#1),b#1)");
  auto pair_removals = exotic::removal_multiset(p);
  REQUIRE(pair_removals.size() == 1);
  CHECK(pair_removals.at("o(a)").site_count == 1);

  // A pair is removable only when both members are leaves.
  ExoticTree q = ExoticTree::parse("o(b#1(a),b#1)");
  auto q_removals = exotic::removal_multiset(q);
  REQUIRE(q_removals.size() == 1);
  CHECK(q_removals.at("o(b#1,b#1)").site_count == 1);

  CHECK_THROWS_AS(exotic::removal_multiset(ExoticTree::parse("o")),
                  std::invalid_argument);
}

TEST_CASE("root cuts drop one event and regraft its children") {
  ExoticTree t = ExoticTree::parse("o(a,a)");
  auto cuts = exotic::effective_cut_multiset(t);
  REQUIRE(cuts.size() == 1);
  CHECK(cuts.at("o(a)").site_count == 2);

  ExoticTree chain = ExoticTree::parse("o(a(a))");
  auto chain_cuts = exotic::effective_cut_multiset(chain);
  REQUIRE(chain_cuts.size() == 1);
  CHECK(chain_cuts.at("o(a)").site_count == 1);

  // A pair is cuttable only when both members hang off the root; cutting an
  // alpha child regrafts its own children onto the root.
  ExoticTree p = ExoticTree::parse("o(a(b#1),b#1)");
  auto p_cuts = exotic::effective_cut_multiset(p);
  REQUIRE(p_cuts.size() == 1);
  CHECK(p_cuts.at("o(b#1,b#1)").site_count == 1);
  ExoticTree q = ExoticTree::parse("o(b#1,b#1,a)");
  auto q_cuts = exotic::effective_cut_multiset(q);
  CHECK(q_cuts.count("o(b#1,b#1)") == 1);
  CHECK(q_cuts.at("o(a)").site_count == 1);
}

TEST_CASE("tree factorial golden values") {
  CHECK(tf("o(a)") == Rat(2));
  CHECK(tf("o(a(a))") == Rat(6));
  CHECK(tf("o(a,a)") == Rat(3));
  CHECK(tf("o(a(b#1),a(b#1))") == Rat(12));
  CHECK(tf("o(a(a),a)") == Rat(8));
  CHECK(tf("o(a(b#1),a(b#1),a)") == Rat(15));
  CHECK(tf("o(a,a(b#1,b#1),a)") == Rat(10));
  // Derived intermediates.
  CHECK(tf("o(a,a,a)") == Rat(4));
  CHECK(tf("o(a(b#1,b#1))") == Rat(6));
  CHECK(tf("o(a,a(b#1,b#1))") == Rat(8));
  CHECK(tf("o(b#1,b#1)") == Rat(2));
  CHECK(tf("o(a(a(b#1)),b#1)") == Rat(24));
  CHECK(tf("o(b#1,a(b#1))") == Rat(6));
  CHECK(tf("o(a(b#1,b#1,b#2,b#2))") == Rat(12));
  CHECK(tf("o(b#1(a),b#1)") == Rat(6));
  CHECK(tf("o") == Rat(1));
}

TEST_CASE("pair-free factorial matches the classical product formula") {
  GrowthRule no_pairs;
  no_pairs.allow_beta = false;
  auto levels = exotic::enumerate_trees(5, no_pairs);
  for (const auto& level : levels)
    for (const ExoticTree& t : level)
      CHECK(exotic::tree_factorial(t) == oracles::classical_tree_factorial(t));
}

TEST_CASE("composition-map weight golden values") {
  auto cm = [](const std::string& s) {
    return exotic::cm_weight(ExoticTree::parse(s));
  };
  CHECK(cm("o(a(b#1),a(b#1))") == Rat(1));
  CHECK(cm("o(a(b#1),a(b#1),a)") == Rat(4));
  CHECK(cm("o(a,a(b#1,b#1),a)") == Rat(3));
  CHECK(cm("o(a(b#1,b#1,b#2,b#2))") == Rat(1, 4));
  CHECK(cm("o(a(a),a)") == Rat(3));
}

TEST_CASE("growth recursion reproduces the closed-form weights") {
  auto cmg = [](const std::string& s) {
    return exotic::cm_weight_by_growth(ExoticTree::parse(s));
  };
  CHECK(cmg("o(a(b#1),a(b#1))") == Rat(1));
  CHECK(cmg("o(b#1,b#1)") == Rat(1, 2));
  CHECK(cmg("o(a(b#1,b#1))") == Rat(1, 2));
  CHECK(cmg("o(a(a),a)") == Rat(3));
  for (const ExoticTree& t : oracles::trees_up_to(3))
    CHECK(exotic::cm_weight_by_growth(t) == exotic::cm_weight(t));
}

TEST_CASE("realization coefficient golden values") {
  auto rc = [](const std::string& s) {
    return exotic::realization_coefficient(ExoticTree::parse(s));
  };
  CHECK(rc("o(a)") == Rat(1));
  CHECK(rc("o(a(a))") == Rat(1, 2));
  CHECK(rc("o(a(b#1),a(b#1))") == Rat(1, 3));
  CHECK(rc("o(b#1,b#1)") == Rat(1));
}

TEST_CASE("pair resolution rewrites into plain trees") {
  auto resolved = exotic::reduce_tree(ExoticTree::parse("o(b#1,b#1)"));
  REQUIRE(resolved.size() == 1);
  CHECK(resolved.begin()->second.first.key() == "o(a)");
  CHECK(resolved.begin()->second.second == 1);

  auto nested = exotic::reduce_tree(ExoticTree::parse("o(a(b#1),b#1)"));
  REQUIRE(nested.size() == 1);
  CHECK(nested.at("o(a(a))").second == 1);

  // Two one-edge branches into a shared tip interleave in C(2,1) ways.
  auto vee = exotic::reduce_tree(ExoticTree::parse("o(a(b#1),a(b#1))"));
  REQUIRE(vee.size() == 1);
  CHECK(vee.at("o(a(a(a)))").second == 2);
  CHECK(oracles::pascal_binomial(2, 1) == 2);

  auto deep = exotic::reduce_tree(ExoticTree::parse("o(a(a(b#1)),b#1)"));
  REQUIRE(deep.size() == 1);
  CHECK(deep.at("o(a(a(a)))").second == 1);
}

TEST_CASE("pair resolution preserves the factorial identity") {
  for (const ExoticTree& t : oracles::trees_up_to(3)) {
    Rat lhs = Rat(1) / exotic::tree_factorial(t);
    Rat rhs(0);
    for (const auto& [key, entry] : exotic::reduce_tree(t))
      rhs += Rat(entry.second) / exotic::tree_factorial(entry.first);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("linear extensions of the merged order count rescaled factorials") {
  ExoticTree t = ExoticTree::parse("o(a(b#1),a(b#1))");
  auto g = exotic::gradings(t);
  CHECK(g.exotic_order == 4);
  CHECK(exotic::linear_extensions(exotic::merged_poset(t)) == 2);
  // 4! / 12 = 2.
  CHECK(exotic::factorial(4) / 12 == 2);
}
