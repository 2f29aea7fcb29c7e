#include "exotic/growth.hpp"
#include "exotic/multiindex.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <set>
#include <string>

using exotic::ExoticTree;
using exotic::FeynmanMultiIndex;
using exotic::Rat;

namespace {

FeynmanMultiIndex mi(const std::string& s) {
  return FeynmanMultiIndex::parse(s);
}

} // namespace

TEST_CASE("multi-index text form round-trips") {
  for (const char* s :
       {"b.0", "b.2 a0^2", "b.1 a1 B(0,0)", "b.2 a1^2 B(0,0)",
        "b.3 a0 a2^2 B(0,1) B(1,1)^3"}) {
    FeynmanMultiIndex g = mi(s);
    CHECK(g.text() == s);
    CHECK(FeynmanMultiIndex::parse(g.text()) == g);
  }
  // Entries may arrive in any order and collapse.
  CHECK(mi("a0 b.2 a0").text() == "b.2 a0^2");
  CHECK(mi("B(1,0) b.1 a1").text() == "b.1 a1 B(0,1)");
}

TEST_CASE("multi-index parse rejects malformed text") {
  CHECK_THROWS_AS(mi(""), std::invalid_argument);
  CHECK_THROWS_AS(mi("a0"), std::invalid_argument);        // no root marker
  CHECK_THROWS_AS(mi("b.1 b.2"), std::invalid_argument);   // two root markers
  CHECK_THROWS_AS(mi("b.1 c3"), std::invalid_argument);    // unknown entry
  CHECK_THROWS_AS(mi("b.1 a"), std::invalid_argument);     // missing number
  CHECK_THROWS_AS(mi("b.1 B(0)"), std::invalid_argument);  // one-slot pair
}

TEST_CASE("gradings separate slot count from event count") {
  auto g = exotic::multi_gradings(mi("b.2 a0^2"));
  CHECK(g.length == 3);
  CHECK(g.psi_legs == 2);
  CHECK(g.tilde_legs == 2);
  CHECK(g.populated);
  CHECK(g.length_alpha == 2);
  CHECK(g.length_beta == 0);

  auto h = exotic::multi_gradings(mi("b.2 a1^2 B(0,0)"));
  CHECK(h.length == 4);
  CHECK(h.psi_legs == 4); // 2 + 1 + 1 + 0 + 0
  CHECK(h.tilde_legs == 4);
  CHECK(h.populated);
  CHECK(h.length_beta == 1);

  CHECK(!exotic::multi_gradings(mi("b.1")).populated);
  CHECK(!exotic::multi_gradings(mi("b.0 a2")).populated);
}

TEST_CASE("symmetry factor golden values") {
  CHECK(exotic::symmetry_factor_multi(mi("b.2 a0^2")) == 4);
  CHECK(exotic::symmetry_factor_multi(mi("b.2 B(0,0)")) == 4);
  CHECK(exotic::symmetry_factor_multi(mi("b.0")) == 1);
  // b.1 a1 B(0,0): 1! * (1!)^1 * 1! * (0!0!)^1 * 2^1 = 2.
  CHECK(exotic::symmetry_factor_multi(mi("b.1 a1 B(0,0)")) == 2);
  // Distinct-fertility pair gets no diagonal doubling: B(0,1) -> 1.
  CHECK(exotic::symmetry_factor_multi(mi("b.1 B(0,1)")) == 1);
}

TEST_CASE("the census of a tree lists fertilities by colour") {
  CHECK(exotic::counting_map(ExoticTree::parse("o")).text() == "b.0");
  CHECK(exotic::counting_map(ExoticTree::parse("o(a,a)")).text() ==
        "b.2 a0^2");
  CHECK(exotic::counting_map(ExoticTree::parse("o(a(b#1),a(b#1))")).text() ==
        "b.2 a1^2 B(0,0)");
  CHECK(exotic::counting_map(ExoticTree::parse("o(b#1(a),b#1)")).text() ==
        "b.2 a0 B(0,1)");
  CHECK(exotic::counting_map(ExoticTree::parse("o(a(b#1,b#1))")).text() ==
        "b.1 a2 B(0,0)");
}

TEST_CASE("preimage filtering by census") {
  auto ts = exotic::trees_for(mi("b.2 a0^2"));
  REQUIRE(ts.size() == 1);
  CHECK(ts[0].key() == "o(a,a)");

  auto tv = exotic::trees_for(mi("b.1 a2 B(0,0)"));
  REQUIRE(tv.size() == 1);
  CHECK(tv[0].key() == "o(a(b#1,b#1))");

  // Two distinct trees share this census.
  auto tw = exotic::trees_for(mi("b.2 a1^2 B(0,0)"));
  std::set<std::string> keys;
  for (const ExoticTree& t : tw)
    keys.insert(t.key());
  CHECK(keys == std::set<std::string>{"o(a(b#1),a(b#1))",
                                      "o(a(a(b#1)),b#1)"});

  // Populated by the gradings but with an empty preimage.
  CHECK(exotic::trees_for(mi("b.0 a1")).empty());
  CHECK(exotic::contraction_oracle(mi("b.0 a1")).empty());

  // Not populated at all: hard error.
  CHECK_THROWS_AS(exotic::trees_for(mi("b.1")), std::invalid_argument);
  CHECK_THROWS_AS(exotic::contraction_oracle(mi("b.1")),
                  std::invalid_argument);
}

TEST_CASE("exhaustive leg pairing matches the symmetry-ratio weights") {
  auto counts = exotic::contraction_oracle(mi("b.2 a0^2"));
  REQUIRE(counts.size() == 1);
  CHECK(counts.at("o(a,a)") == 2);

  auto pair_counts = exotic::contraction_oracle(mi("b.2 B(0,0)"));
  REQUIRE(pair_counts.size() == 1);
  CHECK(pair_counts.at("o(b#1,b#1)") == 2);

  for (const char* s :
       {"b.2 a0^2", "b.2 B(0,0)", "b.2 a0 B(0,1)", "b.2 a1^2 B(0,0)",
        "b.1 a2 B(0,0)", "b.3 a0^3", "b.1 a0 B(1,1)"}) {
    FeynmanMultiIndex g = mi(s);
    auto oracle = exotic::contraction_oracle(g);
    auto expanded = exotic::phi_expand(g);
    CHECK(oracle.size() == expanded.size());
    Rat sigma_f = Rat(exotic::symmetry_factor_multi(g));
    for (const auto& [tree, weight] : expanded) {
      REQUIRE(oracle.count(tree.key()) == 1);
      CHECK(Rat(oracle.at(tree.key())) == weight);
      CHECK(weight == sigma_f / Rat(exotic::automorphism_count(tree)));
    }
  }
}

TEST_CASE("the contraction search is guarded") {
  // 10 legs would mean 10! bijections; refuse.
  CHECK_THROWS_AS(exotic::contraction_oracle(mi("b.10 a0^10")),
                  std::length_error);
}

TEST_CASE("realization of a multi-index collects one power of t") {
  auto poly = exotic::realization_multi(mi("b.2 a1^2 B(0,0)"));
  REQUIRE(poly.size() == 1);
  CHECK(poly.at(3) == Rat(8, 3));

  auto empty = exotic::realization_multi(mi("b.0 a1"));
  CHECK(empty.empty());

  auto order0 = exotic::realization_multi(mi("b.0"));
  REQUIRE(order0.size() == 1);
  CHECK(order0.at(0) == Rat(1));
}

TEST_CASE("populated enumeration covers every census exactly once") {
  for (int length = 1; length <= 4; ++length) {
    auto indices = exotic::enumerate_populated(length);
    std::set<std::string> texts;
    for (const FeynmanMultiIndex& g : indices) {
      auto grad = exotic::multi_gradings(g);
      CHECK(grad.length == length);
      CHECK(grad.populated);
      CHECK(texts.insert(g.text()).second); // no duplicates
    }
    // Census of every tree at edge count length-1 is among them.
    for (const ExoticTree& t : exotic::enumeration_up_to(3)[
             static_cast<size_t>(length - 1)]) {
      CHECK(texts.count(exotic::counting_map(t).text()) == 1);
    }
  }
}

TEST_CASE("populated enumeration respects fertility caps") {
  exotic::MultiIndexRule rule;
  rule.max_alpha_fertility = 0;
  rule.allow_beta = false;
  for (const FeynmanMultiIndex& g : exotic::enumerate_populated(3, rule)) {
    CHECK(g.gamma_beta.empty());
    for (const auto& [fert, count] : g.gamma_alpha)
      CHECK(fert == 0);
  }
  exotic::MultiIndexRule no_alpha;
  no_alpha.allow_alpha = false;
  for (const FeynmanMultiIndex& g : exotic::enumerate_populated(3, no_alpha))
    CHECK(g.gamma_alpha.empty());
}

TEST_CASE("census-indexed differentials factor through the census") {
  using exotic::FunctionSpec;
  using exotic::Scalar;
  Scalar u0 = Scalar::rational(Rat(2));
  exotic::Jet alpha = exotic::jet_from_spec(
      FunctionSpec::poly({Rat(1), Rat(3), Rat(0), Rat(5)}), u0, 6);
  exotic::Jet beta = exotic::jet_from_spec(
      FunctionSpec::poly({Rat(2), Rat(0), Rat(7)}), u0, 6);
  exotic::Jet f = exotic::jet_from_spec(
      FunctionSpec::poly({Rat(0), Rat(1), Rat(1), Rat(1)}), u0, 6);
  for (const ExoticTree& t : oracles::trees_up_to(3)) {
    Scalar lhs = exotic::elementary_differential(t, alpha, beta, f);
    Scalar rhs = exotic::elementary_differential_multi(
        exotic::counting_map(t), alpha, beta, f);
    CHECK(lhs == rhs);
  }
}
