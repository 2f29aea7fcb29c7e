#include "exotic/multiindex.hpp"

#include "exotic/growth.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace exotic {

namespace {

void check_valid(const FeynmanMultiIndex& g) {
  if (g.root_fertility < 0)
    throw std::invalid_argument("multi-index: negative root fertility");
  for (const auto& [n, c] : g.gamma_alpha) {
    if (n < 0)
      throw std::invalid_argument("multi-index: negative alpha fertility");
    if (c <= 0)
      throw std::invalid_argument("multi-index: alpha count must be positive");
  }
  for (const auto& [k, c] : g.gamma_beta) {
    if (k.first < 0 || k.second < 0)
      throw std::invalid_argument("multi-index: negative beta fertility");
    if (k.first > k.second)
      throw std::invalid_argument("multi-index: beta key must be sorted");
    if (c <= 0)
      throw std::invalid_argument("multi-index: beta count must be positive");
  }
}

} // namespace

bool FeynmanMultiIndex::operator<(const FeynmanMultiIndex& o) const {
  if (root_fertility != o.root_fertility)
    return root_fertility < o.root_fertility;
  if (gamma_alpha != o.gamma_alpha)
    return gamma_alpha < o.gamma_alpha;
  return gamma_beta < o.gamma_beta;
}

std::string FeynmanMultiIndex::text() const {
  check_valid(*this);
  std::ostringstream os;
  os << "b." << root_fertility;
  for (const auto& [n, c] : gamma_alpha) {
    os << " a" << n;
    if (c > 1)
      os << '^' << c;
  }
  for (const auto& [k, c] : gamma_beta) {
    os << " B(" << k.first << ',' << k.second << ')';
    if (c > 1)
      os << '^' << c;
  }
  return os.str();
}

FeynmanMultiIndex FeynmanMultiIndex::parse(const std::string& s) {
  FeynmanMultiIndex g;
  bool have_root = false;
  std::istringstream is(s);
  std::string tok;
  auto bad = [](const std::string& t, const std::string& why) -> void {
    throw std::invalid_argument("multi-index token '" + t + "': " + why);
  };
  auto read_int = [&](const std::string& t, size_t& i) -> int {
    size_t start = i;
    long v = 0;
    while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) {
      v = v * 10 + (t[i] - '0');
      if (v > 1000000)
        bad(t, "number out of range");
      ++i;
    }
    if (i == start)
      bad(t, "expected digits");
    return static_cast<int>(v);
  };
  auto read_count = [&](const std::string& t, size_t& i) -> long {
    if (i == t.size())
      return 1;
    if (t[i] != '^')
      bad(t, "unexpected trailing characters");
    ++i;
    long c = read_int(t, i);
    if (i != t.size())
      bad(t, "unexpected trailing characters");
    if (c < 1)
      bad(t, "count must be at least 1");
    return c;
  };
  while (is >> tok) {
    if (tok.size() >= 2 && tok[0] == 'b' && tok[1] == '.') {
      if (have_root)
        bad(tok, "second root marker");
      size_t i = 2;
      g.root_fertility = read_int(tok, i);
      if (i != tok.size())
        bad(tok, "unexpected trailing characters");
      have_root = true;
    } else if (tok[0] == 'a') {
      size_t i = 1;
      int n = read_int(tok, i);
      g.gamma_alpha[n] += read_count(tok, i);
    } else if (tok[0] == 'B') {
      size_t i = 1;
      if (i == tok.size() || tok[i] != '(')
        bad(tok, "expected '('");
      ++i;
      int k1 = read_int(tok, i);
      if (i == tok.size() || tok[i] != ',')
        bad(tok, "expected ','");
      ++i;
      int k2 = read_int(tok, i);
      if (i == tok.size() || tok[i] != ')')
        bad(tok, "expected ')'");
      ++i;
      if (k1 > k2)
        std::swap(k1, k2);
      g.gamma_beta[{k1, k2}] += read_count(tok, i);
    } else {
      bad(tok, "unknown entry kind");
    }
  }
  if (!have_root)
    throw std::invalid_argument("multi-index needs a root marker 'b.M'");
  check_valid(g);
  return g;
}

MultiGradings multi_gradings(const FeynmanMultiIndex& g) {
  check_valid(g);
  MultiGradings m;
  m.psi_legs = g.root_fertility;
  for (const auto& [n, c] : g.gamma_alpha) {
    m.length_alpha += c;
    m.psi_legs += static_cast<long>(n) * c;
  }
  for (const auto& [k, c] : g.gamma_beta) {
    m.length_beta += c;
    m.psi_legs += static_cast<long>(k.first + k.second) * c;
  }
  m.length = 1 + m.length_alpha + m.length_beta;
  m.tilde_legs = m.length_alpha + 2 * m.length_beta;
  m.populated = (m.psi_legs == m.tilde_legs);
  return m;
}

BigInt symmetry_factor_multi(const FeynmanMultiIndex& g) {
  check_valid(g);
  BigInt r = factorial(static_cast<unsigned>(g.root_fertility));
  for (const auto& [n, c] : g.gamma_alpha) {
    r *= factorial(static_cast<unsigned>(c));
    BigInt nf = factorial(static_cast<unsigned>(n));
    for (long i = 0; i < c; ++i)
      r *= nf;
  }
  for (const auto& [k, c] : g.gamma_beta) {
    r *= factorial(static_cast<unsigned>(c));
    BigInt kf = factorial(static_cast<unsigned>(k.first)) *
                factorial(static_cast<unsigned>(k.second));
    for (long i = 0; i < c; ++i)
      r *= kf;
    if (k.first == k.second)
      r <<= c; // one factor 2 per equal-fertility pair
  }
  return r;
}

FeynmanMultiIndex counting_map(const ExoticTree& t) {
  FeynmanMultiIndex g;
  g.root_fertility = t.fertility(t.root());
  for (int v = 1; v < t.node_count(); ++v) {
    if (t.node(v).colour == Colour::Alpha) {
      ++g.gamma_alpha[t.fertility(v)];
    } else {
      int w = t.partner(v);
      if (w > v) {
        int a = t.fertility(v), b = t.fertility(w);
        if (a > b)
          std::swap(a, b);
        ++g.gamma_beta[{a, b}];
      }
    }
  }
  return g;
}

std::vector<ExoticTree> trees_for(const FeynmanMultiIndex& g) {
  MultiGradings m = multi_gradings(g);
  if (!m.populated)
    throw std::invalid_argument("multi-index is not populated");
  int edges = static_cast<int>(m.length) - 1;
  const auto& levels = enumeration_up_to(edges);
  std::vector<ExoticTree> out;
  for (const ExoticTree& t : levels[static_cast<size_t>(edges)])
    if (counting_map(t) == g)
      out.push_back(t);
  return out;
}

std::vector<std::pair<ExoticTree, Rat>> phi_expand(
    const FeynmanMultiIndex& g) {
  BigInt sf = symmetry_factor_multi(g);
  std::vector<std::pair<ExoticTree, Rat>> out;
  for (ExoticTree& t : trees_for(g)) {
    Rat w = Rat(sf) / Rat(automorphism_count(t));
    out.emplace_back(std::move(t), std::move(w));
  }
  return out;
}

std::map<std::string, long> contraction_oracle(const FeynmanMultiIndex& g) {
  MultiGradings m = multi_gradings(g);
  if (!m.populated)
    throw std::invalid_argument("multi-index is not populated");
  if (m.tilde_legs > 8)
    throw std::length_error("contraction oracle limited to 8 legs");

  // Lay out the diagram vertices: root, alphas, then both members per pair.
  std::vector<Colour> colours{Colour::Root};
  std::vector<int> ferts{g.root_fertility};
  std::vector<int> pair_ids{0};
  int pid = 0;
  for (const auto& [n, c] : g.gamma_alpha)
    for (long i = 0; i < c; ++i) {
      colours.push_back(Colour::Alpha);
      ferts.push_back(n);
      pair_ids.push_back(0);
    }
  for (const auto& [k, c] : g.gamma_beta)
    for (long i = 0; i < c; ++i) {
      ++pid;
      colours.push_back(Colour::Beta);
      ferts.push_back(k.first);
      pair_ids.push_back(pid);
      colours.push_back(Colour::Beta);
      ferts.push_back(k.second);
      pair_ids.push_back(pid);
    }

  int n_vertices = static_cast<int>(colours.size());
  std::vector<int> legs; // one per non-root vertex
  for (int v = 1; v < n_vertices; ++v)
    legs.push_back(v);
  std::vector<int> slots; // vertex repeated fertility times
  for (int v = 0; v < n_vertices; ++v)
    for (int i = 0; i < ferts[static_cast<size_t>(v)]; ++i)
      slots.push_back(v);

  std::map<std::string, long> buckets;
  std::vector<int> perm(slots.size());
  for (size_t i = 0; i < perm.size(); ++i)
    perm[i] = static_cast<int>(i);
  std::vector<int> parents(static_cast<size_t>(n_vertices));
  do {
    parents[0] = -1;
    for (size_t i = 0; i < legs.size(); ++i)
      parents[static_cast<size_t>(legs[i])] =
          slots[static_cast<size_t>(perm[i])];
    // Reject parent cycles (self-loops included); survivors reach the root.
    bool ok = true;
    for (int v = 1; ok && v < n_vertices; ++v) {
      int steps = 0;
      for (int u = v; u != 0; u = parents[static_cast<size_t>(u)])
        if (++steps > n_vertices) {
          ok = false;
          break;
        }
    }
    if (!ok)
      continue;
    try {
      ExoticTree t = ExoticTree::build(parents, colours, pair_ids);
      ++buckets[t.key()];
    } catch (const TreeError& e) {
      if (e.kind != TreeError::Kind::Degenerate)
        throw;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return buckets;
}

std::map<int, Rat> realization_multi(const FeynmanMultiIndex& g) {
  MultiGradings m = multi_gradings(g);
  std::map<int, Rat> out;
  if (!m.populated)
    return out;
  Rat sum = 0;
  for (const auto& [t, w] : phi_expand(g))
    sum += w * realization_coefficient(t);
  if (!sum.is_zero())
    out.emplace(static_cast<int>(m.length) - 1, std::move(sum));
  return out;
}

Scalar elementary_differential_multi(const FeynmanMultiIndex& g,
                                     const Jet& alpha, const Jet& beta,
                                     const Jet& f) {
  check_valid(g);
  auto deriv = [](const Jet& j, int k, const char* who) -> const Scalar& {
    if (k > j.order())
      throw std::invalid_argument(std::string(who) +
                                  " jet too short for this multi-index");
    return j.d[static_cast<size_t>(k)];
  };
  Scalar prod = deriv(f, g.root_fertility, "f");
  for (const auto& [n, c] : g.gamma_alpha)
    for (long i = 0; i < c; ++i)
      prod = prod * deriv(alpha, n, "alpha");
  for (const auto& [k, c] : g.gamma_beta)
    for (long i = 0; i < c; ++i)
      prod = prod * deriv(beta, k.first, "beta") *
             deriv(beta, k.second, "beta");
  return prod;
}

std::vector<FeynmanMultiIndex> enumerate_populated(int length,
                                                   const MultiIndexRule& rule) {
  if (length < 1)
    throw std::invalid_argument("enumerate_populated: length must be >= 1");
  std::vector<FeynmanMultiIndex> out;

  // Nondecreasing multisets of `count` fertilities summing to `total`.
  std::function<void(int, int, int, int, std::vector<int>&,
                     const std::function<void(const std::vector<int>&)>&)>
      alpha_sets = [&](int count, int total, int minval, int cap,
                       std::vector<int>& acc,
                       const std::function<void(const std::vector<int>&)>& use) {
        if (count == 0) {
          if (total == 0)
            use(acc);
          return;
        }
        int hi = cap >= 0 ? std::min(cap, total) : total;
        for (int n = minval; n <= hi; ++n) {
          acc.push_back(n);
          alpha_sets(count - 1, total - n, n, cap, acc, use);
          acc.pop_back();
        }
      };

  // Nondecreasing multisets of `count` sorted pairs summing to `total`.
  using PairVec = std::vector<std::pair<int, int>>;
  std::function<void(int, int, std::pair<int, int>, int, PairVec&,
                     const std::function<void(const PairVec&)>&)>
      beta_sets = [&](int count, int total, std::pair<int, int> minval,
                      int cap, PairVec& acc,
                      const std::function<void(const PairVec&)>& use) {
        if (count == 0) {
          if (total == 0)
            use(acc);
          return;
        }
        int hi1 = cap >= 0 ? std::min(cap, total) : total;
        for (int k1 = 0; k1 <= hi1; ++k1) {
          int hi2 = cap >= 0 ? std::min(cap, total - k1) : total - k1;
          for (int k2 = k1; k2 <= hi2; ++k2) {
            std::pair<int, int> kk{k1, k2};
            if (kk < minval)
              continue;
            acc.push_back(kk);
            beta_sets(count - 1, total - k1 - k2, kk, cap, acc, use);
            acc.pop_back();
          }
        }
      };

  for (int alphas = 0; alphas <= length - 1; ++alphas) {
    int pairs = length - 1 - alphas;
    if (!rule.allow_alpha && alphas > 0)
      continue;
    if (!rule.allow_beta && pairs > 0)
      continue;
    int legs = alphas + 2 * pairs;
    int max_root = rule.max_root_fertility >= 0
                       ? std::min(rule.max_root_fertility, legs)
                       : legs;
    for (int m = 0; m <= max_root; ++m) {
      int budget = legs - m; // fertility mass left for alpha + beta entries
      for (int sa = 0; sa <= budget; ++sa) {
        std::vector<int> acc_a;
        alpha_sets(alphas, sa, 0, rule.max_alpha_fertility, acc_a,
                   [&](const std::vector<int>& av) {
                     PairVec acc_b;
                     beta_sets(pairs, budget - sa, {0, 0},
                               rule.max_beta_fertility, acc_b,
                               [&](const PairVec& bv) {
                                 FeynmanMultiIndex g;
                                 g.root_fertility = m;
                                 for (int n : av)
                                   ++g.gamma_alpha[n];
                                 for (const auto& kk : bv)
                                   ++g.gamma_beta[kk];
                                 out.push_back(std::move(g));
                               });
                   });
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace exotic
