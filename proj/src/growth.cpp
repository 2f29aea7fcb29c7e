#include "exotic/growth.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace exotic {

namespace {

struct Arrays {
  std::vector<int> parents;
  std::vector<Colour> colours;
  std::vector<int> pair_ids;
};

Arrays arrays_of(const ExoticTree& t) {
  Arrays a;
  int n = t.node_count();
  a.parents.resize(static_cast<size_t>(n));
  a.colours.resize(static_cast<size_t>(n));
  a.pair_ids.resize(static_cast<size_t>(n));
  for (int v = 0; v < n; ++v) {
    a.parents[static_cast<size_t>(v)] = t.parent(v);
    a.colours[static_cast<size_t>(v)] = t.node(v).colour;
    a.pair_ids[static_cast<size_t>(v)] = t.node(v).pair_id;
  }
  return a;
}

// Rebuild with `doomed` vertices removed. Children of doomed vertices are
// reattached to the root (doomed vertices are leaves in the removal case, so
// the regraft is then vacuous).
ExoticTree drop_vertices(const ExoticTree& t, const std::vector<int>& doomed) {
  int n = t.node_count();
  std::vector<char> gone(static_cast<size_t>(n), 0);
  for (int v : doomed)
    gone[static_cast<size_t>(v)] = 1;
  std::vector<int> remap(static_cast<size_t>(n), -1);
  Arrays a;
  for (int v = 0; v < n; ++v) {
    if (gone[static_cast<size_t>(v)])
      continue;
    remap[static_cast<size_t>(v)] = static_cast<int>(a.parents.size());
    int p = t.parent(v);
    if (p != -1 && gone[static_cast<size_t>(p)])
      p = t.root();
    a.parents.push_back(p == -1 ? -1 : remap[static_cast<size_t>(p)]);
    a.colours.push_back(t.node(v).colour);
    a.pair_ids.push_back(t.node(v).pair_id);
  }
  return ExoticTree::build(a.parents, a.colours, a.pair_ids);
}

void add_entry(WeightedTreeMultiset& out, ExoticTree&& t, long sites,
               const Rat& per_site_weight) {
  auto it = out.find(t.key());
  if (it == out.end()) {
    std::string k = t.key();
    out.emplace(std::move(k),
                WeightedTreeEntry{std::move(t), sites, per_site_weight * sites});
  } else {
    it->second.multiplicity += sites;
    it->second.weight += per_site_weight * sites;
  }
}

bool satisfies(const ExoticTree& t, const GrowthRule& r) {
  for (int v = 0; v < t.node_count(); ++v) {
    int f = t.fertility(v);
    int cap;
    if (v == t.root())
      cap = r.max_root_fertility;
    else if (t.node(v).colour == Colour::Alpha)
      cap = r.max_alpha_fertility;
    else
      cap = r.max_beta_fertility;
    if (cap >= 0 && f > cap)
      return false;
  }
  return true;
}

std::vector<ExoticTree> grow_level(const std::vector<ExoticTree>& level,
                                   const GrowthRule* rule) {
  std::map<std::string, ExoticTree> next;
  auto keep = [&](const WeightedTreeMultiset& grafts) {
    for (const auto& [key, entry] : grafts) {
      if (rule && !satisfies(entry.tree, *rule))
        continue;
      next.emplace(key, entry.tree);
    }
  };
  for (const ExoticTree& t : level) {
    if (!rule || rule->allow_alpha)
      keep(graft_alpha(t));
    if (!rule || rule->allow_beta)
      keep(graft_beta_pair(t));
  }
  std::vector<ExoticTree> out;
  out.reserve(next.size());
  for (auto& [key, t] : next)
    out.push_back(std::move(t));
  return out;
}

} // namespace

WeightedTreeMultiset graft_alpha(const ExoticTree& t) {
  WeightedTreeMultiset out;
  Arrays base = arrays_of(t);
  for (int v = 0; v < t.node_count(); ++v) {
    Arrays a = base;
    a.parents.push_back(v);
    a.colours.push_back(Colour::Alpha);
    a.pair_ids.push_back(0);
    add_entry(out, ExoticTree::build(a.parents, a.colours, a.pair_ids), 1,
              Rat(1));
  }
  return out;
}

WeightedTreeMultiset graft_beta_pair(const ExoticTree& t) {
  WeightedTreeMultiset out;
  Arrays base = arrays_of(t);
  int fresh = t.pair_count() + 1;
  for (int v = 0; v < t.node_count(); ++v) {
    for (int w = 0; w < t.node_count(); ++w) {
      Arrays a = base;
      a.parents.push_back(v);
      a.colours.push_back(Colour::Beta);
      a.pair_ids.push_back(fresh);
      a.parents.push_back(w);
      a.colours.push_back(Colour::Beta);
      a.pair_ids.push_back(fresh);
      add_entry(out, ExoticTree::build(a.parents, a.colours, a.pair_ids), 1,
                Rat(1, 2));
    }
  }
  return out;
}

std::vector<std::vector<ExoticTree>> enumerate_trees(
    int max_order, const std::optional<GrowthRule>& rule) {
  if (max_order < 0)
    throw std::invalid_argument("enumerate_trees: max_order must be >= 0");
  std::vector<std::vector<ExoticTree>> levels;
  levels.push_back({ExoticTree::leaf()});
  const GrowthRule* r = rule ? &*rule : nullptr;
  for (int k = 1; k <= max_order; ++k)
    levels.push_back(grow_level(levels.back(), r));
  return levels;
}

const std::vector<std::vector<ExoticTree>>& enumeration_up_to(int max_order) {
  if (max_order < 0 || max_order >= 64)
    throw std::length_error("enumeration_up_to: supported range is 0..63");
  static std::mutex m;
  // Leaked on purpose: callers hold references for the process lifetime.
  static auto* cache = new std::vector<std::vector<ExoticTree>>();
  std::lock_guard<std::mutex> lock(m);
  if (cache->empty()) {
    cache->reserve(64);
    cache->push_back({ExoticTree::leaf()});
  }
  while (static_cast<int>(cache->size()) <= max_order)
    cache->push_back(grow_level(cache->back(), nullptr));
  return *cache;
}

RemovalMultiset removal_multiset(const ExoticTree& t) {
  if (t.exotic_order() < 2)
    throw std::invalid_argument("removal_multiset: tree has no removable site");
  RemovalMultiset out;
  auto add = [&](ExoticTree&& reduced) {
    auto it = out.find(reduced.key());
    if (it == out.end()) {
      std::string k = reduced.key();
      out.emplace(std::move(k), RemovalEntry{std::move(reduced), 1});
    } else {
      ++it->second.site_count;
    }
  };
  for (int v = 1; v < t.node_count(); ++v) {
    if (t.fertility(v) != 0)
      continue;
    if (t.node(v).colour == Colour::Alpha) {
      add(drop_vertices(t, {v}));
    } else {
      int w = t.partner(v);
      if (w > v && t.fertility(w) == 0) // one site per pair
        add(drop_vertices(t, {v, w}));
    }
  }
  return out;
}

RemovalMultiset effective_cut_multiset(const ExoticTree& t) {
  if (t.exotic_order() < 2)
    throw std::invalid_argument(
        "effective_cut_multiset: tree has no removable site");
  RemovalMultiset out;
  auto add = [&](ExoticTree&& reduced) {
    auto it = out.find(reduced.key());
    if (it == out.end()) {
      std::string k = reduced.key();
      out.emplace(std::move(k), RemovalEntry{std::move(reduced), 1});
    } else {
      ++it->second.site_count;
    }
  };
  for (int v : t.node(t.root()).children) {
    if (t.node(v).colour == Colour::Alpha) {
      add(drop_vertices(t, {v}));
    } else {
      int w = t.partner(v);
      if (w > v && t.parent(w) == t.root()) // one site per root-level pair
        add(drop_vertices(t, {v, w}));
    }
  }
  return out;
}

Rat tree_factorial(const ExoticTree& t) {
  static std::mutex m;
  static std::unordered_map<std::string, Rat> memo;
  {
    std::lock_guard<std::mutex> lock(m);
    auto it = memo.find(t.key());
    if (it != memo.end())
      return it->second;
  }
  Rat result;
  if (t.exotic_order() == 1) {
    result = 1;
  } else {
    Rat inv_sum = 0; // sum over sites of 1/factorial(reduced tree)
    for (const auto& [key, entry] : removal_multiset(t))
      inv_sum += Rat(entry.site_count) / tree_factorial(entry.tree);
    result = Rat(t.exotic_order()) / inv_sum;
  }
  std::lock_guard<std::mutex> lock(m);
  memo.emplace(t.key(), result);
  return result;
}

Rat cm_weight(const ExoticTree& t) {
  Rat num(factorial(static_cast<unsigned>(t.exotic_order())));
  return num / (Rat(automorphism_count(t)) * tree_factorial(t));
}

Rat cm_weight_by_growth(const ExoticTree& t) {
  static std::mutex m;
  static std::unordered_map<std::string, Rat> memo;
  {
    std::lock_guard<std::mutex> lock(m);
    auto it = memo.find(t.key());
    if (it != memo.end())
      return it->second;
  }
  Rat result;
  if (t.exotic_order() == 1) {
    result = 1;
  } else {
    result = 0;
    for (const auto& [key, entry] : removal_multiset(t)) {
      Rat step = 0;
      WeightedTreeMultiset up = graft_alpha(entry.tree);
      auto it = up.find(t.key());
      if (it != up.end())
        step += it->second.weight;
      up = graft_beta_pair(entry.tree);
      it = up.find(t.key());
      if (it != up.end())
        step += it->second.weight;
      result += step * cm_weight_by_growth(entry.tree);
    }
  }
  std::lock_guard<std::mutex> lock(m);
  memo.emplace(t.key(), result);
  return result;
}

// ---------------------------------------------------------------------------
// Reduction to beta-free trees
// ---------------------------------------------------------------------------

namespace {

// Working graph for the reduction: node 0 is the root; every other node has
// one parent slot per incoming edge (two for a merged pair until resolved).
struct Dag {
  std::vector<std::vector<int>> parents;
};

ExoticTree dag_to_tree(const Dag& d) {
  int n = static_cast<int>(d.parents.size());
  std::vector<int> parents(static_cast<size_t>(n));
  std::vector<Colour> colours(static_cast<size_t>(n), Colour::Alpha);
  std::vector<int> pair_ids(static_cast<size_t>(n), 0);
  colours[0] = Colour::Root;
  parents[0] = -1;
  for (int v = 1; v < n; ++v)
    parents[static_cast<size_t>(v)] = d.parents[static_cast<size_t>(v)][0];
  return ExoticTree::build(parents, colours, pair_ids);
}

// Climb from `start` through unique-parent nodes; the list ends at the root
// or at the first multi-parent node (which may still serve as the meeting
// point but cannot be climbed past).
std::vector<int> climb(const Dag& d, int start) {
  std::vector<int> path{start};
  while (path.back() != 0 &&
         d.parents[static_cast<size_t>(path.back())].size() == 1)
    path.push_back(d.parents[static_cast<size_t>(path.back())][0]);
  return path;
}

void reduce_rec(const Dag& d, long mult,
                std::map<std::string, std::pair<ExoticTree, long>>& out) {
  int n = static_cast<int>(d.parents.size());
  int tip = -1;
  std::vector<int> up_a, up_b;
  int base_a = -1, base_b = -1; // positions of the meeting node in each climb
  for (int v = 1; v < n && tip == -1; ++v) {
    if (d.parents[static_cast<size_t>(v)].size() != 2)
      continue;
    int p = d.parents[static_cast<size_t>(v)][0];
    int q = d.parents[static_cast<size_t>(v)][1];
    std::vector<int> a = climb(d, p);
    std::vector<int> b = climb(d, q);
    for (size_t i = 0; i < a.size() && tip == -1; ++i) {
      for (size_t j = 0; j < b.size(); ++j) {
        if (a[i] == b[j]) {
          tip = v;
          up_a = a;
          up_b = b;
          base_a = static_cast<int>(i);
          base_b = static_cast<int>(j);
          break;
        }
      }
    }
  }
  if (tip == -1) {
    // No two-parent node left: the graph is a tree.
    ExoticTree t = dag_to_tree(d);
    auto it = out.find(t.key());
    if (it == out.end()) {
      std::string k = t.key();
      out.emplace(std::move(k), std::make_pair(std::move(t), mult));
    } else {
      it->second.second += mult;
    }
    return;
  }

  // Interior vertex sequences from base (exclusive) down to tip (exclusive),
  // i.e. the climbed lists reversed and truncated.
  std::vector<int> xs(up_a.begin(), up_a.begin() + base_a);
  std::vector<int> ys(up_b.begin(), up_b.begin() + base_b);
  std::reverse(xs.begin(), xs.end()); // base-to-tip order
  std::reverse(ys.begin(), ys.end());
  int base = up_a[static_cast<size_t>(base_a)];

  // All order-preserving interleavings of xs and ys.
  std::vector<int> pattern(xs.size(), 0);
  pattern.insert(pattern.end(), ys.size(), 1);
  std::sort(pattern.begin(), pattern.end());
  do {
    Dag next = d;
    std::vector<int> chain;
    size_t xi = 0, yi = 0;
    for (int bit : pattern)
      chain.push_back(bit == 0 ? xs[xi++] : ys[yi++]);
    chain.push_back(tip);
    int prev = base;
    for (int z : chain) {
      next.parents[static_cast<size_t>(z)] = {prev};
      prev = z;
    }
    reduce_rec(next, mult, out);
  } while (std::next_permutation(pattern.begin(), pattern.end()));
}

} // namespace

std::map<std::string, std::pair<ExoticTree, long>> reduce_tree(
    const ExoticTree& t) {
  // Merge pair members into single nodes, keeping one parent slot per member.
  MergedPoset mp = merged_poset(t);
  Dag d;
  d.parents.assign(static_cast<size_t>(mp.element_count) + 1, {});
  for (int v = 1; v < t.node_count(); ++v) {
    int e = mp.element_of_vertex[static_cast<size_t>(v)] + 1;
    int p = t.parent(v);
    int pe = p == t.root() ? 0 : mp.element_of_vertex[static_cast<size_t>(p)] + 1;
    d.parents[static_cast<size_t>(e)].push_back(pe);
  }
  std::map<std::string, std::pair<ExoticTree, long>> out;
  reduce_rec(d, 1, out);
  return out;
}

BigInt linear_extensions(const MergedPoset& p) {
  int n = p.element_count;
  if (n > 20)
    throw std::length_error("linear_extensions: poset too large");
  if (n == 0)
    return 1;
  std::vector<std::uint32_t> above(static_cast<size_t>(n), 0);
  for (int j = 0; j < n; ++j) {
    std::uint32_t m = p.below_mask[static_cast<size_t>(j)];
    while (m) {
      int i = __builtin_ctz(m);
      m &= m - 1;
      above[static_cast<size_t>(i)] |= (1u << j);
    }
  }
  std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
  std::vector<BigInt> ways(static_cast<size_t>(full) + 1, BigInt(0));
  ways[0] = 1;
  for (std::uint32_t s = 1; s <= full; ++s) {
    BigInt acc = 0;
    std::uint32_t m = s;
    while (m) {
      int i = __builtin_ctz(m);
      m &= m - 1;
      // place i last among s: everything above i must already be placed
      if ((above[static_cast<size_t>(i)] & ~(s & ~(1u << i))) == 0)
        acc += ways[s & ~(1u << i)];
    }
    ways[s] = std::move(acc);
  }
  return ways[full];
}

Rat realization_coefficient(const ExoticTree& t) {
  Rat num(factorial(static_cast<unsigned>(t.exotic_order())));
  Rat den = tree_factorial(t) *
            Rat(factorial(static_cast<unsigned>(t.edge_count())));
  return num / den;
}

} // namespace exotic
