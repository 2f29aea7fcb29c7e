#include "exotic/tree.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <functional>
#include <map>
#include <stdexcept>

namespace exotic {

namespace {

struct RawNode {
  Colour colour = Colour::Alpha;
  int pair_id = 0; // compacted later; 0 for non-beta
  std::vector<int> children;
};

struct RawTree {
  std::vector<RawNode> nodes;
  std::vector<int> parents;
};

// ---------------------------------------------------------------------------
// Tokenizing parser for: tree := "o" children? ;
//                        node := ("a" | "b#" INT) children? ;
//                        children := "(" node ("," node)* ")".
// ---------------------------------------------------------------------------

class Parser {
public:
  explicit Parser(const std::string& text) : s_(text) {}

  RawTree run() {
    RawTree t;
    skip_ws();
    if (!accept('o'))
      fail("expected root marker 'o'");
    t.nodes.push_back(RawNode{Colour::Root, 0, {}});
    t.parents.push_back(-1);
    parse_children(t, 0);
    skip_ws();
    if (pos_ != s_.size())
      fail("unexpected trailing input");
    return t;
  }

private:
  void parse_children(RawTree& t, int parent) {
    skip_ws();
    if (!accept('('))
      return; // childless
    for (;;) {
      int v = parse_node(t, parent);
      t.nodes[static_cast<size_t>(parent)].children.push_back(v);
      skip_ws();
      if (accept(','))
        continue;
      if (accept(')'))
        return;
      fail("expected ',' or ')' in child list");
    }
  }

  int parse_node(RawTree& t, int parent) {
    skip_ws();
    RawNode n;
    if (accept('a')) {
      n.colour = Colour::Alpha;
    } else if (accept('b')) {
      if (!accept('#'))
        fail("expected '#' after 'b'");
      n.colour = Colour::Beta;
      n.pair_id = parse_int();
    } else {
      fail("expected vertex label 'a' or 'b#N'");
    }
    int v = static_cast<int>(t.nodes.size());
    t.nodes.push_back(std::move(n));
    t.parents.push_back(parent);
    parse_children(t, v);
    return v;
  }

  int parse_int() {
    skip_ws();
    size_t start = pos_;
    long value = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      value = value * 10 + (s_[pos_] - '0');
      if (value > 1000000)
        fail("pair id out of range");
      ++pos_;
    }
    if (pos_ == start)
      fail("expected pair id digits after 'b#'");
    if (value < 1)
      fail("pair ids start at 1");
    return static_cast<int>(value);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw TreeError(TreeError::Kind::Syntax,
                    why + " at offset " + std::to_string(pos_));
  }

  const std::string& s_;
  size_t pos_ = 0;
};

// Compacts raw pair ids to 1..P and checks each id occurs exactly twice.
void validate_pairing(RawTree& t) {
  std::map<int, std::vector<int>> occurrences;
  for (int v = 0; v < static_cast<int>(t.nodes.size()); ++v) {
    const RawNode& n = t.nodes[static_cast<size_t>(v)];
    if (n.colour == Colour::Beta)
      occurrences[n.pair_id].push_back(v);
    else if (n.pair_id != 0)
      throw TreeError(TreeError::Kind::Pairing,
                      "pair id on a non-beta vertex");
  }
  int next = 1;
  for (auto& [id, where] : occurrences) {
    if (where.size() != 2)
      throw TreeError(TreeError::Kind::Pairing,
                      "pair id " + std::to_string(id) + " occurs " +
                          std::to_string(where.size()) + " times, need 2");
    for (int v : where)
      t.nodes[static_cast<size_t>(v)].pair_id = next;
    ++next;
  }
}

// Rejects any pairing whose merged graph (pair members identified, edges
// parent->child) contains a directed cycle. Self-loops count.
void validate_nondegenerate(const RawTree& t) {
  int n = static_cast<int>(t.nodes.size());
  // class id per vertex: root keeps its own class; pair members share one.
  std::vector<int> cls(static_cast<size_t>(n), -1);
  std::map<int, int> class_of_pair;
  int classes = 0;
  for (int v = 0; v < n; ++v) {
    const RawNode& nd = t.nodes[static_cast<size_t>(v)];
    if (nd.colour == Colour::Beta) {
      auto it = class_of_pair.find(nd.pair_id);
      if (it == class_of_pair.end()) {
        class_of_pair.emplace(nd.pair_id, classes);
        cls[static_cast<size_t>(v)] = classes++;
      } else {
        cls[static_cast<size_t>(v)] = it->second;
      }
    } else {
      cls[static_cast<size_t>(v)] = classes++;
    }
  }
  std::vector<std::vector<int>> adj(static_cast<size_t>(classes));
  for (int v = 1; v < n; ++v) {
    int a = cls[static_cast<size_t>(t.parents[static_cast<size_t>(v)])];
    int b = cls[static_cast<size_t>(v)];
    adj[static_cast<size_t>(a)].push_back(b);
  }
  // Cycle detection by colouring DFS.
  std::vector<int> state(static_cast<size_t>(classes), 0);
  std::function<bool(int)> has_cycle = [&](int c) {
    state[static_cast<size_t>(c)] = 1;
    for (int d : adj[static_cast<size_t>(c)]) {
      if (state[static_cast<size_t>(d)] == 1)
        return true;
      if (state[static_cast<size_t>(d)] == 0 && has_cycle(d))
        return true;
    }
    state[static_cast<size_t>(c)] = 2;
    return false;
  };
  for (int c = 0; c < classes; ++c)
    if (state[static_cast<size_t>(c)] == 0 && has_cycle(c))
      throw TreeError(TreeError::Kind::Degenerate,
                      "pairing identifies vertices along a directed cycle");
}

// ---------------------------------------------------------------------------
// Canonical serialization: byte-lexicographically minimal string over all
// child orderings, with pair ids renumbered 1.. by first appearance in the
// string being built. Backtracking with prefix pruning against the best
// complete candidate found so far.
// ---------------------------------------------------------------------------

constexpr size_t NPOS = static_cast<size_t>(-1);

class Canonicalizer {
public:
  explicit Canonicalizer(const RawTree& t) : t_(t) {
    int maxid = 0;
    for (const RawNode& n : t.nodes)
      maxid = std::max(maxid, n.pair_id);
    assign_.assign(static_cast<size_t>(maxid) + 1, 0);
    raw_enc_.resize(t.nodes.size());
    compute_raw_enc(0);
    cur_.reserve(raw_enc_[0].size());
    best_.reserve(raw_enc_[0].size());
  }

  std::string run() {
    emit_node(0, [this] { complete(); });
    return best_;
  }

private:
  using Cont = std::function<void()>;

  // Exact encoding of the subtree at v including raw pair ids; children
  // sorted, so equal strings mean the subtrees are interchangeable verbatim.
  void compute_raw_enc(int v) {
    const RawNode& n = t_.nodes[static_cast<size_t>(v)];
    std::vector<std::string> kids;
    for (int c : n.children) {
      compute_raw_enc(c);
      kids.push_back(raw_enc_[static_cast<size_t>(c)]);
    }
    std::sort(kids.begin(), kids.end());
    std::string e = n.colour == Colour::Root ? "o"
                    : n.colour == Colour::Alpha
                        ? "a"
                        : "b#" + std::to_string(n.pair_id);
    if (!kids.empty()) {
      e += '(';
      for (size_t i = 0; i < kids.size(); ++i) {
        if (i)
          e += ',';
        e += kids[i];
      }
      e += ')';
    }
    raw_enc_[static_cast<size_t>(v)] = std::move(e);
  }

  void complete() {
    if (!have_best_ || lt_pos_ != NPOS) {
      best_ = cur_;
      have_best_ = true;
      lt_pos_ = NPOS; // cur now equals best exactly
      ++best_version_;
    }
  }

  // Appends s; returns false when the branch is already worse than best_.
  bool push_tok(const std::string& s) {
    size_t p = cur_.size();
    cur_ += s;
    if (!have_best_ || lt_pos_ != NPOS)
      return true;
    for (size_t i = 0; i < s.size(); ++i) {
      char a = cur_[p + i];
      char b = best_[p + i];
      if (a < b) {
        lt_pos_ = p + i;
        return true;
      }
      if (a > b)
        return false;
    }
    return true;
  }

  // Cached token spellings, one list per thread so lookups never lock. A
  // deque keeps references to existing entries valid while the cache grows.
  static const std::string& beta_token(int id) {
    thread_local std::deque<std::string> cache;
    while (static_cast<size_t>(id) > cache.size())
      cache.push_back("b#" + std::to_string(cache.size() + 1));
    return cache[static_cast<size_t>(id) - 1];
  }

  const std::string& token_for(int v) const {
    static const std::string kRoot = "o";
    static const std::string kAlpha = "a";
    const RawNode& n = t_.nodes[static_cast<size_t>(v)];
    switch (n.colour) {
    case Colour::Root:
      return kRoot;
    case Colour::Alpha:
      return kAlpha;
    default: {
      int id = assign_[static_cast<size_t>(n.pair_id)];
      if (id == 0)
        id = next_id_; // preview: would be assigned the next fresh number
      return beta_token(id);
    }
    }
  }

  void emit_node(int v, const Cont& k) {
    const RawNode& n = t_.nodes[static_cast<size_t>(v)];
    size_t save_sz = cur_.size();
    size_t save_lt = lt_pos_;
    unsigned long save_ver = best_version_;
    int save_next = next_id_;
    bool fresh = false;
    if (n.colour == Colour::Beta && assign_[static_cast<size_t>(n.pair_id)] == 0) {
      assign_[static_cast<size_t>(n.pair_id)] = next_id_++;
      fresh = true;
    }
    if (push_tok(token_for(v))) {
      if (n.children.empty()) {
        k();
      } else if (push_tok("(")) {
        std::vector<int> remaining = n.children;
        emit_slots(remaining, true, [&] {
          if (push_tok(")"))
            k();
        });
      }
    }
    // Restore this frame's effects.
    cur_.resize(save_sz);
    if (fresh)
      assign_[static_cast<size_t>(n.pair_id)] = 0;
    next_id_ = save_next;
    lt_pos_ = (best_version_ == save_ver) ? save_lt : NPOS;
  }

  void emit_slots(std::vector<int>& remaining, bool first, const Cont& k) {
    if (remaining.empty()) {
      k();
      return;
    }
    // Deterministic candidate order: by the token the child would emit now,
    // then by exact raw encoding. Children with identical raw encodings are
    // verbatim interchangeable, so only the first of each group is tried.
    std::vector<const std::string*> toks(remaining.size());
    for (size_t i = 0; i < toks.size(); ++i)
      toks[i] = &token_for(remaining[i]);
    std::vector<size_t> order(remaining.size());
    for (size_t i = 0; i < order.size(); ++i)
      order[i] = i;
    // Plain sort: entries tying on (token, encoding) are interchangeable
    // (only the first of each encoding group is tried below).
    std::sort(order.begin(), order.end(), [&](size_t x, size_t y) {
      const std::string& ex = raw_enc_[static_cast<size_t>(remaining[x])];
      const std::string& ey = raw_enc_[static_cast<size_t>(remaining[y])];
      return std::tie(*toks[x], ex) < std::tie(*toks[y], ey);
    });
    const std::string* prev_enc = nullptr;
    for (size_t oi : order) {
      const std::string& enc = raw_enc_[static_cast<size_t>(remaining[oi])];
      if (prev_enc && *prev_enc == enc)
        continue;
      prev_enc = &enc;
      int child = remaining[oi];
      std::vector<int> rest = remaining;
      rest.erase(rest.begin() + static_cast<long>(oi));

      size_t save_sz = cur_.size();
      size_t save_lt = lt_pos_;
      unsigned long save_ver = best_version_;
      bool ok = first || push_tok(",");
      if (ok) {
        emit_node(child, [&] { emit_slots(rest, false, k); });
      }
      cur_.resize(save_sz);
      lt_pos_ = (best_version_ == save_ver) ? save_lt : NPOS;
    }
  }

  const RawTree& t_;
  std::vector<std::string> raw_enc_;
  std::string cur_, best_;
  bool have_best_ = false;
  size_t lt_pos_ = NPOS; // first position where cur_ < best_, NPOS if equal
  unsigned long best_version_ = 0;
  std::vector<int> assign_;
  int next_id_ = 1;
};

RawTree parse_raw(const std::string& text) { return Parser(text).run(); }

} // namespace

// ---------------------------------------------------------------------------
// ExoticTree
// ---------------------------------------------------------------------------

namespace {

// Shared tail of parse()/build(): validate, canonicalize, and fill members.
ExoticTree finish(RawTree raw);

} // namespace

ExoticTree ExoticTree::parse(const std::string& text) {
  return finish(parse_raw(text));
}

ExoticTree ExoticTree::leaf() { return parse("o"); }

ExoticTree ExoticTree::build(const std::vector<int>& parents,
                             const std::vector<Colour>& colours,
                             const std::vector<int>& pair_ids) {
  size_t n = parents.size();
  if (n == 0 || colours.size() != n || pair_ids.size() != n)
    throw TreeError(TreeError::Kind::Syntax,
                    "build arrays empty or of mismatched length");
  if (parents[0] != -1 || colours[0] != Colour::Root)
    throw TreeError(TreeError::Kind::Syntax,
                    "vertex 0 must be the root with parent -1");
  RawTree t;
  t.nodes.resize(n);
  t.parents = parents;
  for (size_t v = 0; v < n; ++v) {
    t.nodes[v].colour = colours[v];
    t.nodes[v].pair_id = pair_ids[v];
    if (v > 0) {
      if (colours[v] == Colour::Root)
        throw TreeError(TreeError::Kind::Syntax,
                        "root colour on a non-root vertex");
      int p = parents[v];
      if (p < 0 || p >= static_cast<int>(n))
        throw TreeError(TreeError::Kind::Syntax, "parent index out of range");
      t.nodes[static_cast<size_t>(p)].children.push_back(static_cast<int>(v));
    }
    if ((colours[v] == Colour::Beta) != (pair_ids[v] > 0))
      throw TreeError(TreeError::Kind::Pairing,
                      "pair ids must be positive exactly on beta vertices");
  }
  // Reject parent cycles (then every vertex reaches the root).
  for (size_t v = 1; v < n; ++v) {
    int steps = 0;
    for (int u = static_cast<int>(v); u != 0; u = t.parents[static_cast<size_t>(u)])
      if (++steps > static_cast<int>(n))
        throw TreeError(TreeError::Kind::Syntax,
                        "parent links do not form a rooted tree");
  }
  return finish(std::move(t));
}

namespace {

ExoticTree make_from_canonical(const std::string& canonical);

ExoticTree finish(RawTree raw) {
  validate_pairing(raw);
  validate_nondegenerate(raw);
  std::string canonical = Canonicalizer(raw).run();
  return make_from_canonical(canonical);
}

} // namespace

struct TreeBuilder {
  static ExoticTree assemble(RawTree t, std::string key) {
    ExoticTree r;
    r.nodes_.reserve(t.nodes.size());
    for (RawNode& n : t.nodes)
      r.nodes_.push_back(
          ExoticTree::Node{n.colour, n.pair_id, std::move(n.children)});
    r.parents_ = std::move(t.parents);
    r.key_ = std::move(key);
    r.partners_.assign(r.nodes_.size(), -1);
    std::map<int, int> first_seen;
    for (int v = 0; v < static_cast<int>(r.nodes_.size()); ++v) {
      const ExoticTree::Node& n = r.nodes_[static_cast<size_t>(v)];
      if (n.colour == Colour::Alpha) {
        ++r.alpha_count_;
      } else if (n.colour == Colour::Beta) {
        auto it = first_seen.find(n.pair_id);
        if (it == first_seen.end()) {
          first_seen.emplace(n.pair_id, v);
          ++r.pair_count_;
        } else {
          r.partners_[static_cast<size_t>(v)] = it->second;
          r.partners_[static_cast<size_t>(it->second)] = v;
        }
      }
    }
    return r;
  }
};

namespace {

ExoticTree make_from_canonical(const std::string& canonical) {
  RawTree t = parse_raw(canonical);
  return TreeBuilder::assemble(std::move(t), canonical);
}

} // namespace

// ---------------------------------------------------------------------------
// Gradings, merged poset, automorphisms
// ---------------------------------------------------------------------------

TreeGradings gradings(const ExoticTree& t) {
  TreeGradings g;
  g.vertex_count = t.node_count();
  g.alpha_count = t.alpha_count();
  g.beta_count = t.beta_count();
  g.exotic_order = t.exotic_order();
  g.edge_count = t.edge_count();
  g.fertility.resize(static_cast<size_t>(t.node_count()));
  for (int v = 0; v < t.node_count(); ++v)
    g.fertility[static_cast<size_t>(v)] = t.fertility(v);
  return g;
}

MergedPoset merged_poset(const ExoticTree& t) {
  MergedPoset p;
  p.element_of_vertex.assign(static_cast<size_t>(t.node_count()), -1);
  for (int v = 1; v < t.node_count(); ++v) {
    if (p.element_of_vertex[static_cast<size_t>(v)] != -1)
      continue;
    int e = p.element_count++;
    p.element_of_vertex[static_cast<size_t>(v)] = e;
    int w = t.partner(v);
    if (w != -1)
      p.element_of_vertex[static_cast<size_t>(w)] = e;
  }
  if (p.element_count > 32)
    throw std::length_error("merged poset supports at most 32 elements");
  // Direct cover relation, then transitive closure.
  std::vector<std::uint32_t> below(static_cast<size_t>(p.element_count), 0);
  for (int v = 1; v < t.node_count(); ++v) {
    int par = t.parent(v);
    if (par == t.root())
      continue;
    int a = p.element_of_vertex[static_cast<size_t>(par)];
    int b = p.element_of_vertex[static_cast<size_t>(v)];
    if (a != b)
      below[static_cast<size_t>(a)] |= (1u << b);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < p.element_count; ++i) {
      std::uint32_t acc = below[static_cast<size_t>(i)];
      std::uint32_t m = acc;
      while (m) {
        int j = __builtin_ctz(m);
        m &= m - 1;
        acc |= below[static_cast<size_t>(j)];
      }
      if (acc != below[static_cast<size_t>(i)]) {
        below[static_cast<size_t>(i)] = acc;
        changed = true;
      }
    }
  }
  p.below_mask = std::move(below);
  return p;
}

BigInt automorphism_count(const ExoticTree& t) {
  int n = t.node_count();
  // Colour-only shape fingerprint: necessary for any isomorphism image.
  std::vector<std::string> fp(static_cast<size_t>(n));
  std::function<void(int)> mkfp = [&](int v) {
    std::vector<std::string> kids;
    for (int c : t.node(v).children) {
      mkfp(c);
      kids.push_back(fp[static_cast<size_t>(c)]);
    }
    std::sort(kids.begin(), kids.end());
    std::string e = t.node(v).colour == Colour::Root
                        ? "o"
                        : (t.node(v).colour == Colour::Alpha ? "a" : "b");
    if (!kids.empty()) {
      e += '(';
      for (size_t i = 0; i < kids.size(); ++i) {
        if (i)
          e += ',';
        e += kids[i];
      }
      e += ')';
    }
    fp[static_cast<size_t>(v)] = std::move(e);
  };
  mkfp(0);

  // Preorder so parents are mapped before children.
  std::vector<int> pre;
  std::function<void(int)> walk = [&](int v) {
    pre.push_back(v);
    for (int c : t.node(v).children)
      walk(c);
  };
  walk(0);

  std::vector<int> img(static_cast<size_t>(n), -1);
  std::vector<char> used(static_cast<size_t>(n), 0);
  BigInt count = 0;
  std::function<void(size_t)> rec = [&](size_t i) {
    if (i == pre.size()) {
      count += 1;
      return;
    }
    int v = pre[i];
    if (v == 0) {
      img[0] = 0;
      used[0] = 1;
      rec(i + 1);
      used[0] = 0;
      img[0] = -1;
      return;
    }
    int pv = t.parent(v);
    int pw = img[static_cast<size_t>(pv)];
    int forced = -1;
    int partner = t.partner(v);
    if (partner != -1 && img[static_cast<size_t>(partner)] != -1)
      forced = t.partner(img[static_cast<size_t>(partner)]);
    for (int w : t.node(pw).children) {
      if (used[static_cast<size_t>(w)])
        continue;
      if (fp[static_cast<size_t>(w)] != fp[static_cast<size_t>(v)])
        continue;
      if (forced != -1 && w != forced)
        continue;
      img[static_cast<size_t>(v)] = w;
      used[static_cast<size_t>(w)] = 1;
      rec(i + 1);
      used[static_cast<size_t>(w)] = 0;
      img[static_cast<size_t>(v)] = -1;
    }
  };
  rec(0);
  return count;
}

} // namespace exotic
