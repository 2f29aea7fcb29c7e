#include "exotic/verify.hpp"

#include "exotic/growth.hpp"
#include "exotic/multiindex.hpp"
#include "exotic/parallel.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace exotic {

// ---------------------------------------------------------------------------
// Monte Carlo
// ---------------------------------------------------------------------------

namespace {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Explicit Box-Muller on top of mt19937_64 so estimates are bit-identical
// across standard libraries and worker counts.
class GaussStream {
public:
  explicit GaussStream(std::uint64_t seed) : eng_(seed) {}
  double next() {
    if (have_) {
      have_ = false;
      return cached_;
    }
    double u1;
    do {
      u1 = unit();
    } while (u1 <= 0.0);
    double u2 = unit();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(a);
    have_ = true;
    return r * std::cos(a);
  }

private:
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  std::mt19937_64 eng_;
  bool have_ = false;
  double cached_ = 0.0;
};

constexpr long kMcChunk = 4096;

} // namespace

McEstimate euler_maruyama_estimate(const SdeProblem& p, const McConfig& c) {
  if (p.exact_mode)
    throw std::invalid_argument("Monte Carlo runs in float mode only");
  if (c.paths < 1)
    throw std::invalid_argument("Monte Carlo needs at least one path");
  if (!(c.step > 0.0) || !(c.t_end > 0.0))
    throw std::invalid_argument("Monte Carlo needs positive step and t_end");
  for (const FunctionSpec* s : {&p.alpha, &p.beta, &p.f})
    if (s->kind == FunctionSpec::Kind::Derivs)
      throw std::invalid_argument(
          "Monte Carlo needs pointwise-evaluable alpha, beta, f");

  long n_steps = std::max<long>(1, std::lround(c.t_end / c.step));
  double dt = c.t_end / static_cast<double>(n_steps);
  double sqrt_dt = std::sqrt(dt);
  double u0 = p.u0.as_double();

  long nchunks = (c.paths + kMcChunk - 1) / kMcChunk;
  std::vector<double> sums(static_cast<size_t>(nchunks), 0.0);
  std::vector<double> sumsqs(static_cast<size_t>(nchunks), 0.0);
  std::vector<long> kept(static_cast<size_t>(nchunks), 0);
  std::vector<long> dropped(static_cast<size_t>(nchunks), 0);

  parallel_chunks(c.paths, kMcChunk, [&](long chunk, long lo, long hi) {
    double s = 0.0, ss = 0.0;
    long good = 0, bad = 0;
    for (long i = lo; i < hi; ++i) {
      GaussStream z(splitmix64(
          c.seed ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(i + 1))));
      double u = u0;
      for (long k = 0; k < n_steps; ++k)
        u += p.alpha.eval_double(u) * dt +
             p.beta.eval_double(u) * sqrt_dt * z.next();
      double v = p.f.eval_double(u);
      if (std::isfinite(v)) {
        s += v;
        ss += v * v;
        ++good;
      } else {
        ++bad;
      }
    }
    sums[static_cast<size_t>(chunk)] = s;
    sumsqs[static_cast<size_t>(chunk)] = ss;
    kept[static_cast<size_t>(chunk)] = good;
    dropped[static_cast<size_t>(chunk)] = bad;
  });

  McEstimate e;
  double s = 0.0, ss = 0.0;
  for (long chunk = 0; chunk < nchunks; ++chunk) {
    s += sums[static_cast<size_t>(chunk)];
    ss += sumsqs[static_cast<size_t>(chunk)];
    e.paths += kept[static_cast<size_t>(chunk)];
    e.discarded += dropped[static_cast<size_t>(chunk)];
  }
  if (e.paths == 0)
    throw std::runtime_error("Monte Carlo: every path left the finite range");
  double n = static_cast<double>(e.paths);
  e.mean = s / n;
  double var = e.paths > 1 ? std::max(0.0, (ss - s * s / n) / (n - 1.0)) : 0.0;
  e.std_error = std::sqrt(var / n);
  e.generator = "splitmix64+mt19937_64+box-muller";
  return e;
}

double closed_form_reference(ClosedForm which, double a, double sigma,
                             double u0, double t) {
  switch (which) {
  case ClosedForm::OuMean:
    return u0 * std::exp(-a * t);
  case ClosedForm::OuSecondMoment:
    if (a == 0.0)
      return u0 * u0 + sigma * sigma * t;
    return u0 * u0 * std::exp(-2.0 * a * t) +
           sigma * sigma / (2.0 * a) * (1.0 - std::exp(-2.0 * a * t));
  case ClosedForm::GbmMean:
    return u0 * std::exp(a * t);
  default:
    return u0 * u0 * std::exp((2.0 * a + sigma * sigma) * t);
  }
}

// ---------------------------------------------------------------------------
// Identity suite
// ---------------------------------------------------------------------------

namespace {

// Automorphism counts are pure per canonical key; the suite revisits keys
// many times across identities.
BigInt aut_cached(const ExoticTree& t) {
  static std::mutex mu;
  static std::unordered_map<std::string, BigInt> memo;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find(t.key());
    if (it != memo.end())
      return it->second;
  }
  BigInt v = automorphism_count(t);
  std::lock_guard<std::mutex> lock(mu);
  memo.emplace(t.key(), v);
  return v;
}

// First-failure slot ordered by a global position, so parallel scans report
// the same counterexample as a serial scan would.
struct FailSlot {
  long pos = -1;
  std::string witness;
  void offer(long p, const std::string& w) {
    if (pos < 0 || p < pos) {
      pos = p;
      witness = w;
    }
  }
};

Jet prime_jet(const std::vector<long>& primes) {
  Jet j;
  j.base = Scalar::rational(Rat(0));
  for (long p : primes)
    j.d.push_back(Scalar::rational(Rat(p)));
  return j;
}

} // namespace

std::vector<IdentityResult> identity_suite(int max_order,
                                           int multi_max_length) {
  if (max_order < 1)
    throw std::invalid_argument("identity_suite: max_order must be >= 1");
  if (multi_max_length < 1)
    throw std::invalid_argument("identity_suite: multi_max_length must be >= 1");

  const auto& levels = enumeration_up_to(max_order);
  if (multi_max_length - 1 > max_order)
    enumeration_up_to(multi_max_length - 1); // warm for trees_for

  enum TreeIdentity {
    kRoundtrip = 0,
    kLeafFactorial,
    kLeafWeights,
    kRootCut,
    kLinearExt,
    kPairResolution,
    kCensusPopulated,
    kCensusDifferential,
    kTreeIdentityCount,
  };
  static const std::array<const char*, kTreeIdentityCount> tree_names = {
      "canonical-roundtrip",   "leaf-removal-factorial",
      "leaf-removal-weights",  "root-cut-factorial",
      "linear-extensions",     "pair-resolution",
      "census-populated",      "census-differential",
  };

  // Generic jets with distinct prime derivative values: two differential
  // products agree exactly when the fertility censuses agree.
  std::vector<long> pa, pb, pf;
  {
    std::vector<long> primes;
    for (long candidate = 2; static_cast<int>(primes.size()) <
                             3 * (2 * max_order + 1);
         ++candidate) {
      bool is_prime = true;
      for (long d = 2; d * d <= candidate; ++d)
        if (candidate % d == 0) {
          is_prime = false;
          break;
        }
      if (is_prime)
        primes.push_back(candidate);
    }
    size_t n = static_cast<size_t>(2 * max_order + 1);
    pa.assign(primes.begin(), primes.begin() + n);
    pb.assign(primes.begin() + n, primes.begin() + 2 * n);
    pf.assign(primes.begin() + 2 * n, primes.begin() + 3 * n);
  }
  const Jet ja = prime_jet(pa);
  const Jet jb = prime_jet(pb);
  const Jet jf = prime_jet(pf);

  std::array<FailSlot, kTreeIdentityCount> slots;
  std::mutex slot_mu;
  long trees_all = 0, trees_grown = 0;

  long base_pos = 0;
  for (int k = 0; k <= max_order; ++k) {
    const auto& level = levels[static_cast<size_t>(k)];
    parallel_chunks(
        static_cast<long>(level.size()), 64, [&](long, long lo, long hi) {
          for (long i = lo; i < hi; ++i) {
            const ExoticTree& t = level[static_cast<size_t>(i)];
            long pos = base_pos + i;
            auto fail = [&](TreeIdentity which) {
              std::lock_guard<std::mutex> lock(slot_mu);
              slots[which].offer(pos, t.key());
            };
            int order = t.exotic_order();
            Rat tf = tree_factorial(t);

            if (ExoticTree::parse(t.key()).key() != t.key())
              fail(kRoundtrip);

            if (k >= 1) {
              RemovalMultiset rm = removal_multiset(t);
              Rat leaf_sum = 0;   // sum over sites of 1/factorial'
              Rat weight_sum = 0; // sum over sites of aut' * weight'
              for (const auto& [key, entry] : rm) {
                Rat tfr = tree_factorial(entry.tree);
                leaf_sum += Rat(entry.site_count) / tfr;
                weight_sum += Rat(entry.site_count) *
                              Rat(aut_cached(entry.tree)) *
                              cm_weight(entry.tree);
              }
              if (Rat(order) / tf != leaf_sum)
                fail(kLeafFactorial);
              if (Rat(aut_cached(t)) * cm_weight(t) != weight_sum)
                fail(kLeafWeights);

              Rat cut_sum = 0;
              for (const auto& [key, entry] : effective_cut_multiset(t))
                cut_sum += Rat(entry.site_count) *
                           Rat(factorial(static_cast<unsigned>(order - 1))) /
                           tree_factorial(entry.tree);
              if (Rat(factorial(static_cast<unsigned>(order))) / tf != cut_sum)
                fail(kRootCut);
            }

            if (Rat(factorial(static_cast<unsigned>(order))) / tf !=
                Rat(linear_extensions(merged_poset(t))))
              fail(kLinearExt);

            Rat resolved = 0;
            for (const auto& [key, entry] : reduce_tree(t))
              resolved += Rat(entry.second) / tree_factorial(entry.first);
            if (Rat(1) / tf != resolved)
              fail(kPairResolution);

            FeynmanMultiIndex census = counting_map(t);
            if (!multi_gradings(census).populated)
              fail(kCensusPopulated);
            if (elementary_differential(t, ja, jb, jf) !=
                elementary_differential_multi(census, ja, jb, jf))
              fail(kCensusDifferential);
          }
        });
    base_pos += static_cast<long>(level.size());
    trees_all += static_cast<long>(level.size());
    if (k >= 1)
      trees_grown += static_cast<long>(level.size());
  }

  std::vector<IdentityResult> results;
  for (int which = 0; which < kTreeIdentityCount; ++which) {
    IdentityResult r;
    r.identity = tree_names[static_cast<size_t>(which)];
    r.max_order = max_order;
    bool grown_only = which == kLeafFactorial || which == kLeafWeights ||
                      which == kRootCut;
    r.checked = grown_only ? trees_grown : trees_all;
    r.pass = slots[static_cast<size_t>(which)].pos < 0;
    if (!r.pass)
      r.counterexample = slots[static_cast<size_t>(which)].witness;
    results.push_back(std::move(r));
  }

  // Weighted growth histories, level by level: scatter each tree's grafts
  // forward, then compare the accumulated weight with the closed formula.
  {
    IdentityResult r;
    r.identity = "growth-histories";
    r.max_order = max_order;
    r.pass = true;
    FailSlot slot;
    long pos = 0;
    std::map<std::string, Rat> gprev{{levels[0][0].key(), Rat(1)}};
    for (int k = 1; k <= max_order && slot.pos < 0; ++k) {
      const auto& prev = levels[static_cast<size_t>(k - 1)];
      const auto& cur = levels[static_cast<size_t>(k)];
      const long chunk = 32;
      long nchunks =
          (static_cast<long>(prev.size()) + chunk - 1) / chunk;
      std::vector<std::map<std::string, Rat>> parts(
          static_cast<size_t>(std::max<long>(nchunks, 1)));
      parallel_chunks(
          static_cast<long>(prev.size()), chunk, [&](long ci, long lo, long hi) {
            auto& part = parts[static_cast<size_t>(ci)];
            for (long i = lo; i < hi; ++i) {
              const ExoticTree& s = prev[static_cast<size_t>(i)];
              auto git = gprev.find(s.key());
              if (git == gprev.end())
                continue;
              const Rat& g = git->second;
              for (const auto& [key, entry] : graft_alpha(s))
                part[key] += entry.weight * g;
              for (const auto& [key, entry] : graft_beta_pair(s))
                part[key] += entry.weight * g;
            }
          });
      std::map<std::string, Rat> gnext;
      for (auto& part : parts)
        for (auto& [key, v] : part)
          gnext[key] += v;
      for (const ExoticTree& t : cur) {
        ++r.checked;
        auto it = gnext.find(t.key());
        Rat direct = Rat(factorial(static_cast<unsigned>(t.exotic_order()))) /
                     (Rat(aut_cached(t)) * tree_factorial(t));
        if (it == gnext.end() || it->second != direct) {
          slot.offer(pos, t.key());
          break;
        }
        ++pos;
      }
      if (gnext.size() != cur.size() && slot.pos < 0)
        slot.offer(pos, "grown tree outside the enumerated level " +
                            std::to_string(k));
      gprev = std::move(gnext);
    }
    r.pass = slot.pos < 0;
    if (!r.pass)
      r.counterexample = slot.witness;
    results.push_back(std::move(r));
  }

  // Leg pairings per isomorphism class: exhaustive contraction counts must
  // match the symmetry-factor ratio on every populated index.
  {
    IdentityResult r;
    r.identity = "leg-pairing-count";
    r.max_order = multi_max_length;
    r.pass = true;
    FailSlot slot;
    long checked = 0;
    std::mutex mu;
    long base = 0;
    for (int len = 1; len <= multi_max_length; ++len) {
      std::vector<FeynmanMultiIndex> list = enumerate_populated(len, {});
      parallel_chunks(
          static_cast<long>(list.size()), 2, [&](long, long lo, long hi) {
            for (long i = lo; i < hi; ++i) {
              const FeynmanMultiIndex& g = list[static_cast<size_t>(i)];
              MultiGradings mg = multi_gradings(g);
              if (mg.tilde_legs > 8)
                continue;
              std::map<std::string, long> expected;
              BigInt sf = symmetry_factor_multi(g);
              bool bad = false;
              for (const ExoticTree& t : trees_for(g)) {
                BigInt aut = aut_cached(t);
                if (sf % aut != 0) {
                  bad = true;
                  break;
                }
                expected[t.key()] =
                    static_cast<long>(BigInt(sf / aut).convert_to<long>());
              }
              if (bad || contraction_oracle(g) != expected) {
                std::lock_guard<std::mutex> lock(mu);
                slot.offer(base + i, g.text());
              }
              std::lock_guard<std::mutex> lock(mu);
              ++checked;
            }
          });
      base += static_cast<long>(list.size());
    }
    r.checked = checked;
    r.pass = slot.pos < 0;
    if (!r.pass)
      r.counterexample = slot.witness;
    results.push_back(std::move(r));
  }

  return results;
}

std::string identity_report_jsonl(const std::vector<IdentityResult>& results) {
  std::string out;
  for (const IdentityResult& r : results) {
    nlohmann::json j;
    j["identity"] = r.identity;
    j["max_order"] = r.max_order;
    j["checked_count"] = r.checked;
    j["status"] = r.pass ? "pass" : "fail";
    if (!r.pass)
      j["counterexample"] = r.counterexample;
    out += j.dump();
    out += '\n';
  }
  return out;
}

} // namespace exotic
