#include "exotic/jets.hpp"

#include <cmath>
#include <stdexcept>

namespace exotic {

FunctionSpec FunctionSpec::poly(std::vector<Rat> coeffs) {
  FunctionSpec s;
  s.kind = Kind::Poly;
  s.poly_coeffs = std::move(coeffs);
  return s;
}

FunctionSpec FunctionSpec::expscale(double c, double lambda) {
  FunctionSpec s;
  s.kind = Kind::ExpScale;
  s.exp_c = c;
  s.exp_lambda = lambda;
  return s;
}

FunctionSpec FunctionSpec::from_derivs(std::vector<Scalar> values) {
  FunctionSpec s;
  s.kind = Kind::Derivs;
  s.derivs = std::move(values);
  return s;
}

std::optional<int> FunctionSpec::poly_degree() const {
  if (kind != Kind::Poly)
    return std::nullopt;
  for (int i = static_cast<int>(poly_coeffs.size()) - 1; i >= 0; --i)
    if (!poly_coeffs[static_cast<size_t>(i)].is_zero())
      return i;
  return std::nullopt;
}

bool FunctionSpec::is_identically_zero() const {
  switch (kind) {
  case Kind::Poly:
    return !poly_degree().has_value();
  case Kind::ExpScale:
    return exp_c == 0.0;
  default:
    for (const Scalar& v : derivs)
      if (!v.is_zero())
        return false;
    return true;
  }
}

double FunctionSpec::eval_double(double u) const {
  switch (kind) {
  case Kind::Poly: {
    double r = 0.0;
    for (size_t i = poly_coeffs.size(); i-- > 0;)
      r = r * u + poly_coeffs[i].convert_to<double>();
    return r;
  }
  case Kind::ExpScale:
    return exp_c * std::exp(exp_lambda * u);
  default:
    throw std::invalid_argument(
        "a derivative-list function has no pointwise values");
  }
}

Jet jet_from_spec(const FunctionSpec& s, const Scalar& u0, int order) {
  if (order < 0)
    throw std::invalid_argument("jet order must be >= 0");
  Jet j;
  j.base = u0;
  j.d.reserve(static_cast<size_t>(order) + 1);
  switch (s.kind) {
  case FunctionSpec::Kind::Poly: {
    // Differentiate the coefficient vector repeatedly, evaluating at u0.
    std::vector<Scalar> c;
    c.reserve(s.poly_coeffs.size());
    for (const Rat& q : s.poly_coeffs)
      c.push_back(u0.is_exact() ? Scalar::rational(q)
                                : Scalar::real(q.convert_to<double>()));
    for (int k = 0; k <= order; ++k) {
      Scalar value = Scalar::zero(u0.is_exact());
      for (size_t i = c.size(); i-- > 0;)
        value = value * u0 + c[i];
      j.d.push_back(value);
      // c <- derivative of c
      for (size_t i = 0; i + 1 < c.size(); ++i) {
        Scalar scale = u0.is_exact()
                           ? Scalar::rational(Rat(i + 1))
                           : Scalar::real(static_cast<double>(i + 1));
        c[i] = c[i + 1] * scale;
      }
      if (!c.empty())
        c.pop_back();
    }
    return j;
  }
  case FunctionSpec::Kind::ExpScale: {
    if (u0.is_exact())
      throw std::invalid_argument(
          "exponential coefficients require floating mode");
    double v = s.exp_c * std::exp(s.exp_lambda * u0.as_double());
    for (int k = 0; k <= order; ++k) {
      j.d.push_back(Scalar::real(v));
      v *= s.exp_lambda;
    }
    return j;
  }
  default: {
    if (static_cast<int>(s.derivs.size()) <= order)
      throw std::invalid_argument("derivative list shorter than jet order");
    for (int k = 0; k <= order; ++k) {
      const Scalar& v = s.derivs[static_cast<size_t>(k)];
      if (v.is_exact() != u0.is_exact())
        throw std::invalid_argument("derivative list mode differs from u0");
      j.d.push_back(v);
    }
    return j;
  }
  }
}

Jet jet_product(const Jet& g, const Jet& h) {
  Jet r;
  r.base = g.base;
  int order = std::min(g.order(), h.order());
  bool exact = g.base.is_exact();
  for (int k = 0; k <= order; ++k) {
    Scalar acc = Scalar::zero(exact);
    for (int i = 0; i <= k; ++i) {
      BigInt c = binomial(static_cast<unsigned>(k), static_cast<unsigned>(i));
      Scalar w = exact ? Scalar::rational(Rat(c))
                       : Scalar::real(c.convert_to<double>());
      acc += w * g.d[static_cast<size_t>(i)] *
             h.d[static_cast<size_t>(k - i)];
    }
    r.d.push_back(acc);
  }
  return r;
}

Jet apply_generator(const Jet& g, const Jet& alpha, const Jet& beta) {
  if (g.order() < 2)
    throw std::invalid_argument("generator needs a jet of order >= 2");
  int m = g.order() - 2;
  bool exact = g.base.is_exact();

  Jet g1, g2; // first and second derivative jets of g
  g1.base = g2.base = g.base;
  for (int k = 0; k + 1 <= g.order(); ++k)
    g1.d.push_back(g.d[static_cast<size_t>(k) + 1]);
  for (int k = 0; k + 2 <= g.order(); ++k)
    g2.d.push_back(g.d[static_cast<size_t>(k) + 2]);

  Jet drift = jet_product(alpha, g1);
  Jet noise = jet_product(jet_product(beta, beta), g2);
  if (drift.order() < m || noise.order() < m)
    throw std::invalid_argument("alpha/beta jets too short for generator");

  Scalar half =
      exact ? Scalar::rational(Rat(1, 2)) : Scalar::real(0.5);
  Jet r;
  r.base = g.base;
  for (int k = 0; k <= m; ++k)
    r.d.push_back(drift.d[static_cast<size_t>(k)] +
                  half * noise.d[static_cast<size_t>(k)]);
  return r;
}

Scalar elementary_differential(const ExoticTree& t, const Jet& alpha,
                               const Jet& beta, const Jet& f) {
  auto deriv = [](const Jet& j, int k, const char* who) -> const Scalar& {
    if (k > j.order())
      throw std::invalid_argument(std::string(who) +
                                  " jet too short for this tree");
    return j.d[static_cast<size_t>(k)];
  };
  Scalar prod = deriv(f, t.fertility(t.root()), "f");
  for (int v = 1; v < t.node_count(); ++v) {
    const Jet& j = t.node(v).colour == Colour::Alpha ? alpha : beta;
    const char* who = t.node(v).colour == Colour::Alpha ? "alpha" : "beta";
    prod = prod * deriv(j, t.fertility(v), who);
  }
  return prod;
}

Scalar iterated_generator(int k, const Jet& alpha, const Jet& beta,
                          const Jet& f) {
  if (k < 0)
    throw std::invalid_argument("iterated generator: k must be >= 0");
  if (f.order() < 2 * k)
    throw std::invalid_argument("iterated generator: f jet order must be >= 2k");
  Jet g = f;
  for (int i = 0; i < k; ++i)
    g = apply_generator(g, alpha, beta);
  return g.d[0];
}

} // namespace exotic
