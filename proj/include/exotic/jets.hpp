#pragma once

#include "exotic/scalar.hpp"
#include "exotic/tree.hpp"

#include <optional>
#include <string>
#include <vector>

namespace exotic {

// How a scalar coefficient function is specified.
//   poly:     rational coefficients, ascending powers of u (exact-capable)
//   expscale: c * e^{lambda * u} (floating only)
//   derivs:   derivative values at u0, verbatim
struct FunctionSpec {
  enum class Kind { Poly, ExpScale, Derivs };
  Kind kind = Kind::Poly;
  std::vector<Rat> poly_coeffs;
  double exp_c = 0.0;
  double exp_lambda = 0.0;
  std::vector<Scalar> derivs;

  static FunctionSpec poly(std::vector<Rat> coeffs);
  static FunctionSpec expscale(double c, double lambda);
  static FunctionSpec from_derivs(std::vector<Scalar> values);

  // Degree of a poly spec; nullopt when not poly or identically zero.
  std::optional<int> poly_degree() const;
  bool is_identically_zero() const;

  // Pointwise evaluation in floating mode (poly and expscale only).
  double eval_double(double u) const;
};

// Array of derivative values g^(0..order)(u0). Derivative values, not
// power-series coefficients: no implicit k! anywhere.
struct Jet {
  Scalar base;            // u0
  std::vector<Scalar> d;  // d[k] = g^{(k)}(u0)
  int order() const { return static_cast<int>(d.size()) - 1; }
  bool exact() const { return base.is_exact(); }
};

// d[k] = g^{(k)}(u0) exactly for poly, c*lambda^k*e^{lambda*u0} for expscale
// (floating mode required), verbatim for derivs (list must cover `order`).
Jet jet_from_spec(const FunctionSpec& s, const Scalar& u0, int order);

// Leibniz product; output order = min of the input orders.
Jet jet_product(const Jet& g, const Jet& h);

// Jet of  alpha*g' + (1/2)*beta^2*g''  (the diffusion generator applied to
// g), output order = g.order - 2. alpha and beta must reach order g.order-1
// and g.order-2 respectively.
Jet apply_generator(const Jet& g, const Jet& alpha, const Jet& beta);

// f^{(fertility(root))}(u0) * prod over non-root vertices of
// colour^{(fertility(v))}(u0).
Scalar elementary_differential(const ExoticTree& t, const Jet& alpha,
                               const Jet& beta, const Jet& f);

// k-fold application of the generator to f, evaluated at u0.
// Requires f.order >= 2k.
Scalar iterated_generator(int k, const Jet& alpha, const Jet& beta,
                          const Jet& f);

} // namespace exotic
