#pragma once

#include "exotic/jets.hpp"
#include "exotic/scalar.hpp"

#include <map>
#include <string>

namespace exotic {

// du = alpha(u) dt + beta(u) dW, observable f, start point u0.
struct SdeProblem {
  FunctionSpec alpha;
  FunctionSpec beta;
  FunctionSpec f;
  Scalar u0;
  bool exact_mode = true;

  // Round-trips the CLI JSON document
  // {"u0":"1","mode":"exact","alpha":{"kind":"poly","coeffs":[...]},...}.
  static SdeProblem from_json_text(const std::string& text);
  std::string to_json_text() const;
};

// Truncated expansion of E[f(u_t)] in powers of t.
struct TruncatedSeries {
  int order = 0;                 // highest included power
  std::map<int, Scalar> coeffs;  // missing powers are zero
  bool exact_mode = true;

  std::string to_json() const;  // {"order":N,"coeffs":{"0":"1",...},"mode":...}
  Scalar coeff(int power) const;
};

// Sum over trees with k edges of
// exotic_order / (sigma_e * tree_factorial) * elementary differential,
// per power k <= order.
TruncatedSeries expand_by_trees(const SdeProblem& p, int order);

// Sum over populated multi-indices of length k+1 of
// elementary_differential_multi / sigma_F * realization_multi.
TruncatedSeries expand_by_multiindices(const SdeProblem& p, int order);

// coeff(t^k) = (k-fold generator applied to f)(u0) / k!.
TruncatedSeries expand_by_operator(const SdeProblem& p, int order);

// Horner evaluation; t must match the series mode.
Scalar evaluate_series(const TruncatedSeries& s, const Scalar& t);

// Convenience: Horner evaluation in binary64 regardless of mode.
double series_value_at(const TruncatedSeries& s, double t);

} // namespace exotic
