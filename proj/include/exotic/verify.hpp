#pragma once

#include "exotic/series.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace exotic {

struct McConfig {
  double t_end = 0.0;
  double step = 0.0;
  long paths = 0;
  std::uint64_t seed = 0;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long paths = 0;
  long discarded = 0;          // non-finite trajectories, reported not counted
  std::string generator;       // increment scheme recorded for reproducibility
};

// Euler-Maruyama weak estimate of E[f(u_{t_end})]. Floating mode only, specs
// must be pointwise evaluable (poly/expscale). Per-path substreams keyed by
// (seed, path index) and fixed-chunk accumulation make the result
// bit-identical for any worker count. Worker count is capped by the
// EXOTIC_BSERIES_THREADS environment variable.
McEstimate euler_maruyama_estimate(const SdeProblem& p, const McConfig& c);

enum class ClosedForm { OuMean, OuSecondMoment, GbmMean, GbmSecondMoment };

// Moment-ODE solutions:
//   ou_mean            u0 e^{-at}
//   ou_second_moment   u0^2 e^{-2at} + sigma^2/(2a) (1 - e^{-2at})
//                      (limit u0^2 + sigma^2 t when a = 0)
//   gbm_mean           u0 e^{at}
//   gbm_second_moment  u0^2 e^{(2a+sigma^2) t}
double closed_form_reference(ClosedForm which, double a, double sigma,
                             double u0, double t);

struct IdentityResult {
  std::string identity;
  int max_order = 0;
  long checked = 0;
  bool pass = false;
  std::string counterexample; // empty on pass
};

// Runs every combinatorial/series invariant over all enumerated trees with
// edge count <= max_order and all populated multi-indices with length <=
// multi_max_length. Failures are data, not exceptions.
std::vector<IdentityResult> identity_suite(int max_order,
                                           int multi_max_length = 5);

// One JSON object per line: {"identity":...,"max_order":...,
// "checked_count":...,"status":"pass"|"fail"[,"counterexample":...]}.
std::string identity_report_jsonl(const std::vector<IdentityResult>& results);

} // namespace exotic
