#include "exotic/series.hpp"

#include "exotic/growth.hpp"
#include "exotic/multiindex.hpp"

#include <json.hpp>

#include <cmath>
#include <stdexcept>

namespace exotic {

namespace {

using nlohmann::json;

Rat json_to_rat(const json& v, const char* what) {
  if (v.is_string())
    return rat_from_string(v.get<std::string>());
  if (v.is_number_integer())
    return Rat(v.get<long long>());
  if (v.is_number_float()) {
    double d = v.get<double>();
    if (d == std::floor(d) && std::abs(d) < 9.0e15)
      return Rat(static_cast<long long>(d));
    throw std::invalid_argument(std::string(what) +
                                ": non-integer numbers are ambiguous in "
                                "exact contexts, use a rational string");
  }
  throw std::invalid_argument(std::string(what) +
                              ": expected a rational string or integer");
}

double json_to_double(const json& v, const char* what) {
  if (v.is_number())
    return v.get<double>();
  if (v.is_string())
    return rat_from_string(v.get<std::string>()).convert_to<double>();
  throw std::invalid_argument(std::string(what) + ": expected a number");
}

json spec_to_json(const FunctionSpec& s, bool exact) {
  json j;
  switch (s.kind) {
  case FunctionSpec::Kind::Poly: {
    j["kind"] = "poly";
    json arr = json::array();
    for (const Rat& c : s.poly_coeffs)
      arr.push_back(rat_to_string(c));
    j["coeffs"] = std::move(arr);
    break;
  }
  case FunctionSpec::Kind::ExpScale:
    j["kind"] = "expscale";
    j["c"] = s.exp_c;
    j["lambda"] = s.exp_lambda;
    break;
  default: {
    j["kind"] = "derivs";
    json arr = json::array();
    for (const Scalar& v : s.derivs) {
      if (exact)
        arr.push_back(v.to_string());
      else
        arr.push_back(v.as_double());
    }
    j["values"] = std::move(arr);
    break;
  }
  }
  return j;
}

FunctionSpec spec_from_json(const json& j, bool exact, const char* who) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw std::invalid_argument(std::string(who) +
                                ": expected {\"kind\":...} object");
  std::string kind = j["kind"].get<std::string>();
  if (kind == "poly") {
    if (!j.contains("coeffs") || !j["coeffs"].is_array())
      throw std::invalid_argument(std::string(who) +
                                  ": poly needs a coeffs array");
    std::vector<Rat> c;
    for (const json& v : j["coeffs"])
      c.push_back(json_to_rat(v, who));
    return FunctionSpec::poly(std::move(c));
  }
  if (kind == "expscale") {
    if (exact)
      throw std::invalid_argument(std::string(who) +
                                  ": expscale requires float mode");
    if (!j.contains("c") || !j.contains("lambda"))
      throw std::invalid_argument(std::string(who) +
                                  ": expscale needs c and lambda");
    return FunctionSpec::expscale(json_to_double(j["c"], who),
                                  json_to_double(j["lambda"], who));
  }
  if (kind == "derivs") {
    if (!j.contains("values") || !j["values"].is_array())
      throw std::invalid_argument(std::string(who) +
                                  ": derivs needs a values array");
    std::vector<Scalar> vals;
    for (const json& v : j["values"]) {
      if (exact)
        vals.push_back(Scalar::rational(json_to_rat(v, who)));
      else
        vals.push_back(Scalar::real(json_to_double(v, who)));
    }
    return FunctionSpec::from_derivs(std::move(vals));
  }
  throw std::invalid_argument(std::string(who) + ": unknown kind '" + kind +
                              "'");
}

} // namespace

SdeProblem SdeProblem::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("problem JSON: ") + e.what());
  }
  if (!j.is_object())
    throw std::invalid_argument("problem JSON: expected an object");
  for (const char* field : {"u0", "mode", "alpha", "beta", "f"})
    if (!j.contains(field))
      throw std::invalid_argument(std::string("problem JSON: missing '") +
                                  field + "'");
  SdeProblem p;
  std::string mode = j["mode"].is_string() ? j["mode"].get<std::string>() : "";
  if (mode == "exact")
    p.exact_mode = true;
  else if (mode == "float")
    p.exact_mode = false;
  else
    throw std::invalid_argument("problem JSON: mode must be \"exact\" or "
                                "\"float\"");
  p.u0 = p.exact_mode ? Scalar::rational(json_to_rat(j["u0"], "u0"))
                      : Scalar::real(json_to_double(j["u0"], "u0"));
  p.alpha = spec_from_json(j["alpha"], p.exact_mode, "alpha");
  p.beta = spec_from_json(j["beta"], p.exact_mode, "beta");
  p.f = spec_from_json(j["f"], p.exact_mode, "f");
  return p;
}

std::string SdeProblem::to_json_text() const {
  json j;
  j["mode"] = exact_mode ? "exact" : "float";
  if (exact_mode)
    j["u0"] = u0.to_string();
  else
    j["u0"] = u0.as_double();
  j["alpha"] = spec_to_json(alpha, exact_mode);
  j["beta"] = spec_to_json(beta, exact_mode);
  j["f"] = spec_to_json(f, exact_mode);
  return j.dump();
}

std::string TruncatedSeries::to_json() const {
  json j;
  j["order"] = order;
  j["mode"] = exact_mode ? "exact" : "float";
  json c = json::object();
  for (const auto& [k, v] : coeffs) {
    if (exact_mode)
      c[std::to_string(k)] = v.to_string();
    else
      c[std::to_string(k)] = v.as_double();
  }
  j["coeffs"] = std::move(c);
  return j.dump();
}

Scalar TruncatedSeries::coeff(int power) const {
  auto it = coeffs.find(power);
  return it == coeffs.end() ? Scalar::zero(exact_mode) : it->second;
}

namespace {

void check_problem(const SdeProblem& p, int order) {
  if (order < 0)
    throw std::invalid_argument("series order must be >= 0");
  if (p.u0.is_exact() != p.exact_mode)
    throw std::invalid_argument("u0 mode differs from problem mode");
}

TruncatedSeries zero_series(const SdeProblem& p, int order) {
  TruncatedSeries s;
  s.order = order;
  s.exact_mode = p.exact_mode;
  for (int k = 0; k <= order; ++k)
    s.coeffs.emplace(k, Scalar::zero(p.exact_mode));
  return s;
}

GrowthRule rule_for(const SdeProblem& p) {
  GrowthRule r;
  if (p.alpha.is_identically_zero())
    r.allow_alpha = false;
  else if (auto d = p.alpha.poly_degree())
    r.max_alpha_fertility = *d;
  if (p.beta.is_identically_zero())
    r.allow_beta = false;
  else if (auto d = p.beta.poly_degree())
    r.max_beta_fertility = *d;
  if (auto d = p.f.poly_degree())
    r.max_root_fertility = *d;
  return r;
}

Scalar rat_in_mode(const Rat& q, bool exact) {
  return exact ? Scalar::rational(q) : Scalar::real(q.convert_to<double>());
}

} // namespace

TruncatedSeries expand_by_trees(const SdeProblem& p, int order) {
  check_problem(p, order);
  TruncatedSeries s = zero_series(p, order);
  if (p.f.is_identically_zero())
    return s;
  GrowthRule rule = rule_for(p);
  auto levels = enumerate_trees(order, rule);

  int need_alpha = 0, need_beta = 0, need_f = 0;
  for (const auto& level : levels)
    for (const ExoticTree& t : level) {
      need_f = std::max(need_f, t.fertility(t.root()));
      for (int v = 1; v < t.node_count(); ++v) {
        int& need = t.node(v).colour == Colour::Alpha ? need_alpha : need_beta;
        need = std::max(need, t.fertility(v));
      }
    }
  Jet ja = jet_from_spec(p.alpha, p.u0, need_alpha);
  Jet jb = jet_from_spec(p.beta, p.u0, need_beta);
  Jet jf = jet_from_spec(p.f, p.u0, need_f);

  for (int k = 0; k <= order; ++k) {
    Scalar acc = Scalar::zero(p.exact_mode);
    for (const ExoticTree& t : levels[static_cast<size_t>(k)]) {
      Rat w = Rat(t.exotic_order()) /
              (Rat(automorphism_count(t)) * tree_factorial(t));
      acc += rat_in_mode(w, p.exact_mode) *
             elementary_differential(t, ja, jb, jf);
    }
    s.coeffs[k] = acc;
  }
  return s;
}

TruncatedSeries expand_by_multiindices(const SdeProblem& p, int order) {
  check_problem(p, order);
  TruncatedSeries s = zero_series(p, order);
  if (p.f.is_identically_zero())
    return s;
  GrowthRule gr = rule_for(p);
  MultiIndexRule rule{gr.max_alpha_fertility, gr.max_beta_fertility,
                      gr.max_root_fertility, gr.allow_alpha, gr.allow_beta};

  std::vector<std::vector<FeynmanMultiIndex>> by_length;
  for (int len = 1; len <= order + 1; ++len)
    by_length.push_back(enumerate_populated(len, rule));

  int need_alpha = 0, need_beta = 0, need_f = 0;
  for (const auto& list : by_length)
    for (const FeynmanMultiIndex& g : list) {
      need_f = std::max(need_f, g.root_fertility);
      for (const auto& [n, c] : g.gamma_alpha)
        need_alpha = std::max(need_alpha, n);
      for (const auto& [kk, c] : g.gamma_beta)
        need_beta = std::max(need_beta, kk.second);
    }
  Jet ja = jet_from_spec(p.alpha, p.u0, need_alpha);
  Jet jb = jet_from_spec(p.beta, p.u0, need_beta);
  Jet jf = jet_from_spec(p.f, p.u0, need_f);

  for (const auto& list : by_length) {
    for (const FeynmanMultiIndex& g : list) {
      std::map<int, Rat> poly = realization_multi(g);
      if (poly.empty())
        continue;
      Rat sf(symmetry_factor_multi(g));
      Scalar diff = elementary_differential_multi(g, ja, jb, jf);
      for (const auto& [power, r] : poly) {
        if (power > order)
          continue;
        s.coeffs[power] += rat_in_mode(r / sf, p.exact_mode) * diff;
      }
    }
  }
  return s;
}

TruncatedSeries expand_by_operator(const SdeProblem& p, int order) {
  check_problem(p, order);
  TruncatedSeries s = zero_series(p, order);
  if (p.f.is_identically_zero())
    return s;
  Jet ja = jet_from_spec(p.alpha, p.u0, std::max(0, 2 * order - 2));
  Jet jb = jet_from_spec(p.beta, p.u0, std::max(0, 2 * order - 2));
  Jet g = jet_from_spec(p.f, p.u0, 2 * order);
  Rat kfact = 1;
  s.coeffs[0] = g.d[0];
  for (int k = 1; k <= order; ++k) {
    g = apply_generator(g, ja, jb);
    kfact *= k;
    s.coeffs[k] = g.d[0] * rat_in_mode(Rat(1) / kfact, p.exact_mode);
  }
  return s;
}

Scalar evaluate_series(const TruncatedSeries& s, const Scalar& t) {
  Scalar acc = Scalar::zero(s.exact_mode);
  for (int k = s.order; k >= 0; --k)
    acc = acc * t + s.coeff(k);
  return acc;
}

double series_value_at(const TruncatedSeries& s, double t) {
  double acc = 0.0;
  for (int k = s.order; k >= 0; --k)
    acc = acc * t + s.coeff(k).as_double();
  return acc;
}

} // namespace exotic
