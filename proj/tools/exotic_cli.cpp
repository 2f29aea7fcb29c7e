#include "exotic/growth.hpp"
#include "exotic/multiindex.hpp"
#include "exotic/series.hpp"
#include "exotic/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using exotic::ExoticTree;
using exotic::GrowthRule;
using exotic::Rat;
using exotic::SdeProblem;
using exotic::TruncatedSeries;
using nlohmann::json;

// 0 = pass, 1 = verification failure, 2 = input error, 3 = method
// disagreement.
constexpr int kExitPass = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitInput = 2;
constexpr int kExitDisagree = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::invalid_argument("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GrowthRule parse_rule(const std::string& text) {
  GrowthRule r;
  if (text.empty())
    return r;
  std::istringstream is(text);
  std::string part;
  while (std::getline(is, part, ',')) {
    size_t colon = part.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("rule entry '" + part +
                                  "' is not key:value");
    std::string key = part.substr(0, colon);
    int value;
    try {
      size_t used;
      value = std::stoi(part.substr(colon + 1), &used);
      if (used != part.size() - colon - 1)
        throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw std::invalid_argument("rule cap '" + part +
                                  "' needs an integer value");
    }
    if (value < 0)
      throw std::invalid_argument("rule caps must be >= 0");
    if (key == "a")
      r.max_alpha_fertility = value;
    else if (key == "b")
      r.max_beta_fertility = value;
    else if (key == "root")
      r.max_root_fertility = value;
    else
      throw std::invalid_argument("unknown rule key '" + key +
                                  "' (expected a, b, or root)");
  }
  return r;
}

TruncatedSeries expand(const SdeProblem& p, int order,
                       const std::string& method) {
  if (method == "trees")
    return exotic::expand_by_trees(p, order);
  if (method == "multi")
    return exotic::expand_by_multiindices(p, order);
  if (method == "operator")
    return exotic::expand_by_operator(p, order);
  throw std::invalid_argument("unknown method '" + method +
                              "' (expected trees, multi, or operator)");
}

int cmd_trees_enumerate(int order, const std::string& rule_text,
                        const std::string& format) {
  GrowthRule rule = parse_rule(rule_text);
  auto levels = exotic::enumerate_trees(order, rule);
  if (format == "text") {
    for (const auto& level : levels)
      for (const ExoticTree& t : level)
        std::cout << t.key() << "\n";
    return kExitPass;
  }
  json j;
  j["order"] = order;
  json arr = json::array();
  for (const auto& level : levels) {
    json keys = json::array();
    for (const ExoticTree& t : level)
      keys.push_back(t.key());
    arr.push_back(std::move(keys));
  }
  j["levels"] = std::move(arr);
  std::cout << j.dump() << "\n";
  return kExitPass;
}

int cmd_trees_info(const std::string& text, const std::string& format) {
  ExoticTree t = ExoticTree::parse(text);
  std::string sigma = exotic::automorphism_count(t).str();
  std::string fact = exotic::rat_to_string(exotic::tree_factorial(t));
  std::string cm = exotic::rat_to_string(exotic::cm_weight(t));
  std::string real = exotic::rat_to_string(exotic::realization_coefficient(t));
  if (format == "text") {
    std::cout << "canonical = " << t.key() << "\n"
              << "exotic_order = " << t.exotic_order() << "\n"
              << "edge_grading = " << t.edge_count() << "\n"
              << "sigma_e = " << sigma << "\n"
              << "tree_factorial = " << fact << "\n"
              << "cm_weight = " << cm << "\n"
              << "realization = " << real << "\n";
    return kExitPass;
  }
  json j;
  j["canonical"] = t.key();
  j["exotic_order"] = t.exotic_order();
  j["edge_grading"] = t.edge_count();
  j["sigma_e"] = sigma;
  j["tree_factorial"] = fact;
  j["cm_weight"] = cm;
  j["realization"] = real;
  std::cout << j.dump() << "\n";
  return kExitPass;
}

int cmd_series_expand(const std::string& sde_path, int order,
                      const std::string& method) {
  SdeProblem p = SdeProblem::from_json_text(slurp(sde_path));
  std::cout << expand(p, order, method).to_json() << "\n";
  return kExitPass;
}

bool coeffs_agree(const exotic::Scalar& x, const exotic::Scalar& y,
                  bool exact) {
  if (exact)
    return x == y;
  double a = x.as_double(), b = y.as_double();
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

int cmd_series_compare(const std::string& sde_path, int order) {
  SdeProblem p = SdeProblem::from_json_text(slurp(sde_path));
  TruncatedSeries by_trees = exotic::expand_by_trees(p, order);
  TruncatedSeries by_multi = exotic::expand_by_multiindices(p, order);
  TruncatedSeries by_op = exotic::expand_by_operator(p, order);
  for (int k = 0; k <= order; ++k) {
    exotic::Scalar a = by_trees.coeff(k);
    exotic::Scalar b = by_multi.coeff(k);
    exotic::Scalar c = by_op.coeff(k);
    if (!coeffs_agree(a, b, p.exact_mode) || !coeffs_agree(a, c, p.exact_mode)) {
      json j;
      j["agree"] = false;
      j["first_difference"] = {{"power", k},
                               {"trees", a.to_string()},
                               {"multi", b.to_string()},
                               {"operator", c.to_string()}};
      std::cout << j.dump() << "\n";
      return kExitDisagree;
    }
  }
  json j;
  j["agree"] = true;
  j["order"] = order;
  j["series"] = json::parse(by_trees.to_json());
  std::cout << j.dump() << "\n";
  return kExitPass;
}

int cmd_verify(int max_order, int multi_length) {
  auto results = exotic::identity_suite(max_order, multi_length);
  std::cout << exotic::identity_report_jsonl(results);
  for (const auto& r : results)
    if (!r.pass)
      return kExitVerifyFail;
  return kExitPass;
}

int cmd_mc(const std::string& sde_path, double t, long paths, double step,
           std::uint64_t seed, int order, double ctol,
           const std::string& method) {
  SdeProblem p = SdeProblem::from_json_text(slurp(sde_path));
  if (p.exact_mode)
    throw std::invalid_argument("mc needs a float-mode problem file");
  if (paths < 100)
    throw std::invalid_argument("mc needs at least 100 paths");
  exotic::McConfig cfg;
  cfg.t_end = t;
  cfg.step = step;
  cfg.paths = paths;
  cfg.seed = seed;
  exotic::McEstimate est = exotic::euler_maruyama_estimate(p, cfg);
  TruncatedSeries s = expand(p, order, method);
  double series_value = exotic::series_value_at(s, t);
  double diff = std::abs(series_value - est.mean);
  double tol = 3.0 * est.std_error + ctol * step;
  json j;
  j["mc_mean"] = est.mean;
  j["std_error"] = est.std_error;
  j["paths"] = est.paths;
  j["discarded"] = est.discarded;
  j["generator"] = est.generator;
  j["series_value"] = series_value;
  j["series_order"] = order;
  j["difference"] = diff;
  j["tolerance"] = tol;
  bool pass = diff <= tol;
  j["pass"] = pass;
  std::cout << j.dump() << "\n";
  return pass ? kExitPass : kExitVerifyFail;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exotic B-series toolkit: expansion of E[f(u_t)] for scalar "
               "diffusions over decorated rooted trees"};
  app.require_subcommand(1);

  auto* trees = app.add_subcommand("trees", "enumerate or inspect trees");
  trees->require_subcommand(1);
  int enum_order = 0;
  std::string enum_rule, enum_format = "json";
  auto* tenum =
      trees->add_subcommand("enumerate", "list canonical trees by edge count");
  tenum->add_option("--order", enum_order, "maximum edge count")->required();
  tenum->add_option("--rule", enum_rule,
                    "fertility caps, e.g. a:1,b:0,root:2");
  tenum->add_option("--format", enum_format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));
  std::string info_tree, info_format = "json";
  auto* tinfo = trees->add_subcommand("info", "print invariants of one tree");
  tinfo->add_option("tree", info_tree, "tree in o/a/b#N syntax")->required();
  tinfo->add_option("--format", info_format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));

  auto* series = app.add_subcommand("series", "truncated expansions");
  series->require_subcommand(1);
  std::string exp_sde, exp_method = "trees";
  int exp_order = 0;
  auto* sexp = series->add_subcommand("expand", "print one expansion");
  sexp->add_option("--sde", exp_sde, "problem JSON file")->required();
  sexp->add_option("--order", exp_order, "truncation order")->required();
  sexp->add_option("--method", exp_method, "trees, multi, or operator")
      ->check(CLI::IsMember({"trees", "multi", "operator"}));
  std::string cmp_sde;
  int cmp_order = 0;
  auto* scmp =
      series->add_subcommand("compare", "run all three expansion routes");
  scmp->add_option("--sde", cmp_sde, "problem JSON file")->required();
  scmp->add_option("--order", cmp_order, "truncation order")->required();

  int verify_order = 4, verify_multi = 5;
  auto* ver = app.add_subcommand("verify", "run the identity suite");
  ver->add_option("--max-order", verify_order, "maximum tree edge count");
  ver->add_option("--multi-length", verify_multi,
                  "maximum multi-index length");

  std::string mc_sde, mc_method = "trees";
  double mc_t = 0.0, mc_step = 0.0, mc_ctol = 5.0;
  long mc_paths = 0;
  std::uint64_t mc_seed = 12345;
  int mc_order = 6;
  auto* mc = app.add_subcommand("mc", "weak Euler-Maruyama cross-check");
  mc->add_option("--sde", mc_sde, "problem JSON file (float mode)")
      ->required();
  mc->add_option("--t", mc_t, "end time")->required();
  mc->add_option("--paths", mc_paths, "number of paths (>= 100)")->required();
  mc->add_option("--step", mc_step, "time step")->required();
  mc->add_option("--seed", mc_seed, "base seed (default 12345)");
  mc->add_option("--order", mc_order, "series truncation order (default 6)");
  mc->add_option("--ctol", mc_ctol,
                 "bias allowance per unit step (default 5)");
  mc->add_option("--method", mc_method, "series route to compare against")
      ->check(CLI::IsMember({"trees", "multi", "operator"}));

  try {
    app.parse(argc, argv);
    if (tenum->parsed())
      return cmd_trees_enumerate(enum_order, enum_rule, enum_format);
    if (tinfo->parsed())
      return cmd_trees_info(info_tree, info_format);
    if (sexp->parsed())
      return cmd_series_expand(exp_sde, exp_order, exp_method);
    if (scmp->parsed())
      return cmd_series_compare(cmp_sde, cmp_order);
    if (ver->parsed())
      return cmd_verify(verify_order, verify_multi);
    if (mc->parsed())
      return cmd_mc(mc_sde, mc_t, mc_paths, mc_step, mc_seed, mc_order,
                    mc_ctol, mc_method);
    std::cerr << "no subcommand selected\n";
    return kExitInput;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  } catch (const exotic::TreeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
