#include "exotic/verify.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>
#include <string>

using exotic::ClosedForm;
using exotic::FunctionSpec;
using exotic::McConfig;
using exotic::Rat;
using exotic::Scalar;
using exotic::SdeProblem;

namespace {

SdeProblem float_ou(const Rat& a, const Rat& sigma, double u0, bool square) {
  SdeProblem p;
  p.alpha = FunctionSpec::poly({Rat(0), -a});
  p.beta = FunctionSpec::poly({sigma});
  p.f = square ? FunctionSpec::poly({Rat(0), Rat(0), Rat(1)})
               : FunctionSpec::poly({Rat(0), Rat(1)});
  p.u0 = Scalar::real(u0);
  p.exact_mode = false;
  return p;
}

} // namespace

TEST_CASE("closed-form references evaluate the moment equations") {
  double a = 1.3, sigma = 0.4, u0 = 0.8, t = 0.35;
  CHECK(exotic::closed_form_reference(ClosedForm::OuMean, a, sigma, u0, t) ==
        doctest::Approx(u0 * std::exp(-a * t)));
  double second =
      u0 * u0 * std::exp(-2 * a * t) +
      sigma * sigma / (2 * a) * (1 - std::exp(-2 * a * t));
  CHECK(exotic::closed_form_reference(ClosedForm::OuSecondMoment, a, sigma,
                                      u0, t) == doctest::Approx(second));
  CHECK(exotic::closed_form_reference(ClosedForm::OuSecondMoment, 0.0, sigma,
                                      u0, t) ==
        doctest::Approx(u0 * u0 + sigma * sigma * t));
  CHECK(exotic::closed_form_reference(ClosedForm::GbmMean, a, sigma, u0, t) ==
        doctest::Approx(u0 * std::exp(a * t)));
  CHECK(exotic::closed_form_reference(ClosedForm::GbmSecondMoment, a, sigma,
                                      u0, t) ==
        doctest::Approx(u0 * u0 * std::exp((2 * a + sigma * sigma) * t)));
}

TEST_CASE("the identity suite passes at small order") {
  auto results = exotic::identity_suite(3, 4);
  CHECK(results.size() >= 8);
  std::set<std::string> names;
  for (const auto& r : results) {
    CAPTURE(r.identity);
    CAPTURE(r.counterexample);
    CHECK(r.pass);
    CHECK(r.checked > 0);
    CHECK(r.counterexample.empty());
    names.insert(r.identity);
  }
  CHECK(names.size() == results.size()); // distinct identity names
  std::string report = exotic::identity_report_jsonl(results);
  std::istringstream lines(report);
  std::string line;
  size_t parsed = 0;
  while (std::getline(lines, line)) {
    auto j = nlohmann::json::parse(line);
    CHECK(j.contains("identity"));
    CHECK(j.contains("max_order"));
    CHECK(j.contains("checked_count"));
    CHECK(j.at("status").get<std::string>() == "pass");
    ++parsed;
  }
  CHECK(parsed == results.size());
}

TEST_CASE("a failing identity is reported, not thrown") {
  std::vector<exotic::IdentityResult> fake(1);
  fake[0].identity = "example";
  fake[0].max_order = 2;
  fake[0].checked = 7;
  fake[0].pass = false;
  fake[0].counterexample = "o(a)";
  std::string report = exotic::identity_report_jsonl(fake);
  auto j = nlohmann::json::parse(report);
  CHECK(j.at("status").get<std::string>() == "fail");
  CHECK(j.at("counterexample").get<std::string>() == "o(a)");
}

TEST_CASE("path simulation is reproducible and worker-independent") {
  SdeProblem p = float_ou(Rat(1), Rat(1, 2), 1.0, false);
  McConfig c;
  c.t_end = 0.1;
  c.step = 0.01;
  c.paths = 4000;
  c.seed = 99;
  auto first = exotic::euler_maruyama_estimate(p, c);
  auto again = exotic::euler_maruyama_estimate(p, c);
  CHECK(first.mean == again.mean); // bitwise
  CHECK(first.std_error == again.std_error);

  setenv("EXOTIC_BSERIES_THREADS", "1", 1);
  auto serial = exotic::euler_maruyama_estimate(p, c);
  setenv("EXOTIC_BSERIES_THREADS", "7", 1);
  auto parallel = exotic::euler_maruyama_estimate(p, c);
  unsetenv("EXOTIC_BSERIES_THREADS");
  CHECK(serial.mean == parallel.mean); // bitwise
  CHECK(serial.std_error == parallel.std_error);

  CHECK(first.paths == 4000);
  CHECK(first.discarded == 0);
  CHECK(!first.generator.empty());

  // Different seeds shift the estimate.
  McConfig c2 = c;
  c2.seed = 100;
  CHECK(exotic::euler_maruyama_estimate(p, c2).mean != first.mean);
}

TEST_CASE("path simulation tracks the exact mean within a few errors") {
  SdeProblem p = float_ou(Rat(1), Rat(1, 2), 1.0, false);
  McConfig c;
  c.t_end = 0.2;
  c.step = 0.002;
  c.paths = 20000;
  c.seed = 31337;
  auto est = exotic::euler_maruyama_estimate(p, c);
  double truth =
      exotic::closed_form_reference(ClosedForm::OuMean, 1.0, 0.5, 1.0, 0.2);
  CHECK(std::abs(est.mean - truth) < 4.0 * est.std_error + 5.0 * c.step);
  CHECK(est.std_error > 0.0);
  CHECK(est.std_error < 0.01);
}

TEST_CASE("path simulation rejects misuse") {
  SdeProblem p = float_ou(Rat(1), Rat(1, 2), 1.0, false);
  McConfig c;
  c.t_end = 0.1;
  c.step = 0.01;
  c.paths = 0;
  c.seed = 1;
  CHECK_THROWS_AS(exotic::euler_maruyama_estimate(p, c),
                  std::invalid_argument);
  c.paths = 100;
  c.step = 0.0;
  CHECK_THROWS_AS(exotic::euler_maruyama_estimate(p, c),
                  std::invalid_argument);
  c.step = 0.01;
  SdeProblem exact = SdeProblem::from_json_text(
      R"({"u0":"1","mode":"exact",
          "alpha":{"kind":"poly","coeffs":["0","-1"]},
          "beta":{"kind":"poly","coeffs":["1/2"]},
          "f":{"kind":"poly","coeffs":["0","1"]}})");
  CHECK_THROWS_AS(exotic::euler_maruyama_estimate(exact, c),
                  std::invalid_argument);
}
