#include <cmath>
#include <sstream>

#include "commands.hpp"
#include "config.hpp"
#include "doctest.h"
#include "rank1sft/eigenfunctions.hpp"

using namespace rank1sft;
using namespace rank1sft::cli;
using rank1sft::cli::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

json parse_out(const Run& r) { return json::parse(r.out); }

std::string rule_of(const json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.rule();
  }
  return "";
}

double cell(const std::string& s) { return s.empty() ? NAN : std::stod(s); }

}  // namespace

TEST_CASE("config: presets, raw multiplicities and defaults") {
  const auto c = parse_config(json{{"space", "real-hyperbolic p=9 q=1"}});
  CHECK(c.multiplicities == spaces::MultiplicityDatum{0, 8, 0, 0, 2});
  CHECK(c.warnings.empty());
  const auto d = parse_config(json{{"space", {{"m1p", 2}, {"m1m", 3}, {"m2p", 0}, {"m2m", 0}}}});
  CHECK(d.multiplicities.orbits == 2);
  REQUIRE(d.warnings.size() == 1);
  CHECK(d.space_name == "custom");
  const auto e = parse_config(json{{"space", {{"preset", "riemannian-H3"}}},
                                   {"eval", {{"lambda", {{"re", 0.5}, {"im", {{"from", 0}, {"to", 2}, {"count", 3}}}}}}}});
  REQUIRE(e.eval.lambdas.size() == 3);
  CHECK(e.eval.lambdas[2] == cplx(0.5, 2.0));
}

TEST_CASE("config: rejections name the rule") {
  CHECK(rule_of(json::object()) == "space");
  CHECK(rule_of(json{{"space", "no such space"}}) == "preset");
  CHECK(rule_of(json{{"space", {{"m1p", 1}, {"m1m", 2}, {"m2p", 0}, {"m2m", 1}, {"orbits", 1}}}}) == "m2m>0 => m1p=m1m");
  CHECK(rule_of(json{{"space", {{"m1p", 0}, {"m1m", 0}, {"m2p", 1}, {"m2m", 0}, {"orbits", 1}}}}) == "m1p+m1m>0");
  CHECK(rule_of(json{{"space", "riemannian-H3"}, {"r", 2.5}}) == "r-range");
  // gamma_r = 3 = lambda_0 at r = 8/7 on (0,8,0,0).
  CHECK(rule_of(json{{"space", "real-hyperbolic p=9 q=1"}, {"r", 8.0 / 7.0}}) == "r-singular");
  CHECK(rule_of(json{{"space", "riemannian-H3"}, {"colour", 1}}) == "unknown-key");
  CHECK(rule_of(json{{"space", "riemannian-H3"}, {"eval", {{"object", "zeta"}}}}) == "eval-object");
  CHECK(rule_of(json{{"space", "riemannian-H3"}, {"r", "one"}}) == "type");
  CHECK(rule_of(json{{"space", "riemannian-H3"}, {"transform", {{"function", {{"kind", "discrete"}}}}}}) ==
        "discrete-index");
  CHECK(rule_of(json{{"space", "riemannian-H3"}, {"output", {{"format", "xml"}}}}) == "format");
}

TEST_CASE("describe: derived data") {
  const auto r = invoke({"describe", "--space", "real-hyperbolic p=9 q=1", "--r", "1.3333333333333333"});
  REQUIRE(r.code == 0);
  const auto j = parse_out(r);
  CHECK(j["rho"] == 4.0);
  CHECK(j["L"] == json::array({3.0, 1.0}));
  CHECK(j["L_r"] == json::array({1.0}));
  CHECK(j["L_r_complement"] == json::array({3.0}));
  CHECK(j["gamma_r"].get<double>() == doctest::Approx(2.0));
  CHECK(j["strip"]["left"].get<double>() == doctest::Approx(-2.0));
  CHECK(j["q_R"]["leading"] == 8.0);  // roots 1/2, 1, 3/2

  const auto h = parse_out(invoke({"describe", "--space", "riemannian-H3"}));
  CHECK(h["L"].empty());
}

TEST_CASE("exit status contract") {
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({"describe", "--space", "nowhere"}).code == 2);
  CHECK(invoke({"describe", "--config", "/nonexistent/config.json"}).code == 2);
  CHECK(invoke({"check", "--space", "riemannian-H3"}).code == 2);  // no suite
  CHECK(invoke({"check", "kernel", "--space", "riemannian-H3"}).code == 0);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("eval: closed forms on H3") {
  const auto r = invoke({"eval", "eisenstein", "--space", "riemannian-H3", "--format", "csv"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "lambda_re,lambda_im,t,w,value_re,value_im,status");
  int rows = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string x; std::getline(ss, x, ',');) f.push_back(x);
    REQUIRE(f.size() == 7);
    const cplx l(cell(f[0]), cell(f[1]));
    const double t = cell(f[2]);
    const cplx v(cell(f[4]), cell(f[5]));
    const cplx expect = std::sinh(l * t) / std::sinh(t);
    CHECK(std::abs(v - expect) < 1e-10 * std::abs(expect));
    CHECK(f[6] == "ok");
    ++rows;
  }
  CHECK(rows == 16);
}

TEST_CASE("eval: per-point failures are rows") {
  // c has a Gamma pole at lambda = 2 on (0,8,0,0).
  json cfg = {{"space", "real-hyperbolic p=9 q=1"}, {"eval", {{"object", "cfunction"}, {"lambda", {{2.0, 0.0}, {0.0, 1.0}}}}}};
  const auto c = parse_config(cfg);
  const auto rep = cmd_eval(c);
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[0][6] != "ok");
  CHECK(rep.rows[0][4] == "nan");
  CHECK(rep.rows[1][6] == "ok");
}

TEST_CASE("eval: cfunction is unimodular on iR and phi0 reproduces the discrete functions") {
  json cfg = {{"space", "real-hyperbolic p=9 q=1"},
              {"eval", {{"object", "cfunction"}, {"lambda", {{"re", 0.0}, {"im", {{"from", 0.3}, {"to", 30}, {"count", 12}}}}}}}};
  for (const auto& row : cmd_eval(parse_config(cfg)).rows)
    CHECK(std::abs(std::hypot(cell(row[4]), cell(row[5])) - 1.0) < 1e-10);

  cfg["eval"] = {{"object", "phi0"}, {"lambda", {{-3.0, 0.0}}}, {"t", {0.5, 2.0}}};
  const auto g = parse_config(cfg).geometry();
  for (const auto& row : cmd_eval(parse_config(cfg)).rows) {
    const double t = cell(row[2]);
    CHECK(cell(row[4]) == doctest::Approx(eigen::phi0_discrete(g, 0, t)).epsilon(1e-12));
  }
}

TEST_CASE("reports are deterministic") {
  const std::vector<std::string> args = {"check", "eigen", "--space", "real-hyperbolic p=5 q=1", "--seed", "42"};
  const auto a = invoke(args), b = invoke(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const auto c = invoke({"check", "eigen", "--space", "real-hyperbolic p=5 q=1", "--seed", "43"});
  CHECK(c.out != a.out);
}

TEST_CASE("check: failures set the exit status") {
  json cfg = {{"space", "riemannian-H3"}, {"check", {{"suite", "symmetry"}, {"tolerance", 1e-30}}}};
  auto c = parse_config(cfg);
  const auto rep = cmd_check(c);
  CHECK(rep.exit_code == 1);
  CHECK(rep.body["pass"] == false);
  cfg["check"].erase("tolerance");
  CHECK(cmd_check(parse_config(cfg)).exit_code == 0);
}

TEST_CASE("check: contour and inversion suites") {
  for (const char* suite : {"contour", "inversion"}) {
    const auto r = invoke({"check", suite, "--space", "real-hyperbolic p=9 q=1", "--r", "1.3333333333333333"});
    INFO(r.out << r.err);
    CHECK(r.code == 0);
  }
}

TEST_CASE("csv quoting and number format") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(-2.5e-300) == "-2.5e-300");
  CHECK(format_number(NAN) == "nan");
  Report r;
  r.columns = {"a", "b"};
  r.rows = {{"x,y", "say \"hi\""}};
  CHECK(render(r, "csv") == "a,b\n\"x,y\",\"say \"\"hi\"\"\"\n");
}
