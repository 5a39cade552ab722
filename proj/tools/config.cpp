#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "rank1sft/errors.hpp"
#include "rank1sft/transform.hpp"

namespace rank1sft::cli {

namespace {

void only_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError("type", where + " must be an object");
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) throw ConfigError("unknown-key", "unknown key '" + key + "' in " + where);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError("type", where + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError("type", where + " must be finite");
  return v;
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError("type", where + " must be an integer");
  return j.get<int>();
}

std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) throw ConfigError("type", where + " must be a string");
  return j.get<std::string>();
}

void positive(double v, const std::string& where) {
  if (!(v > 0.0)) throw ConfigError("positive", where + " must be > 0");
}

// A number, an array of numbers, or {"from", "to", "count"} (count >= 1,
// uniform and inclusive).
std::vector<double> values(const json& j, const std::string& where) {
  if (j.is_number()) return {number(j, where)};
  if (j.is_array()) {
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
    if (out.empty()) throw ConfigError("nonempty", where + " must not be empty");
    return out;
  }
  only_keys(j, where, {"from", "to", "count"});
  if (!j.contains("from") || !j.contains("to") || !j.contains("count"))
    throw ConfigError("range", where + " needs from, to and count");
  const double a = number(j["from"], where + ".from"), b = number(j["to"], where + ".to");
  const int n = integer(j["count"], where + ".count");
  if (n < 1 || n > 1000000) throw ConfigError("range", where + ".count must lie in [1, 1e6]");
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  return out;
}

// {"re": values, "im": values} (all combinations, re outermost) or [[re, im], ...].
std::vector<cplx> lambdas(const json& j, const std::string& where) {
  std::vector<cplx> out;
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      const auto& p = j[i];
      const std::string at = where + "[" + std::to_string(i) + "]";
      if (!p.is_array() || p.size() != 2) throw ConfigError("type", at + " must be [re, im]");
      out.emplace_back(number(p[0], at), number(p[1], at));
    }
    if (out.empty()) throw ConfigError("nonempty", where + " must not be empty");
    return out;
  }
  only_keys(j, where, {"re", "im"});
  const auto re = j.contains("re") ? values(j["re"], where + ".re") : std::vector<double>{0.0};
  const auto im = j.contains("im") ? values(j["im"], where + ".im") : std::vector<double>{0.0};
  for (double x : re)
    for (double y : im) out.emplace_back(x, y);
  return out;
}

FunctionSpec function_spec(const json& j, const std::string& where) {
  FunctionSpec f;
  if (j.is_string()) {
    f.kind = j.get<std::string>();
  } else {
    only_keys(j, where, {"kind", "t0", "width", "k", "delta"});
    if (j.contains("kind")) f.kind = text(j["kind"], where + ".kind");
    if (j.contains("t0")) f.t0 = number(j["t0"], where + ".t0");
    if (j.contains("width")) f.width = number(j["width"], where + ".width");
    if (j.contains("k")) f.k = integer(j["k"], where + ".k");
    if (j.contains("delta")) f.delta = number(j["delta"], where + ".delta");
  }
  if (f.kind != "bump" && f.kind != "discrete" && f.kind != "cosh_power")
    throw ConfigError("function-kind", where + ".kind must be bump, discrete or cosh_power");
  if (f.kind == "bump") {
    positive(f.width, where + ".width");
    if (f.t0 - f.width < 0.0) throw ConfigError("bump-support", where + ": need t0 >= width");
  }
  if (f.kind == "cosh_power") positive(f.delta, where + ".delta");
  return f;
}

void parse_space(RunConfig& c, const json& j) {
  auto from_preset = [&](const std::string& name) {
    const auto p = spaces::find_preset(name);
    if (!p) throw ConfigError("preset", "unknown preset '" + name + "'");
    c.space_name = p->name;
    c.multiplicities = p->multiplicities;
  };
  if (j.is_string()) return from_preset(j.get<std::string>());
  only_keys(j, "space", {"preset", "m1p", "m1m", "m2p", "m2m", "orbits"});
  if (j.contains("preset")) {
    if (j.size() != 1) throw ConfigError("space", "give either a preset or multiplicities, not both");
    return from_preset(text(j["preset"], "space.preset"));
  }
  c.space_name = "custom";
  auto& m = c.multiplicities;
  for (auto [key, slot] : {std::pair{"m1p", &m.m1p}, std::pair{"m1m", &m.m1m}, std::pair{"m2p", &m.m2p},
                           std::pair{"m2m", &m.m2m}}) {
    if (!j.contains(key)) throw ConfigError("space", std::string("missing space.") + key);
    *slot = integer(j[key], std::string("space.") + key);
  }
  if (j.contains("orbits")) {
    m.orbits = integer(j["orbits"], "space.orbits");
  } else {
    m.orbits = 2;
    c.warnings.push_back("space.orbits not given; assuming 2 open orbits");
  }
}

}  // namespace

RadialFunction make_function(const spaces::SpaceGeometry& g, const FunctionSpec& f) {
  if (f.kind == "bump") return bump(g.orbits(), f.t0, f.width);
  if (f.kind == "discrete") {
    const auto L = spaces::pole_set(g);
    if (f.k < 0 || std::size_t(f.k) >= L.size())
      throw ConfigError("discrete-index", "k = " + std::to_string(f.k) + " but L has " + std::to_string(L.size()) +
                                              " elements");
    return transform::kernel_function(g, f.k, WVector(g.orbits(), 1.0));
  }
  // (cosh t)^{-delta-rho} decays like e^{-(delta+rho) t}, the decay class of r = 2 rho / (delta + rho).
  const double a = f.delta + g.rho();
  RadialFunction out = RadialFunction::uniform(g.orbits(), [a](double t) { return cplx(std::pow(std::cosh(t), -a)); });
  out.with_decay_class(2.0 * g.rho() / a).with_real_values(true);
  return out;
}

json describe_function(const FunctionSpec& f) {
  if (f.kind == "bump") return {{"kind", "bump"}, {"t0", f.t0}, {"width", f.width}};
  if (f.kind == "discrete") return {{"kind", "discrete"}, {"k", f.k}};
  return {{"kind", "cosh_power"}, {"delta", f.delta}};
}

void validate_config(RunConfig& c) {
  try {
    spaces::validate(c.multiplicities);
  } catch (const InvalidMultiplicities& e) {
    throw ConfigError(e.rule(), e.what());
  }
  if (!(c.r > 0.0 && c.r <= 2.0)) throw ConfigError("r-range", "r must lie in (0, 2]");
  if (!(c.epsilon0 > 0.0 && c.epsilon0 < 0.5)) throw ConfigError("epsilon0-range", "epsilon0 must lie in (0, 1/2)");
  positive(c.R, "R");
  const spaces::SpaceGeometry g(c.multiplicities);
  try {
    spaces::split_pole_set(spaces::pole_set(g), c.r);
  } catch (const DomainError& e) {
    throw ConfigError("r-singular", std::string("gamma_r coincides with a pole: ") + e.what());
  }
  if (c.format != "json" && c.format != "csv") throw ConfigError("format", "format must be json or csv");
  if (std::find(kObjects.begin(), kObjects.end(), c.eval.object) == kObjects.end())
    throw ConfigError("eval-object", "unknown eval object '" + c.eval.object + "'");
  if (!c.check.suite.empty() && std::find(kSuites.begin(), kSuites.end(), c.check.suite) == kSuites.end())
    throw ConfigError("suite", "unknown check suite '" + c.check.suite + "'");
  for (const auto* f : {&c.transform.function, &c.invert.function})
    if (f->kind == "discrete") make_function(g, *f);
  if (c.check.function && c.check.function->kind == "discrete") make_function(g, *c.check.function);
  for (double t : c.eval.ts)
    if (t < 0.0) throw ConfigError("t-range", "eval.t must be >= 0");
  for (double t : c.invert.ts)
    if (t < 0.0) throw ConfigError("t-range", "invert.t must be >= 0");
  positive(c.check.nu_max, "check.nu_max");
  if (c.check.points < 1) throw ConfigError("positive", "check.points must be >= 1");
  if (c.check.re_points < 2 || c.check.im_points < 2) throw ConfigError("grid", "check.schwartz grid needs >= 2 points");
  positive(c.check.grid_nu_max, "check.schwartz.nu_max");
  if (c.check.max_order < 0 || c.check.max_order > 4) throw ConfigError("grid", "check.schwartz.max_order must lie in [0, 4]");
  if (c.check.tolerance) positive(*c.check.tolerance, "check.tolerance");
  if (!(c.quadrature.rel_tol > 0.0) || !(c.quadrature.abs_tol > 0.0) || !(c.quadrature.truncation > 0.0))
    throw ConfigError("quadrature", "tolerances and truncation must be > 0");
  if (!(c.fixed_rule.cutoff > 0.0) || !(c.fixed_rule.nu_panel > 0.0) || c.fixed_rule.order < 2 ||
      !(c.fixed_rule.t_cutoff > 0.0) || !(c.fixed_rule.t_panel > 0.0))
    throw ConfigError("fixed-rule", "fixed_rule entries must be positive (order >= 2)");
}

RunConfig parse_config(const json& j) {
  RunConfig c;
  try {
    only_keys(j, "config", {"space", "r", "epsilon0", "R", "quadrature", "fixed_rule", "eval", "transform", "invert",
                            "calibrate", "check", "output", "seed"});
    if (!j.contains("space")) throw ConfigError("space", "missing space");
    parse_space(c, j["space"]);
    if (j.contains("r")) c.r = number(j["r"], "r");
    if (j.contains("epsilon0")) c.epsilon0 = number(j["epsilon0"], "epsilon0");
    if (j.contains("R")) c.R = number(j["R"], "R");
    if (j.contains("seed")) {
      if (!j["seed"].is_number_unsigned()) throw ConfigError("type", "seed must be a nonnegative integer");
      c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("quadrature")) {
      const auto& q = j["quadrature"];
      only_keys(q, "quadrature", {"rel_tol", "abs_tol", "truncation", "refinement_limit"});
      if (q.contains("rel_tol")) c.quadrature.rel_tol = number(q["rel_tol"], "quadrature.rel_tol");
      if (q.contains("abs_tol")) c.quadrature.abs_tol = number(q["abs_tol"], "quadrature.abs_tol");
      if (q.contains("truncation")) c.quadrature.truncation = number(q["truncation"], "quadrature.truncation");
      if (q.contains("refinement_limit"))
        c.quadrature.refinement_limit = integer(q["refinement_limit"], "quadrature.refinement_limit");
    }
    if (j.contains("fixed_rule")) {
      const auto& q = j["fixed_rule"];
      only_keys(q, "fixed_rule", {"cutoff", "nu_panel", "order", "t_cutoff", "t_panel"});
      auto& f = c.fixed_rule;
      if (q.contains("cutoff")) f.cutoff = number(q["cutoff"], "fixed_rule.cutoff");
      if (q.contains("nu_panel")) f.nu_panel = number(q["nu_panel"], "fixed_rule.nu_panel");
      if (q.contains("order")) f.order = integer(q["order"], "fixed_rule.order");
      if (q.contains("t_cutoff")) f.t_cutoff = number(q["t_cutoff"], "fixed_rule.t_cutoff");
      if (q.contains("t_panel")) f.t_panel = number(q["t_panel"], "fixed_rule.t_panel");
    }

    c.eval.lambdas = {cplx(0.0, 0.5), cplx(0.0, 1.0), cplx(0.0, 2.0), cplx(0.5, 1.0)};
    c.eval.ts = {0.5, 1.0, 2.0, 4.0};
    if (j.contains("eval")) {
      const auto& e = j["eval"];
      only_keys(e, "eval", {"object", "lambda", "t"});
      if (e.contains("object")) c.eval.object = text(e["object"], "eval.object");
      if (e.contains("lambda")) c.eval.lambdas = lambdas(e["lambda"], "eval.lambda");
      if (e.contains("t")) c.eval.ts = values(e["t"], "eval.t");
    }
    for (int i = 0; i <= 40; ++i) c.transform.lambdas.emplace_back(0.0, 0.5 * i);
    if (j.contains("transform")) {
      const auto& e = j["transform"];
      only_keys(e, "transform", {"function", "lambda"});
      if (e.contains("function")) c.transform.function = function_spec(e["function"], "transform.function");
      if (e.contains("lambda")) c.transform.lambdas = lambdas(e["lambda"], "transform.lambda");
    }
    for (int i = 0; i <= 50; ++i) c.invert.ts.push_back(0.5 + 0.05 * i);
    if (j.contains("invert")) {
      const auto& e = j["invert"];
      only_keys(e, "invert", {"function", "t"});
      if (e.contains("function")) c.invert.function = function_spec(e["function"], "invert.function");
      if (e.contains("t")) c.invert.ts = values(e["t"], "invert.t");
    }
    if (j.contains("calibrate")) {
      const auto& e = j["calibrate"];
      only_keys(e, "calibrate", {"function"});
      if (e.contains("function")) c.calibrate.function = function_spec(e["function"], "calibrate.function");
    }
    if (j.contains("check")) {
      const auto& e = j["check"];
      only_keys(e, "check", {"suite", "function", "nu_max", "points", "tolerance", "schwartz"});
      if (e.contains("suite")) c.check.suite = text(e["suite"], "check.suite");
      if (e.contains("function")) c.check.function = function_spec(e["function"], "check.function");
      if (e.contains("nu_max")) c.check.nu_max = number(e["nu_max"], "check.nu_max");
      if (e.contains("points")) c.check.points = integer(e["points"], "check.points");
      if (e.contains("tolerance")) c.check.tolerance = number(e["tolerance"], "check.tolerance");
      if (e.contains("schwartz")) {
        const auto& s = e["schwartz"];
        only_keys(s, "check.schwartz", {"re_points", "im_points", "nu_max", "max_order"});
        if (s.contains("re_points")) c.check.re_points = integer(s["re_points"], "check.schwartz.re_points");
        if (s.contains("im_points")) c.check.im_points = integer(s["im_points"], "check.schwartz.im_points");
        if (s.contains("nu_max")) c.check.grid_nu_max = number(s["nu_max"], "check.schwartz.nu_max");
        if (s.contains("max_order")) c.check.max_order = integer(s["max_order"], "check.schwartz.max_order");
      }
    }
    if (j.contains("output")) {
      const auto& o = j["output"];
      only_keys(o, "output", {"path", "format"});
      if (o.contains("path")) c.out_path = text(o["path"], "output.path");
      if (o.contains("format")) c.format = text(o["format"], "output.format");
    }
  } catch (const json::exception& e) {
    throw ConfigError("type", e.what());
  }
  validate_config(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("file", "cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("json", path + ": " + e.what());
  }
  return parse_config(j);
}

}  // namespace rank1sft::cli
