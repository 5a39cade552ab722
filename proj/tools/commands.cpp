#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "rank1sft/eigenfunctions.hpp"
#include "rank1sft/errors.hpp"
#include "rank1sft/parallel.hpp"
#include "rank1sft/schwartz.hpp"
#include "rank1sft/transform.hpp"

namespace rank1sft::cli {

namespace {

using spaces::SpaceGeometry;

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
json pair(cplx z) { return json::array({num(z.real()), num(z.imag())}); }

json roots_json(const spaces::Polynomial& p) {
  json out = json::array();
  for (const cplx& z : p.roots()) out.push_back(pair(z));
  return out;
}

json space_json(const RunConfig& c) {
  const auto& m = c.multiplicities;
  return {{"name", c.space_name}, {"m1p", m.m1p}, {"m1m", m.m1m}, {"m2p", m.m2p}, {"m2m", m.m2m}, {"orbits", m.orbits}};
}

std::string str(double v) { return format_number(v); }

// One value per (point, orbit); failures keep the row with NaN values and the message.
struct Sample {
  WVector value;
  std::string status = "ok";
};

template <class F>
std::vector<Sample> sample(std::size_t n, int orbits, F&& f) {
  std::vector<Sample> out(n);
  parallel_for(n, [&](std::size_t i) {
    try {
      out[i].value = f(i);
    } catch (const std::exception& e) {
      out[i].value = WVector(orbits, cplx(NAN, NAN));
      out[i].status = e.what();
    }
  });
  return out;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Report cmd_describe(const RunConfig& c) {
  const SpaceGeometry g = c.geometry();
  const auto L = spaces::pole_set(g);
  const auto split = spaces::split_pole_set(L, c.r);
  const auto strip = schwartz::strip_for(g, c.r, c.epsilon0);
  const auto pR = spaces::poly_p_R(g, c.R);
  const auto qR = spaces::poly_q_R(c.R);
  const auto pr = spaces::poly_p_r(g, c.r);
  const auto pi = spaces::poly_pi(L);
  Report rep;
  rep.body = {{"command", "describe"},
              {"space", space_json(c)},
              {"rho", g.rho()},
              {"riemannian", g.riemannian()},
              {"r", c.r},
              {"gamma_r", spaces::gamma_r(g, c.r)},
              {"epsilon0", c.epsilon0},
              {"strip", {{"left", strip.left}, {"right", strip.right}}},
              {"L", L.lambdas},
              {"L_r", split.inside},
              {"L_r_complement", split.outside},
              {"R", c.R},
              {"p_R", {{"roots", roots_json(pR)}, {"leading", pR.leading()}}},
              {"q_R", {{"roots", roots_json(qR)}, {"leading", qR.leading()}}},
              {"p_r", {{"roots", roots_json(pr)}, {"leading", pr.leading()}}},
              {"pi", {{"roots", roots_json(pi)}, {"leading", pi.leading()}, {"variable", "lambda^2 - rho^2"}}}};
  rep.columns = {"key", "index", "value_re", "value_im"};
  auto scalar = [&](const std::string& k, double v) { rep.rows.push_back({k, "0", str(v), "0"}); };
  auto list = [&](const std::string& k, const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) rep.rows.push_back({k, std::to_string(i), str(v[i]), "0"});
  };
  auto roots = [&](const std::string& k, const spaces::Polynomial& p) {
    for (std::size_t i = 0; i < p.roots().size(); ++i)
      rep.rows.push_back({k + "_root", std::to_string(i), str(p.roots()[i].real()), str(p.roots()[i].imag())});
    scalar(k + "_leading", p.leading());
  };
  scalar("rho", g.rho());
  scalar("orbits", g.orbits());
  scalar("r", c.r);
  scalar("gamma_r", spaces::gamma_r(g, c.r));
  scalar("strip_left", strip.left);
  scalar("strip_right", strip.right);
  list("L", L.lambdas);
  list("L_r", split.inside);
  list("L_r_complement", split.outside);
  roots("p_R", pR);
  roots("q_R", qR);
  roots("p_r", pr);
  roots("pi", pi);
  return rep;
}

Report cmd_eval(const RunConfig& c) {
  const SpaceGeometry g = c.geometry();
  const std::string& obj = c.eval.object;
  const bool needs_t = obj != "cfunction";
  const int width = obj == "eisenstein" ? g.orbits() : 1;
  struct Point {
    cplx lambda;
    double t;
  };
  std::vector<Point> pts;
  for (const cplx& l : c.eval.lambdas) {
    if (!needs_t) pts.push_back({l, NAN});
    else
      for (double t : c.eval.ts) pts.push_back({l, t});
  }
  const WVector ones(g.orbits(), 1.0);
  const auto values = sample(pts.size(), width, [&](std::size_t i) -> WVector {
    const auto& p = pts[i];
    if (obj == "eisenstein") return eigen::eisenstein(g, p.lambda, ones, p.t);
    if (obj == "phi0") return WVector{eigen::phi0(g, p.lambda, p.t)};
    if (obj == "hcseries") return WVector{eigen::hc_series_phi(g, p.lambda, p.t)};
    return WVector{eigen::c_function(g, p.lambda)};
  });
  Report rep;
  rep.columns = {"lambda_re", "lambda_im", "t", "w", "value_re", "value_im", "status"};
  json points = json::array();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (int w = 0; w < width; ++w) {
      const cplx v = values[i].value[w];
      rep.rows.push_back({str(pts[i].lambda.real()), str(pts[i].lambda.imag()), needs_t ? str(pts[i].t) : "",
                          std::to_string(w), str(v.real()), str(v.imag()), values[i].status});
      json row = {{"lambda", pair(pts[i].lambda)}, {"w", w}, {"value", pair(v)}, {"status", values[i].status}};
      if (needs_t) row["t"] = pts[i].t;
      points.push_back(row);
    }
  }
  rep.body = {{"command", "eval"}, {"object", obj}, {"space", space_json(c)}, {"points", points}};
  return rep;
}

Report cmd_transform(const RunConfig& c) {
  const SpaceGeometry g = c.geometry();
  const auto f = make_function(g, c.transform.function);
  const auto& ls = c.transform.lambdas;
  const auto values = sample(ls.size(), g.orbits(), [&](std::size_t i) { return transform::forward(g, f, ls[i], c.quadrature); });
  Report rep;
  rep.columns = {"lambda_re", "lambda_im", "w", "value_re", "value_im", "status"};
  json points = json::array();
  for (std::size_t i = 0; i < ls.size(); ++i) {
    json vals = json::array();
    for (int w = 0; w < g.orbits(); ++w) {
      const cplx v = values[i].value[w];
      rep.rows.push_back({str(ls[i].real()), str(ls[i].imag()), std::to_string(w), str(v.real()), str(v.imag()),
                          values[i].status});
      vals.push_back(pair(v));
    }
    points.push_back({{"lambda", pair(ls[i])}, {"value", vals}, {"status", values[i].status}});
  }
  rep.body = {{"command", "transform"},
              {"space", space_json(c)},
              {"function", describe_function(c.transform.function)},
              {"points", points}};
  return rep;
}

Report cmd_invert(const RunConfig& c) {
  const SpaceGeometry g = c.geometry();
  const auto f = make_function(g, c.invert.function);
  const auto inv = transform::invert_detailed(g, f, c.r, c.fixed_rule);
  const auto& ts = c.invert.ts;
  std::vector<WVector> rec(ts.size());
  parallel_for(ts.size(), [&](std::size_t i) { rec[i] = inv.reconstruction(ts[i]); });
  Report rep;
  rep.columns = {"t", "w", "f_re", "f_im", "reconstruction_re", "reconstruction_im", "abs_error"};
  json points = json::array();
  double err = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const WVector fv = f(ts[i]);
    for (int w = 0; w < g.orbits(); ++w) {
      const double e = std::abs(rec[i][w] - fv[w]);
      err = std::max(err, e);
      scale = std::max(scale, std::abs(fv[w]));
      rep.rows.push_back({str(ts[i]), std::to_string(w), str(fv[w].real()), str(fv[w].imag()), str(rec[i][w].real()),
                          str(rec[i][w].imag()), str(e)});
      points.push_back({{"t", ts[i]}, {"w", w}, {"f", pair(fv[w])}, {"reconstruction", pair(rec[i][w])}, {"abs_error", num(e)}});
    }
  }
  json residues = json::array();
  const auto L = spaces::pole_set(g);
  for (std::size_t k = 0; k < inv.residues.size(); ++k) {
    json v = json::array();
    for (int w = 0; w < inv.residues[k].size(); ++w) v.push_back(pair(inv.residues[k][w]));
    residues.push_back({{"location", -L.lambdas[k]}, {"value", v}});
  }
  rep.body = {{"command", "invert"},
              {"space", space_json(c)},
              {"function", describe_function(c.invert.function)},
              {"r", c.r},
              {"kappa", inv.kappa},
              {"residues", residues},
              {"residues_from_projection", inv.projection_path},
              {"sup_abs_error", num(err)},
              {"sup_rel_error", num(scale > 0.0 ? err / scale : err)},
              {"points", points}};
  return rep;
}

Report cmd_check(const RunConfig& c) {
  if (c.check.suite.empty()) throw ConfigError("suite", "check needs a suite (kernel|inversion|eigen|symmetry|schwartz|bounds|contour)");
  const auto results = run_suite(c, c.check.suite);
  Report rep;
  rep.columns = {"name", "target", "measured", "tolerance", "pass", "detail"};
  json checks = json::array();
  bool pass = true;
  for (const auto& r : results) {
    checks.push_back(to_json(r));
    rep.rows.push_back({r.name, r.target, str(r.measured), str(r.tolerance), r.pass ? "true" : "false", r.detail});
    pass = pass && r.pass;
  }
  rep.body = {{"command", "check"},
              {"suite", c.check.suite},
              {"space", space_json(c)},
              {"r", c.r},
              {"seed", c.seed},
              {"checks", checks},
              {"pass", pass}};
  rep.exit_code = pass ? 0 : 1;
  return rep;
}

Report cmd_calibrate(const RunConfig& c) {
  const SpaceGeometry g = c.geometry();
  const double kappa = transform::calibrate_plancherel(g, c.fixed_rule);
  const double predicted =
      std::pow(2.0, 2.0 * g.rho() - 2.0 - g.multiplicities().m2p) / std::numbers::pi;
  Report rep;
  rep.body = {{"command", "calibrate"},
              {"space", space_json(c)},
              {"kappa", kappa},
              {"reference", describe_function(FunctionSpec{"bump", 2.0, 1.0})},
              {"closed_form", predicted},
              {"ratio_to_closed_form", kappa / predicted},
              {"cutoff", c.fixed_rule.cutoff}};
  rep.columns = {"key", "value"};
  rep.rows = {{"kappa", str(kappa)}, {"closed_form", str(predicted)}, {"ratio_to_closed_form", str(kappa / predicted)}};
  if (c.calibrate.function) {
    const auto cal = transform::calibrate_plancherel_with(g, make_function(g, *c.calibrate.function), c.fixed_rule);
    rep.body["function"] = describe_function(*c.calibrate.function);
    rep.body["kappa_function"] = cal.kappa;
    rep.body["misfit_function"] = cal.residual;
    rep.body["stability"] = std::abs(cal.kappa / kappa - 1.0);
    rep.rows.push_back({"kappa_function", str(cal.kappa)});
    rep.rows.push_back({"misfit_function", str(cal.residual)});
    rep.rows.push_back({"stability", str(std::abs(cal.kappa / kappa - 1.0))});
  }
  return rep;
}

std::string render(const Report& r, const std::string& format) {
  if (format == "json") return r.body.dump(2) + "\n";
  std::ostringstream os;
  auto cell = [&](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return os << s, void();
    os << '"';
    for (char ch : s) os << (ch == '"' ? std::string("\"\"") : std::string(1, ch));
    os << '"';
  };
  auto line = [&](const std::vector<std::string>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) os << ',';
      cell(v[i]);
    }
    os << '\n';
  };
  line(r.columns);
  for (const auto& row : r.rows) line(row);
  return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spherical Fourier analysis on split rank one symmetric spaces", "rank1sft"};
  app.require_subcommand(1);
  std::string config_path, out_path, format, space;
  std::optional<std::uint64_t> seed;
  std::optional<double> r;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--out", out_path, "write the report here instead of stdout");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", seed, "seed for randomized check points");
  app.add_option("--space", space, "preset name, overrides the config");
  app.add_option("--r", r, "decay parameter r in (0, 2], overrides the config");

  std::string object, suite;
  auto* describe = app.add_subcommand("describe", "derived geometry: rho, gamma_r, L, L_r, polynomials, strip");
  auto* eval = app.add_subcommand("eval", "evaluate eisenstein|phi0|cfunction|hcseries on a grid (CSV rows)");
  eval->add_option("object", object, "object to evaluate")->check(CLI::IsMember(kObjects));
  auto* transform_cmd = app.add_subcommand("transform", "forward spherical transform of a test function");
  auto* invert = app.add_subcommand("invert", "inversion round trip of a test function");
  auto* check = app.add_subcommand("check", "run a check suite");
  check->add_option("suite", suite, "kernel|inversion|eigen|symmetry|schwartz|bounds|contour")
      ->check(CLI::IsMember(kSuites));
  auto* calibrate = app.add_subcommand("calibrate", "calibrate the Plancherel constant");
  for (auto* sub : {describe, eval, transform_cmd, invert, check, calibrate}) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  RunConfig c;
  try {
    json j = json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("file", "cannot open " + config_path);
      try {
        j = json::parse(in);
      } catch (const json::parse_error& e) {
        throw ConfigError("json", config_path + ": " + e.what());
      }
      if (!j.is_object()) throw ConfigError("type", "config must be a JSON object");
    }
    if (!space.empty()) j["space"] = space;
    if (r) j["r"] = *r;
    if (seed) j["seed"] = *seed;
    if (!format.empty()) j["output"]["format"] = format;
    if (!out_path.empty()) j["output"]["path"] = out_path;
    if (!object.empty()) j["eval"]["object"] = object;
    if (!suite.empty()) j["check"]["suite"] = suite;
    c = parse_config(j);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  for (const auto& w : c.warnings) err << "warning: " << w << "\n";

  Report rep;
  try {
    if (describe->parsed()) rep = cmd_describe(c);
    else if (eval->parsed()) rep = cmd_eval(c);
    else if (transform_cmd->parsed()) rep = cmd_transform(c);
    else if (invert->parsed()) rep = cmd_invert(c);
    else if (check->parsed()) rep = cmd_check(c);
    else rep = cmd_calibrate(c);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  const std::string text = render(rep, c.format);
  if (c.out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(c.out_path, std::ios::binary);
    if (!(f << text)) {
      err << "error: cannot write " << c.out_path << "\n";
      return 1;
    }
  }
  return rep.exit_code;
}

}  // namespace rank1sft::cli
