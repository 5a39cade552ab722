#include "checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "rank1sft/bounds.hpp"
#include "rank1sft/eigenfunctions.hpp"
#include "rank1sft/errors.hpp"
#include "rank1sft/parallel.hpp"
#include "rank1sft/schwartz.hpp"
#include "rank1sft/transform.hpp"

namespace rank1sft::cli {

namespace {

using spaces::SpaceGeometry;
constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  return out;
}

double rel(const WVector& a, const WVector& b) { return (a - b).max_abs() / std::max(b.max_abs(), 1e-300); }

// Random lambda at least 0.05 away from the half-integers on the real axis.
cplx random_lambda(std::mt19937_64& rng, double re_lo, double re_hi, double im) {
  std::uniform_real_distribution<double> ur(re_lo, re_hi), ui(-im, im);
  for (;;) {
    const cplx l(ur(rng), ui(rng));
    if (std::abs(l - std::round(2.0 * l.real()) / 2.0) > 0.05) return l;
  }
}

struct Suite {
  const RunConfig& c;
  SpaceGeometry g;
  std::vector<CheckResult> out;

  double tol(double fallback) const { return c.check.tolerance.value_or(fallback); }
  void add(std::string name, std::string target, double measured, double tolerance, std::string detail = {}) {
    out.push_back(make_check(std::move(name), std::move(target), measured, tolerance, std::move(detail)));
  }

  void kernel();
  void inversion();
  void eigen();
  void symmetry();
  void schwartz();
  void bounds();
  void contour();
};

void Suite::kernel() {
  const auto L = spaces::pole_set(g);
  if (L.size() == 0) {
    add("kernel: L is empty", "number of discrete functions", 0.0, 0.0, "no discrete series to test");
    return;
  }
  const auto nus = linspace(0.0, c.check.nu_max, 21);
  for (std::size_t k = 0; k < L.size(); ++k) {
    const auto f = transform::kernel_function(g, int(k), WVector(g.orbits(), 1.0));
    const double norm = std::sqrt(transform::discrete_norm_squared(g, int(k)));
    std::vector<double> v(nus.size());
    parallel_for(nus.size(), [&](std::size_t i) {
      v[i] = transform::forward(g, f, cplx(0.0, nus[i]), c.quadrature).max_abs() / norm;
    });
    const auto it = std::max_element(v.begin(), v.end());
    add("kernel: F Phi0_{-" + fmt(L.lambdas[k]) + "} on iR", "max_nu |F Phi0(i nu)| / ||Phi0||_L2", *it, tol(1e-6),
        "max at nu = " + fmt(nus[std::size_t(it - v.begin())]) + ", T = " + fmt(c.quadrature.truncation));
  }
}

void Suite::inversion() {
  const FunctionSpec spec = c.check.function.value_or(FunctionSpec{});
  const auto f = make_function(g, spec);
  const auto inv = transform::invert_detailed(g, f, c.r, c.fixed_rule);
  const auto ts = linspace(0.5, 3.0, 51);
  double err = 0.0, scale = 0.0;
  for (double t : ts) {
    err = std::max(err, (inv.reconstruction(t) - f(t)).max_abs());
    scale = std::max(scale, f(t).max_abs());
  }
  add("inversion: round trip", "sup_t |f - f_rec| / sup_t |f|, t in [0.5, 3]", err / scale, tol(1e-4),
      "kappa = " + fmt(inv.kappa) + (inv.projection_path ? ", residues from the projection" : ""));
  if (f.support_bound()) {
    const auto cal = transform::calibrate_plancherel_with(g, f, c.fixed_rule);
    add("inversion: kappa stability", "|kappa_f / kappa_ref - 1|", std::abs(cal.kappa / inv.kappa - 1.0), tol(1e-4),
        "kappa_f = " + fmt(cal.kappa) + ", misfit " + fmt(cal.residual));
  }
}

void Suite::eigen() {
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> ut(0.5, 5.0), ut1(1.0, 5.0);
  const auto L = spaces::pole_set(g);
  auto residual = [&](const RadialFunction& f, cplx ev, double t) {
    const cplx lhs = eigen::radial_laplacian_apply(g, f, 0, t);
    const double scale = std::abs(f.derivative(0, t, 2)) + std::abs(g.laplacian_drift(t) * f.derivative(0, t, 1)) +
                         std::abs(ev * f.value(0, t));
    return std::abs(lhs - ev * f.value(0, t)) / scale;
  };
  double e_eis = 0.0, e_phi = 0.0, e_disc = 0.0, e_series = 0.0, e_cc = 0.0, e_unit = 0.0;
  int skipped = 0;
  for (int i = 0; i < c.check.points; ++i) {
    const cplx l = random_lambda(rng, -3.0, 3.0, 6.0);
    const double t = ut(rng), t1 = ut1(rng);
    const double nu = std::uniform_real_distribution<double>(-20.0, 20.0)(rng);
    const cplx ev = l * l - g.rho() * g.rho();
    try {
      e_eis = std::max(e_eis, residual(RadialFunction::uniform(1, [&](double s) { return eigen::eisenstein_scalar(g, l, s); }), ev, t));
      e_phi = std::max(e_phi, residual(RadialFunction::uniform(1, [&](double s) { return eigen::phi0(g, l, s); }), ev, t));
      if (g.closed_forms_consistent())
        e_series = std::max(e_series, std::abs(eigen::hc_series_phi(g, l, t1) - eigen::phi0(g, l, t1)) /
                                          std::abs(eigen::phi0(g, l, t1)));
      e_cc = std::max(e_cc, std::abs(eigen::c_function(g, l) * eigen::c_function(g, -l) - 1.0));
      e_unit = std::max(e_unit, std::abs(std::abs(eigen::c_function(g, cplx(0.0, nu))) - 1.0));
    } catch (const PoleError&) {
      ++skipped;
    }
    if (L.size() > 0) {
      const int k = int(std::uniform_int_distribution<std::size_t>(0, L.size() - 1)(rng));
      const double lk = L.lambdas[std::size_t(k)];
      e_disc = std::max(e_disc, residual(RadialFunction::uniform(1, [&](double s) { return cplx(eigen::phi0_discrete(g, k, s)); }),
                                         lk * lk - g.rho() * g.rho(), t));
    }
  }
  const std::string pts = std::to_string(c.check.points) + " random points, seed " + std::to_string(c.seed) +
                          (skipped ? ", " + std::to_string(skipped) + " skipped at poles" : "");
  const std::string eq = "|L f - (lambda^2 - rho^2) f| / (|f''| + |drift f'| + |(lambda^2 - rho^2) f|), h = 1e-3";
  add("eigen: E° eigen-equation", eq, e_eis, tol(1e-6), pts);
  add("eigen: Phi0_lambda eigen-equation", eq, e_phi, tol(1e-6), pts);
  if (L.size() > 0) add("eigen: Phi0_{-lambda_k} eigen-equation", eq, e_disc, tol(1e-6), pts);
  if (g.closed_forms_consistent())
    add("eigen: series vs hypergeometric", "|Phi_lambda - Phi0_lambda| / |Phi0_lambda|, t >= 1", e_series, tol(1e-8), pts);
  add("eigen: c(lambda) c(-lambda) = 1", "|c(l) c(-l) - 1|", e_cc, tol(1e-10), pts);
  add("eigen: |c(i nu)| = 1", "||c(i nu)| - 1|", e_unit, tol(1e-10), pts);
}

void Suite::symmetry() {
  std::vector<FunctionSpec> fs;
  if (c.check.function && c.check.function->kind == "bump") fs.push_back(*c.check.function);
  for (auto [t0, w] : {std::pair{1.5, 0.5}, std::pair{1.0, 0.6}, std::pair{2.5, 1.0}})
    if (fs.size() < 3) fs.push_back(FunctionSpec{"bump", t0, w});
  const auto nus = linspace(0.25, c.check.nu_max, 16);
  for (const auto& spec : fs) {
    const auto f = make_function(g, spec);
    std::vector<double> num(nus.size()), den(nus.size());
    parallel_for(nus.size(), [&](std::size_t i) {
      const cplx l(0.0, nus[i]);
      const WVector a = transform::forward(g, f, l, c.quadrature);
      num[i] = (transform::forward(g, f, -l, c.quadrature) - eigen::c_function(g, l) * a).max_abs();
      den[i] = a.max_abs();
    });
    double m = 0.0;
    for (std::size_t i = 0; i < nus.size(); ++i) m = std::max(m, num[i] / den[i]);
    add("symmetry: bump t0 = " + fmt(spec.t0) + ", w = " + fmt(spec.width),
        "max_nu |F f(-i nu) - c(i nu) F f(i nu)| / |F f(i nu)|", m, tol(1e-8),
        std::to_string(nus.size()) + " nodes on [0.25, " + fmt(c.check.nu_max) + "]");
  }
}

void Suite::schwartz() {
  const FunctionSpec spec = c.check.function.value_or(FunctionSpec{"bump", 2.0, 1.0});
  const auto f = make_function(g, spec);
  schwartz::ValidationSpec vs;
  vs.grid.re_points = c.check.re_points;
  vs.grid.im_points = c.check.im_points;
  vs.grid.nu_max = c.check.grid_nu_max;
  vs.max_n = vs.max_q = c.check.max_order;
  const auto phi = transform::transform_of(g, f, vs.grid.nu_max + 1.0, c.fixed_rule);
  const auto strip = schwartz::strip_for(g, c.r, c.epsilon0);
  const auto rep = schwartz::validate_spectral_schwartz(g, phi, strip, spaces::poly_p_r(g, c.r), vs);
  for (const auto& cond : rep.conditions) {
    auto r = make_check("schwartz: (" + std::to_string(cond.index) + ") " + cond.name, "condition measure",
                        cond.measured, c.check.tolerance.value_or(cond.tolerance), cond.detail);
    if (!c.check.tolerance) r.pass = cond.pass;
    out.push_back(r);
  }
  int infinite = 0;
  for (int n = 0; n <= 2; ++n)
    for (int m = 0; m <= 2; ++m) infinite += schwartz::tau_seminorm(g, f, n, m, c.r).infinite;
  add("schwartz: tau seminorms of f", "divergent tau_{n,m}, n, m <= 2", infinite, 0.0);
}

void Suite::bounds() {
  bounds::BoundOptions o;
  o.R = c.R;
  for (const auto& rep : bounds::run_all(g, o)) {
    auto r = make_check("bounds: " + rep.name, "worst validation ratio to the fitted constant", rep.worst_ratio,
                        c.check.tolerance.value_or(rep.margin),
                        "constant " + fmt(rep.constant) + ", " + std::to_string(rep.violations) + " violations; " +
                            rep.detail);
    if (!c.check.tolerance) r.pass = rep.pass;
    out.push_back(r);
  }
}

void Suite::contour() {
  const auto L = spaces::pole_set(g);
  const auto split = spaces::split_pole_set(L, c.r);
  // Planted simple poles at -lambda_k, lambda_k in L_r, residue (1+k)(1+w) e^{lambda_k^2}.
  std::vector<ResidueData> poles;
  for (int k : split.inside_index) {
    const double lk = L.lambdas[std::size_t(k)];
    WVector res(g.orbits());
    for (int w = 0; w < g.orbits(); ++w) res[w] = (1.0 + k) * (1.0 + w) * std::exp(lk * lk);
    poles.push_back({cplx(-lk), res});
  }
  const int orbits = g.orbits();
  SpectralFunction phi(orbits, [poles, orbits](cplx l) {
    WVector v(orbits, std::exp(l * l));
    for (const auto& p : poles)
      for (int w = 0; w < orbits; ++w) v[w] += p.value[w] * std::exp(l * l - p.location * p.location) / (l - p.location);
    return v;
  });
  phi.with_poles(poles).with_real_structure(true);
  const numerics::QuadratureSpec qs{1e-12, 1e-15, 9.0 + spaces::gamma_r(g, c.r), 4000};
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> ut(0.5, 3.0);
  double worst = 0.0;
  const int n = std::min(c.check.points, 8);
  for (int i = 0; i < n; ++i) {
    const double t = ut(rng);
    const WVector j = transform::wave_packet(g, phi, t, qs);
    const WVector lhs = j - transform::shifted_wave_packet(g, phi, c.r, t, qs);
    WVector rhs(orbits);
    for (std::size_t p = 0; p < poles.size(); ++p)
      rhs += (4.0 * kPi * cplx(0.0, 1.0) * eigen::phi0_discrete(g, split.inside_index[p], t)) * poles[p].value;
    worst = std::max(worst, poles.empty() ? lhs.max_abs() / j.max_abs() : rel(lhs, rhs));
  }
  add("contour: J phi - I_r phi = 4 pi i sum Phi0 Res", "max_t relative error", worst, tol(1e-6),
      std::to_string(poles.size()) + " planted poles, " + std::to_string(n) + " random t in [0.5, 3], seed " +
          std::to_string(c.seed));
}

}  // namespace

CheckResult make_check(std::string name, std::string target, double measured, double tolerance, std::string detail) {
  CheckResult r{std::move(name), std::move(target), measured, tolerance, false, std::move(detail)};
  r.pass = measured <= tolerance;
  return r;
}

std::vector<CheckResult> run_suite(const RunConfig& c, const std::string& suite) {
  Suite s{c, c.geometry(), {}};
  try {
    if (suite == "kernel") s.kernel();
    else if (suite == "inversion") s.inversion();
    else if (suite == "eigen") s.eigen();
    else if (suite == "symmetry") s.symmetry();
    else if (suite == "schwartz") s.schwartz();
    else if (suite == "bounds") s.bounds();
    else if (suite == "contour") s.contour();
    else throw ConfigError("suite", "unknown check suite '" + suite + "'");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    s.out.push_back(make_check(suite + ": numerical failure", "completion", HUGE_VAL, 0.0, e.what()));
  }
  return s.out;
}

json to_json(const CheckResult& r) {
  json j = {{"name", r.name}, {"target", r.target}, {"tolerance", r.tolerance}, {"pass", r.pass}};
  j["measured"] = std::isfinite(r.measured) ? json(r.measured) : json(nullptr);
  if (!r.detail.empty()) j["detail"] = r.detail;
  return j;
}

}  // namespace rank1sft::cli
