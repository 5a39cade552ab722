// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Criterion numbers on the command line restrict the run to those criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rank1sft/bounds.hpp"
#include "rank1sft/eigenfunctions.hpp"
#include "rank1sft/errors.hpp"
#include "rank1sft/schwartz.hpp"
#include "rank1sft/transform.hpp"

using namespace rank1sft;
using spaces::MultiplicityDatum;
using spaces::SpaceGeometry;

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

const SpaceGeometry kH3(MultiplicityDatum{2, 0, 0, 0, 1});
const SpaceGeometry kP91(MultiplicityDatum{0, 8, 0, 0, 2});
const SpaceGeometry kA(MultiplicityDatum{2, 3, 0, 0, 1});
const SpaceGeometry kB(MultiplicityDatum{2, 0, 1, 0, 1});  // m2p > 0
const std::vector<const SpaceGeometry*> kPresets = {&kH3, &kP91, &kA, &kB};

std::string name(const SpaceGeometry& g) {
  const auto& m = g.multiplicities();
  std::ostringstream os;
  os << "(" << m.m1p << "," << m.m1m << "," << m.m2p << "," << m.m2m << ")";
  return os.str();
}

struct Outcome {
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

Outcome bounded(double measured, double tolerance, std::string detail = {}) {
  return {measured, tolerance, measured <= tolerance, std::move(detail)};
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }
double rel(const WVector& a, const WVector& b) { return (a - b).max_abs() / std::max(b.max_abs(), 1e-300); }

// Off the half-integers on the real axis by at least 0.05.
cplx random_lambda(std::mt19937_64& rng, double re_lo, double re_hi, double im) {
  std::uniform_real_distribution<double> ur(re_lo, re_hi), ui(-im, im);
  for (;;) {
    const cplx l(ur(rng), ui(rng));
    if (std::abs(l - std::round(2.0 * l.real()) / 2.0) > 0.05) return l;
  }
}

// Closed form on H3: E°(l, eta)(t) = eta sinh(l t) / sinh t, c = -1.
Outcome closed_form() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> ut(0.1, 10.0), ue(-2.0, 2.0);
  double worst = 0.0, worst_c = 0.0;
  for (int i = 0; i < 50; ++i) {
    const cplx l = random_lambda(rng, -3.0, 3.0, 10.0);
    const double t = ut(rng);
    const cplx eta(ue(rng), ue(rng));
    const cplx expect = eta * std::sinh(l * t) / std::sinh(t);
    worst = std::max(worst, rel(eigen::eisenstein(kH3, l, WVector{eta}, t)[0], expect));
    worst_c = std::max(worst_c, std::abs(eigen::c_function(kH3, l) + 1.0));
  }
  auto o = bounded(std::max(worst, worst_c), 1e-10);
  std::ostringstream os;
  os << "50 points; E° rel err " << worst << ", |c + 1| " << worst_c;
  o.detail = os.str();
  return o;
}

// Harish-Chandra series against the hypergeometric form.
Outcome series_vs_hypergeometric() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> ut(1.0, 8.0);
  double worst = 0.0;
  std::string where;
  for (const auto* g : kPresets) {
    for (int i = 0; i < 30; ++i) {
      const cplx l = random_lambda(rng, -3.0, 3.0, 10.0);
      const double t = ut(rng);
      const double e = rel(eigen::hc_series_phi(*g, l, t), eigen::phi0(*g, l, t));
      if (e > worst) worst = e, where = name(*g);
    }
  }
  return bounded(worst, 1e-8, "30 points on each of 4 presets, worst on " + where);
}

// Finite-difference radial Laplacian, h = 1e-3. The error is relative to the
// size of the terms of the operator, |f''| + |drift f'| + |(l^2 - rho^2) f|.
Outcome eigen_equations() {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> ut(0.5, 5.0);
  double worst = 0.0;
  std::string where;
  auto residual = [](const SpaceGeometry& g, const std::function<cplx(double)>& fn, cplx ev, double t) {
    const auto f = RadialFunction::uniform(1, fn);
    const cplx lhs = eigen::radial_laplacian_apply(g, f, 0, t, 1e-3);
    const double scale = std::abs(f.derivative(0, t, 2)) + std::abs(g.laplacian_drift(t) * f.derivative(0, t, 1)) +
                         std::abs(ev * f.value(0, t));
    return std::abs(lhs - ev * f.value(0, t)) / scale;
  };
  for (const auto* gp : kPresets) {
    const auto& g = *gp;
    const double rho2 = g.rho() * g.rho();
    for (int i = 0; i < 20; ++i) {
      const cplx l = random_lambda(rng, -3.0, 3.0, 6.0);
      const double t = ut(rng);
      const double a = residual(g, [&](double s) { return eigen::eisenstein_scalar(g, l, s); }, l * l - rho2, t);
      const double b = residual(g, [&](double s) { return eigen::phi0(g, l, s); }, l * l - rho2, t);
      if (std::max(a, b) > worst) worst = std::max(a, b), where = name(g);
    }
    const auto L = spaces::pole_set(g);
    for (std::size_t k = 0; k < L.size(); ++k) {
      const double lk = L.lambdas[k];
      for (double t : {0.5, 1.0, 2.0, 3.5, 5.0}) {
        const double e = residual(g, [&](double s) { return cplx(eigen::phi0_discrete(g, int(k), s)); }, lk * lk - rho2, t);
        if (e > worst) worst = e, where = name(g) + " discrete";
      }
    }
  }
  return bounded(worst, 1e-6, "E°, Phi0_l, Phi0_{-l_k}; t in [0.5, 5]; worst on " + where);
}

Outcome c_identities() {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> un(-30.0, 30.0);
  double worst = 0.0;
  for (const auto* g : kPresets) {
    for (int i = 0; i < 50; ++i) {
      const cplx l = random_lambda(rng, -3.0, 3.0, 10.0);
      worst = std::max(worst, std::abs(eigen::c_function(*g, l) * eigen::c_function(*g, -l) - 1.0));
      worst = std::max(worst, std::abs(std::abs(eigen::c_function(*g, cplx(0.0, un(rng)))) - 1.0));
    }
  }
  return bounded(worst, 1e-10, "c(l)c(-l) = 1 and |c(i nu)| = 1, 50 points per preset");
}

// F Phi0_{-lambda_k} on iR, T = 45.
Outcome kernel_vanishing() {
  const numerics::QuadratureSpec spec{1e-11, 1e-14, 45.0, 4000};
  const auto L = spaces::pole_set(kP91);
  double worst = 0.0;
  for (std::size_t k = 0; k < L.size(); ++k) {
    const auto f = transform::kernel_function(kP91, int(k), WVector{1.0, 1.0});
    const double norm = std::sqrt(transform::discrete_norm_squared(kP91, int(k)));
    for (int i = 0; i <= 80; ++i) {
      const double nu = 0.5 * i;
      worst = std::max(worst, transform::forward(kP91, f, cplx(0.0, nu), spec).max_abs() / norm);
    }
  }
  return bounded(worst, 1e-6, "(0,8,0,0), lambda_k in {3, 1}, nu in [0, 40] step 0.5, relative to ||Phi0||_L2");
}

Outcome transform_symmetry() {
  double worst = 0.0;
  for (const auto* g : {&kP91, &kH3, &kB}) {
    for (auto [t0, w] : {std::pair{1.5, 0.5}, std::pair{1.0, 0.6}, std::pair{2.5, 1.0}}) {
      const auto f = bump(g->orbits(), t0, w);
      for (int i = 0; i < 20; ++i) {
        const cplx l(0.0, 0.2 + 1.3 * i);
        const WVector a = transform::forward(*g, f, l);
        worst = std::max(worst, rel(transform::forward(*g, f, -l), eigen::c_function(*g, l) * a));
      }
    }
  }
  return bounded(worst, 1e-8, "3 bumps on 3 presets, nu in [0.2, 24.9]");
}

Outcome inversion() {
  const std::vector<std::pair<double, double>> bumps = {{1.5, 0.5}, {1.2, 0.6}, {2.2, 0.7}};
  double worst = 0.0, kappa_spread = 0.0;
  std::ostringstream os;
  for (const auto* g : {&kH3, &kP91}) {
    const double kappa = transform::calibrate_plancherel(*g);
    for (auto [t0, w] : bumps) {
      const auto f = bump(g->orbits(), t0, w);
      const auto rec = transform::invert(*g, f, 2.0);
      double err = 0.0, scale = 0.0;
      for (int i = 0; i <= 50; ++i) {
        const double t = 0.5 + 0.05 * i;
        err = std::max(err, (rec(t) - f(t)).max_abs());
        scale = std::max(scale, f(t).max_abs());
      }
      worst = std::max(worst, err / scale);
      const double k_f = transform::calibrate_plancherel_with(*g, f).kappa;
      kappa_spread = std::max(kappa_spread, std::abs(k_f / kappa - 1.0));
    }
    os << name(*g) << " kappa " << kappa << "; ";
  }
  Outcome o{std::max(worst, kappa_spread), 1e-4, worst <= 1e-4 && kappa_spread <= 1e-4, {}};
  os << "sup rel error " << worst << ", kappa stability " << kappa_spread;
  o.detail = os.str();
  return o;
}

// J phi - I_r phi = 4 pi i sum_{L_r} Phi0_{-l_k} Res_{-l_k} phi, planted poles.
Outcome contour_shift() {
  double worst = 0.0;
  const auto L = spaces::pole_set(kP91);
  for (double r : {4.0 / 3.0, 1.0}) {
    const auto split = spaces::split_pole_set(L, r);
    std::vector<ResidueData> poles;
    for (int k : split.inside_index) {
      const double lk = L.lambdas[std::size_t(k)];
      poles.push_back({cplx(-lk), WVector{(1.0 + k) * std::exp(lk * lk), -(2.0 + k) * std::exp(lk * lk)}});
    }
    SpectralFunction phi(2, [poles](cplx l) {
      WVector v(2, std::exp(l * l));
      for (const auto& p : poles)
        for (int w = 0; w < 2; ++w) v[w] += p.value[w] * std::exp(l * l - p.location * p.location) / (l - p.location);
      return v;
    });
    phi.with_poles(poles).with_real_structure(true);
    const numerics::QuadratureSpec spec{1e-12, 1e-15, 9.0 + spaces::gamma_r(kP91, r), 4000};
    for (double t : {0.5, 0.9, 1.4, 2.0, 3.0}) {
      const WVector lhs = transform::wave_packet(kP91, phi, t, spec) - transform::shifted_wave_packet(kP91, phi, r, t, spec);
      WVector rhs(2);
      for (std::size_t p = 0; p < poles.size(); ++p)
        rhs += (4.0 * kPi * I * eigen::phi0_discrete(kP91, split.inside_index[p], t)) * poles[p].value;
      worst = std::max(worst, rel(lhs, rhs));
    }
  }
  return bounded(worst, 1e-6, "(0,8,0,0), r = 4/3 (L_r = {1}) and r = 1 (L_r = {3, 1}), 5 values of t");
}

// F((kappa/i) I_r phi) = phi on the strip for phi = F(bump), both sides times
// pi(lambda^2 - rho^2).
Outcome transform_of_shifted_packet() {
  const double r = 4.0 / 3.0;
  const auto& g = kP91;
  const double gr = spaces::gamma_r(g, r);
  const auto f = bump(2, 2.0, 0.8);
  // phi decays about 100x slower on Re = -gamma_r than on iR, so the shifted
  // synthesis needs a longer line than the default rule.
  transform::FixedRuleSpec spec;
  spec.cutoff = 1000.0;
  const auto phi = transform::transform_of(g, f, spec.cutoff + 1.0, spec);
  const double kappa = transform::calibrate_plancherel(g, transform::FixedRuleSpec{});
  const transform::LineSynthesis synth(g, phi, -gr, transform::LineSynthesis::Kernel::twice_phi, spec);
  RadialFunction h = synth.as_radial().scaled(kappa / I);
  h.with_decay_class(r);
  // h carries the steep edges of the bump, so the t-rule is finer than the
  // default; h(t) < 1e-27 past t = 10, so it stops at T = 12.
  transform::FixedRuleSpec fine = spec;
  fine.t_panel = 0.1;
  fine.order = 24;
  fine.t_cutoff = 12.0;
  const transform::ForwardPlan plan(g, h, 10.0, fine);
  const auto L = spaces::pole_set(g);
  std::vector<cplx> grid;
  for (double x : {-1.5, -1.0, -0.5, 0.0, 0.25})
    for (double y : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0})
      if (std::abs(cplx(x, y) + 1.0) > 1e-9) grid.push_back(cplx(x, y));  // skip the pole at -1
  std::vector<double> err(grid.size()), size(grid.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const cplx pi = spaces::pi_of_eigenvalue(L, grid[i]);
    const WVector want = pi * phi(grid[i]);
    err[i] = (pi * plan(grid[i]) - want).max_abs();
    size[i] = want.max_abs();
    sup = std::max(sup, size[i]);
  }
  // phi(0) = 0 since c(0) = -1; zeros of phi are measured against the grid sup.
  double worst = 0.0;
  cplx where = 0.0;
  int zeros = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const bool zero = size[i] < 1e-12 * sup;
    zeros += zero;
    const double e = err[i] / (zero ? sup : size[i]);
    if (!(e <= worst)) {
      worst = std::isfinite(e) ? e : HUGE_VAL;
      where = grid[i];
    }
  }
  std::ostringstream os;
  os << "(0,8,0,0), r = 4/3, " << grid.size() << " points with Re lambda in [-1.5, 0.25], |Im lambda| <= 8, "
     << zeros << " zero(s) of phi against the grid sup; synthesis cutoff " << spec.cutoff << "; worst at " << where;
  return bounded(worst, 1e-6, os.str());
}

Outcome decomposition() {
  const double r = 4.0 / 3.0;
  const auto& g = kP91;
  const auto split = spaces::split_pole_set(spaces::pole_set(g), r);
  const bool sets = split.outside == std::vector<double>{3.0} && split.inside == std::vector<double>{1.0};
  const auto f = bump(2, 1.5, 0.5);
  const auto d = transform::decompose_HB(g, f, r);
  double worst = 0.0;
  if (d.indices == std::vector<int>{0}) {
    const double scale = d.coefficients[0].max_abs() * std::sqrt(transform::discrete_norm_squared(g, 0));
    for (int i = 0; i <= 40; ++i)
      worst = std::max(worst, transform::forward(g, d.f_B, cplx(0.0, 0.5 * i)).max_abs() / scale);
  } else {
    worst = HUGE_VAL;
  }
  int infinite_B = 0;
  for (int n = 0; n <= 3; ++n)
    for (int m = 0; m <= 3; ++m) infinite_B += schwartz::tau_seminorm(g, d.f_B, n, m, r).infinite;
  const auto phi1 = transform::kernel_function(g, 1, WVector{1.0, 1.0});
  const bool flagged = schwartz::tau_seminorm(g, phi1, 0, 0, r).infinite;
  Outcome o{worst, 1e-6, sets && worst <= 1e-6 && infinite_B == 0 && flagged, {}};
  std::ostringstream os;
  os << "L_r^c = {3}, L_r = {1}: " << (sets ? "yes" : "no") << "; max |F f_B(i nu)| rel " << worst
     << "; divergent tau(f_B) " << infinite_B << "/16; Phi0_{-1} divergence flag " << (flagged ? "raised" : "not raised");
  o.detail = os.str();
  return o;
}

Outcome schwartz_mapping() {
  const double r = 4.0 / 3.0;
  const auto& g = kP91;
  schwartz::ValidationSpec spec;  // 60 x 120 strip grid, n, q <= 4
  const auto phi = transform::transform_of(g, bump(2, 2.0, 1.0), spec.grid.nu_max + 1.0);
  const auto rep = schwartz::validate_spectral_schwartz(g, phi, schwartz::strip_for(g, r), spaces::poly_p_r(g, r), spec);
  int failed = 0, infinite = 0;
  std::ostringstream os;
  for (const auto& c : rep.conditions) {
    failed += !c.pass;
    os << "(" << c.index << ")" << (c.pass ? "ok " : "FAILED ");
  }
  for (const auto& row : rep.omega)
    for (const auto& w : row) infinite += w.infinite;
  os << "; divergent omega_{n,q} " << infinite << "/25";
  return {double(failed + infinite), 0.0, rep.pass() && infinite == 0, os.str()};
}

Outcome bound_suites() {
  int violations = 0, failed = 0;
  double worst = 0.0;
  std::ostringstream os;
  for (const auto* g : {&kP91, &kB}) {
    for (const auto& rep : bounds::run_all(*g)) {
      violations += int(rep.violations);
      failed += !rep.pass;
      worst = std::max(worst, rep.worst_ratio);
    }
    os << name(*g) << " ";
  }
  os << "coefficient, series and derivative (m <= 2) suites; worst validation ratio " << worst << ", "
     << violations << " violations";
  return {worst, 1.05, failed == 0 && violations == 0, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int index;
    const char* title;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "closed-form oracle on H3", closed_form},
      {2, "series-hypergeometric equivalence", series_vs_hypergeometric},
      {3, "eigenfunction equations", eigen_equations},
      {4, "c-function identities", c_identities},
      {5, "kernel vanishing", kernel_vanishing},
      {6, "transform symmetry", transform_symmetry},
      {7, "inversion round trip", inversion},
      {8, "contour-shift identity", contour_shift},
      {9, "F I_r = id on the strip", transform_of_shifted_packet},
      {10, "kernel/decomposition", decomposition},
      {11, "Schwartz mapping", schwartz_mapping},
      {12, "empirical bound suites", bound_suites},
  };
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  int failures = 0, ran = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.index) == only.end()) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {HUGE_VAL, 0.0, false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::printf("%s  [%2d] %s: measured %.3e, tolerance %.3g (%.1f s) | %s\n", o.pass ? "PASS" : "FAIL", c.index,
                c.title, o.measured, o.tolerance, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", ran - failures, ran);
  return failures == 0 ? 0 : 1;
}
