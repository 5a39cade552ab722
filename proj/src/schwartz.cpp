#include "rank1sft/schwartz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "rank1sft/eigenfunctions.hpp"
#include "rank1sft/errors.hpp"
#include "rank1sft/parallel.hpp"

namespace rank1sft::schwartz {

namespace {

constexpr double kRootGuard = 1e-6;

// Weighted values that are nondecreasing along the tail and grow by more than
// the threshold overall.
bool grows_monotonically(const std::vector<double>& tail) {
  if (tail.size() < 3 || !(tail.front() > 0.0)) return false;
  for (std::size_t i = 1; i < tail.size(); ++i) {
    if (tail[i] < tail[i - 1] * (1.0 - 1e-9)) return false;
  }
  return tail.back() > tail.front() * (1.0 + kGrowthThreshold);
}

double weighted(double log_weight, double magnitude) {
  if (magnitude == 0.0) return 0.0;
  return std::exp(log_weight + std::log(magnitude));
}

WVector p_times(const SpectralFunction& phi, const Polynomial& p, cplx lambda) {
  for (const cplx& root : p.roots()) {
    if (std::abs(lambda - root) < kRootGuard) return phi.regularized(lambda, p);
  }
  return p(lambda) * phi(lambda);
}

// Fornberg's weights: w[k][j] is the weight of f(x[j]) in f^{(k)}(z).
std::vector<std::vector<double>> fd_weights(double z, const std::vector<double>& x, int m) {
  const int n = int(x.size()) - 1;
  std::vector<std::vector<double>> c(std::size_t(m) + 1, std::vector<double>(x.size(), 0.0));
  double c1 = 1.0, c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[std::size_t(i)] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[std::size_t(i)] - x[std::size_t(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[std::size_t(k)][std::size_t(i)] =
              c1 * (k * c[std::size_t(k - 1)][std::size_t(i - 1)] - c5 * c[std::size_t(k)][std::size_t(i - 1)]) / c2;
        c[0][std::size_t(i)] = -c1 * c5 * c[0][std::size_t(i - 1)] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[std::size_t(k)][std::size_t(j)] =
            (c4 * c[std::size_t(k)][std::size_t(j)] - k * c[std::size_t(k - 1)][std::size_t(j)]) / c3;
      c[0][std::size_t(j)] = c4 * c[0][std::size_t(j)] / c3;
    }
    c1 = c2;
  }
  return c;
}

// Trapezoid Cauchy integrals on a circle, all orders at once.
std::vector<WVector> cauchy(const std::function<WVector(cplx)>& g, int orbits, cplx center,
                            double radius, int nodes, int max_order) {
  std::vector<WVector> out(std::size_t(max_order) + 1, WVector(orbits));
  for (int j = 0; j < nodes; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / nodes;
    const WVector v = g(center + std::polar(radius, theta));
    for (int k = 0; k <= max_order; ++k) {
      const cplx factor = std::polar(std::pow(radius, -k), -k * theta);
      for (int w = 0; w < orbits; ++w) out[std::size_t(k)][w] += factor * v[w];
    }
  }
  double fact = 1.0;
  for (int k = 0; k <= max_order; ++k) {
    if (k > 0) fact *= k;
    out[std::size_t(k)] *= fact / nodes;
  }
  return out;
}

// One-sided stencil in Re lambda; d/d lambda = d/dx for holomorphic g.
std::vector<WVector> one_sided(const std::function<WVector(cplx)>& g, int orbits, cplx at, double step,
                               int max_order) {
  const int count = max_order + 4;
  std::vector<double> x(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) x[std::size_t(j)] = j * step;
  const auto wts = fd_weights(0.0, x, max_order);
  std::vector<WVector> out(std::size_t(max_order) + 1, WVector(orbits));
  for (int j = 0; j < count; ++j) {
    const WVector v = g(at + x[std::size_t(j)]);
    for (int k = 0; k <= max_order; ++k)
      for (int w = 0; w < orbits; ++w) out[std::size_t(k)][w] += wts[std::size_t(k)][std::size_t(j)] * v[w];
  }
  return out;
}

// Central stencil along nu on the line; d/d lambda = -i d/d nu.
std::vector<WVector> along_line(const std::function<WVector(cplx)>& g, int orbits, cplx at, double step,
                                int max_order) {
  const int half = (max_order + 4) / 2;
  std::vector<double> x;
  for (int j = -half; j <= half; ++j) x.push_back(j * step);
  const auto wts = fd_weights(0.0, x, max_order);
  std::vector<WVector> out(std::size_t(max_order) + 1, WVector(orbits));
  for (std::size_t j = 0; j < x.size(); ++j) {
    const WVector v = g(at + cplx(0.0, x[j]));
    for (int k = 0; k <= max_order; ++k)
      for (int w = 0; w < orbits; ++w) out[std::size_t(k)][w] += wts[std::size_t(k)][j] * v[w];
  }
  cplx rot = 1.0;
  for (int k = 0; k <= max_order; ++k) {
    out[std::size_t(k)] *= rot;
    rot *= cplx(0.0, -1.0);
  }
  return out;
}

std::vector<double> re_grid(const StripSpec& s, int points) {
  std::vector<double> xs;
  if (s.is_line() || points < 2) {
    xs.push_back(s.left);
  } else {
    for (int i = 0; i < points; ++i) xs.push_back(s.left + (s.right - s.left) * i / (points - 1));
  }
  if (s.left <= 0.0 && s.right >= 0.0 &&
      std::none_of(xs.begin(), xs.end(), [](double x) { return std::abs(x) < 1e-12; }))
    xs.push_back(0.0);
  std::sort(xs.begin(), xs.end());
  return xs;
}

std::vector<double> nu_grid(double nu_min, double nu_max, int per_side) {
  std::vector<double> ys = {0.0};
  for (int j = 0; j < per_side; ++j) {
    const double y = per_side == 1 ? nu_max : nu_min * std::pow(nu_max / nu_min, double(j) / (per_side - 1));
    ys.push_back(y);
    ys.push_back(-y);
  }
  std::sort(ys.begin(), ys.end());
  return ys;
}

std::string describe(const StripSamples& s) {
  std::ostringstream os;
  os << "strip [" << s.strip.left << ", " << s.strip.right << "] x |nu| <= " << s.grid.nu_max << ", "
     << s.points.size() << " points";
  return os.str();
}

ConditionReport condition(int index, std::string name, double measured, double tol, std::string detail = {}) {
  return ConditionReport{index, std::move(name), measured <= tol, measured, tol, std::move(detail)};
}

}  // namespace

// ---- strips ---------------------------------------------------------------------------

StripSpec strip_for(const SpaceGeometry& g, double r, double epsilon0) {
  if (!(r > 0.0 && r <= 2.0)) throw DomainError("strip_for: r must lie in (0, 2]");
  if (!(epsilon0 > 0.0 && epsilon0 < 0.5)) throw DomainError("strip_for: epsilon0 must lie in (0, 1/2)");
  return StripSpec{r, epsilon0, -spaces::gamma_r(g, r), epsilon0};
}

StripSpec imaginary_axis() { return StripSpec{2.0, 0.0, 0.0, 0.0}; }

// ---- tau --------------------------------------------------------------------------------

SeminormReport tau_seminorm(const SpaceGeometry& g, const RadialFunction& f, int n, int m_deriv, double r,
                            const RadialGrid& grid) {
  if (n < 0 || m_deriv < 0) throw DomainError("tau_seminorm: orders must be >= 0");
  if (!(r > 0.0 && r <= 2.0)) throw DomainError("tau_seminorm: r must lie in (0, 2]");
  if (!(grid.t_min > 0.0 && grid.t_max > grid.t_min && grid.points >= 2))
    throw DomainError("tau_seminorm: bad grid");
  const double rate = 2.0 / r * g.rho();
  std::vector<double> ts(std::size_t(grid.points));
  for (int i = 0; i < grid.points; ++i)
    ts[std::size_t(i)] = grid.t_min * std::pow(grid.t_max / grid.t_min, double(i) / (grid.points - 1));

  std::vector<double> profile(ts.size(), 0.0);
  std::vector<int> orbit(ts.size(), 0);
  parallel_for(ts.size(), [&](std::size_t i) {
    const double t = ts[i];
    const double lw = n * std::log1p(t) + rate * t;
    for (int w = 0; w < f.orbits(); ++w) {
      double v;
      try {
        v = weighted(lw, std::abs(f.derivative(w, t, m_deriv)));
      } catch (const Error&) {
        continue;
      }
      if (v > profile[i] || std::isnan(v)) {
        profile[i] = v;
        orbit[i] = w;
      }
    }
  });

  SeminormReport rep;
  std::ostringstream os;
  os << "t log-spaced in [" << grid.t_min << ", " << grid.t_max << "], " << grid.points << " points";
  rep.grid = os.str();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!(profile[i] <= rep.value)) {
      rep.value = profile[i];
      rep.argmax = ts[i];
      rep.orbit = orbit[i];
    }
  }
  std::vector<double> tail;
  for (std::size_t i = 0; i < ts.size(); ++i)
    if (ts[i] >= grid.t_max / 10.0) tail.push_back(profile[i]);
  rep.infinite = !std::isfinite(rep.value) || grows_monotonically(tail);
  return rep;
}

// ---- omega ------------------------------------------------------------------------------

StripSamples sample_strip(const SpectralFunction& phi, const StripSpec& strip, const Polynomial& p,
                          int max_order, const StripGrid& grid) {
  if (max_order < 0) throw DomainError("sample_strip: negative order");
  if (!(strip.left <= 0.0 && strip.right >= 0.0 && strip.right < 0.5))
    throw DomainError("sample_strip: strip must satisfy left <= 0 <= right < 1/2");
  if (!(grid.nu_min > 0.0 && grid.nu_max > grid.nu_min && grid.cauchy_radius > 0.0 && grid.im_points >= 2))
    throw DomainError("sample_strip: bad grid");
  StripSamples s;
  s.strip = strip;
  s.grid = grid;
  s.max_order = max_order;
  s.degree_p = p.degree();
  for (double x : re_grid(strip, grid.re_points))
    for (double y : nu_grid(grid.nu_min, grid.nu_max, grid.im_points / 2)) s.points.emplace_back(x, y);

  const int orbits = phi.orbits();
  const auto g = [&](cplx l) { return p_times(phi, p, l); };
  const double rad = grid.cauchy_radius;
  s.derivatives.assign(s.points.size(), {});
  std::vector<std::string> errors(s.points.size());
  parallel_for(s.points.size(), [&](std::size_t i) {
    const cplx l = s.points[i];
    try {
      if (strip.is_line()) {
        s.derivatives[i] = along_line(g, orbits, l, rad / 2.0, max_order);
      } else if (l.real() - strip.left < rad) {
        s.derivatives[i] = one_sided(g, orbits, l, rad / 4.0, max_order);
      } else if (strip.right - l.real() < rad) {
        s.derivatives[i] = one_sided(g, orbits, l, -rad / 4.0, max_order);
      } else {
        s.derivatives[i] = cauchy(g, orbits, l, rad, grid.cauchy_nodes, max_order);
      }
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i].empty()) {
      std::ostringstream os;
      os << "(" << s.points[i].real() << ", " << s.points[i].imag() << "): " << errors[i];
      s.failures.push_back(os.str());
    }
  }
  return s;
}

SeminormReport omega_seminorm(const StripSamples& s, int n, int q) {
  if (q < 0 || q > s.max_order) throw DomainError("omega_seminorm: derivative order not sampled");
  SeminormReport rep;
  rep.grid = describe(s);
  std::map<double, double> profile;  // |nu| -> max weighted value
  double best_abs = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    if (s.derivatives[i].empty()) continue;
    const cplx l = s.points[i];
    const double v = weighted((n - s.degree_p) * std::log1p(std::abs(l)), s.derivatives[i][std::size_t(q)].norm());
    auto& slot = profile[std::abs(l.imag())];
    slot = std::max(slot, v);
    if (std::isnan(v) || v > rep.value || (v == rep.value && std::abs(l) < best_abs)) {
      rep.value = v;
      rep.argmax = l;
      best_abs = std::abs(l);
      if (std::isnan(v)) break;
    }
  }
  std::vector<double> tail;
  for (const auto& [y, v] : profile)
    if (y >= s.grid.nu_max / 10.0) tail.push_back(v);
  rep.infinite = !std::isfinite(rep.value) || grows_monotonically(tail);
  return rep;
}

SeminormReport omega_seminorm(const SpectralFunction& phi, int n, int q, const StripSpec& strip,
                              const Polynomial& p, const StripGrid& grid) {
  return omega_seminorm(sample_strip(phi, strip, p, q, grid), n, q);
}

// ---- membership -------------------------------------------------------------------------

bool SchwartzReport::pass() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const ConditionReport& c) { return c.pass; });
}

namespace {

ConditionReport check_smooth_on_axis(const SpectralFunction& phi, const ValidationSpec& spec) {
  const int count = 81;
  const double h = 0.02;
  double worst = 0.0, scale1 = 0.0, scale2 = 0.0;
  double diff1 = 0.0, diff2 = 0.0;
  bool finite = true;
  for (int i = 0; i < count; ++i) {
    const double nu = -spec.smooth_nu_max + 2.0 * spec.smooth_nu_max * i / (count - 1);
    auto at = [&](double dy) { return phi(cplx(0.0, nu + dy)); };
    const WVector f0 = at(0.0);
    auto stencil = [&](double s) {
      const WVector a = at(s), b = at(-s), c = at(2 * s), d = at(-2 * s);
      WVector d1 = (1.0 / (12.0 * s)) * (8.0 * (a - b) - (c - d));
      WVector d2 = (1.0 / (12.0 * s * s)) * (16.0 * (a + b) - (c + d) - 30.0 * f0);
      return std::make_pair(d1, d2);
    };
    const auto [c1, c2] = stencil(h);
    const auto [f1, f2] = stencil(h / 2.0);
    for (const auto* v : {&f0, &c1, &c2, &f1, &f2})
      for (int w = 0; w < v->size(); ++w) finite = finite && std::isfinite(std::abs((*v)[w]));
    scale1 = std::max(scale1, f1.max_abs());
    scale2 = std::max(scale2, f2.max_abs());
    diff1 = std::max(diff1, (c1 - f1).max_abs());
    diff2 = std::max(diff2, (c2 - f2).max_abs());
  }
  if (!finite) return condition(1, "smooth on iR", std::numeric_limits<double>::infinity(), spec.smooth_tol,
                                "non-finite samples");
  worst = std::max(scale1 > 0.0 ? diff1 / scale1 : 0.0, scale2 > 0.0 ? diff2 / scale2 : 0.0);
  return condition(1, "smooth on iR", worst, spec.smooth_tol,
                   "first and second nu-derivatives at two step sizes on |nu| <= " +
                       std::to_string(spec.smooth_nu_max));
}

ConditionReport check_holomorphic(const SpaceGeometry& g, const SpectralFunction& phi, const StripSpec& strip,
                                  const Polynomial& p, const ValidationSpec& spec) {
  if (strip.is_line()) return ConditionReport{2, "p_r phi holomorphic", true, 0.0, spec.holomorphy_tol, "line only"};
  const auto gf = [&](cplx l) { return p_times(phi, p, l); };
  const double h = 1e-3;
  const double margin = 3.0 * h;
  std::vector<cplx> pts;
  for (int i = 0; i < 7; ++i) {
    const double x = strip.left + margin + (strip.right - strip.left - 2 * margin) * i / 6.0;
    for (int j = 0; j < 21; ++j) pts.emplace_back(x, -spec.smooth_nu_max + 2.0 * spec.smooth_nu_max * j / 20.0);
  }
  // Cauchy-Riemann residual g_x + i g_y, relative to the largest |g_x|.
  double cr = 0.0, scale = 0.0;
  for (const cplx& l : pts) {
    const WVector gx = (1.0 / (12.0 * h)) * (8.0 * (gf(l + h) - gf(l - h)) - (gf(l + 2.0 * h) - gf(l - 2.0 * h)));
    const cplx ih(0.0, h);
    const WVector gy = (1.0 / (12.0 * h)) * (8.0 * (gf(l + ih) - gf(l - ih)) - (gf(l + 2.0 * ih) - gf(l - 2.0 * ih)));
    cr = std::max(cr, (gx + cplx(0.0, 1.0) * gy).max_abs());
    scale = std::max(scale, gx.max_abs());
  }
  const double cr_rel = scale > 0.0 ? cr / scale : cr;
  // Continuity up to the edges: edge value against cubic extrapolation from inside.
  double jump = 0.0, gscale = 0.0;
  for (int j = 0; j < 21; ++j) {
    const double y = -spec.smooth_nu_max + 2.0 * spec.smooth_nu_max * j / 20.0;
    for (auto [edge, dir] : {std::pair{strip.left, 1.0}, std::pair{strip.right, -1.0}}) {
      const cplx e(edge, y);
      const double d = dir * h;
      const WVector ext = 4.0 * gf(e + d) - 6.0 * gf(e + 2.0 * d) + 4.0 * gf(e + 3.0 * d) - gf(e + 4.0 * d);
      const WVector at = gf(e);
      jump = std::max(jump, (at - ext).max_abs());
      gscale = std::max(gscale, at.max_abs());
    }
  }
  const double jump_rel = gscale > 0.0 ? jump / gscale : jump;
  // p_r must cancel every pole of phi in the strip.
  double leftover = 0.0;
  const auto split = spaces::split_pole_set(spaces::pole_set(g), strip.r);
  for (double lk : split.inside) {
    const double rad = std::min({spec.residue_radius, 0.9 * (-strip.left - lk), 0.9 * (lk + strip.right)});
    // First Laurent moment of p phi at -lambda_k relative to its size on the circle.
    WVector moment(phi.orbits());
    double m = 0.0;
    const int nodes = 64;
    for (int j = 0; j < nodes; ++j) {
      const cplx z = std::polar(rad, 2.0 * std::numbers::pi * j / nodes);
      const WVector v = gf(cplx(-lk, 0.0) + z);
      m = std::max(m, v.max_abs());
      moment += (z / double(nodes)) * v;
    }
    leftover = std::max(leftover, m > 0.0 ? moment.max_abs() / (m * rad) : 0.0);
  }
  const double measured = std::max({cr_rel / spec.holomorphy_tol, jump_rel / spec.continuity_tol,
                                    leftover / spec.holomorphy_tol});
  std::ostringstream os;
  os << "Cauchy-Riemann residual " << cr_rel << ", edge continuity " << jump_rel << ", pole cancellation "
     << leftover << " (measured is the largest ratio to its tolerance)";
  return condition(2, "p_r phi holomorphic", measured, 1.0, os.str());
}

ConditionReport check_poles(const SpaceGeometry& g, const SpectralFunction& phi, const StripSpec& strip,
                            const ValidationSpec& spec) {
  const auto split = spaces::split_pole_set(spaces::pole_set(g), strip.r);
  if (split.inside.empty()) return ConditionReport{3, "simple poles at -L_r", true, 0.0, 1.0, "L_r is empty"};
  double worst = 0.0;
  std::ostringstream os;
  for (double lk : split.inside) {
    const cplx a(-lk, 0.0);
    const double rad = std::min({spec.residue_radius, 0.9 * (-strip.left - lk), 0.9 * (lk + strip.right)});
    const int nodes = 64;
    auto moments = [&](double radius, double& max_abs) {
      // a_{-1} and a_{-2} of the Laurent series at a.
      std::pair<WVector, WVector> m{WVector(phi.orbits()), WVector(phi.orbits())};
      for (int j = 0; j < nodes; ++j) {
        const cplx z = std::polar(radius, 2.0 * std::numbers::pi * j / nodes);
        const WVector v = phi(a + z);
        max_abs = std::max(max_abs, v.max_abs());
        m.first += (z / double(nodes)) * v;
        m.second += (z * z / double(nodes)) * v;
      }
      return m;
    };
    double m1 = 0.0, m2 = 0.0;
    const auto [res, second] = moments(rad, m1);
    const auto [res_half, unused] = moments(rad / 2.0, m2);
    const double nonzero = res.max_abs() / (m1 * rad);
    const double simple = second.max_abs() / (m1 * rad * rad);
    const double agree = (res - res_half).max_abs() / std::max(res.max_abs(), 1e-300);
    const double ratio = std::max({nonzero > spec.residue_tol ? 0.0 : 2.0, simple / spec.simple_tol,
                                   agree / spec.simple_tol});
    worst = std::max(worst, ratio);
    os << "-" << lk << ": |Res| " << res.max_abs() << ", |a_-2| " << second.max_abs() << ", radius agreement " << agree
       << "; ";
  }
  return condition(3, "simple poles at -L_r", worst, 1.0, os.str());
}

ConditionReport check_symmetry(const SpaceGeometry& g, const SpectralFunction& phi, const StripSpec& strip,
                               const ValidationSpec& spec) {
  const double a = std::min(strip.right, -strip.left);
  std::vector<double> xs = {0.0};
  if (a > 0.0) xs = {-a, -a / 2.0, 0.0, a / 2.0, a};
  double worst = 0.0;
  int skipped = 0, used = 0;
  for (double x : xs) {
    for (double y : nu_grid(0.1, spec.symmetry_nu_max, 20)) {
      const cplx l(x, y);
      cplx c;
      try {
        c = eigen::c_function(g, l);
      } catch (const PoleError&) {
        ++skipped;
        continue;
      }
      const WVector plus = phi(l), minus = phi(-l);
      const double scale = std::max(plus.max_abs(), minus.max_abs());
      if (!(scale > 0.0)) continue;
      worst = std::max(worst, (minus - c * plus).max_abs() / scale);
      ++used;
    }
  }
  return condition(5, "symmetry phi(-lambda) = c(lambda) phi(lambda)", worst, spec.symmetry_tol,
                   std::to_string(used) + " points with |Re lambda| <= " + std::to_string(a) + ", " +
                       std::to_string(skipped) + " skipped at poles of c");
}

}  // namespace

SchwartzReport validate_spectral_schwartz(const SpaceGeometry& g, const SpectralFunction& phi,
                                          const StripSpec& strip, const Polynomial& p,
                                          const ValidationSpec& spec) {
  SchwartzReport rep;
  auto guarded = [&](int index, const std::string& name, const std::function<ConditionReport()>& run) {
    try {
      rep.conditions.push_back(run());
    } catch (const Error& e) {
      rep.conditions.push_back(ConditionReport{index, name, false, std::numeric_limits<double>::infinity(), 0.0,
                                               std::string("evaluation failed: ") + e.what()});
    }
  };
  guarded(1, "smooth on iR", [&] { return check_smooth_on_axis(phi, spec); });
  guarded(2, "p_r phi holomorphic", [&] { return check_holomorphic(g, phi, strip, p, spec); });
  guarded(3, "simple poles at -L_r", [&] { return check_poles(g, phi, strip, spec); });
  guarded(4, "omega seminorms finite", [&] {
    const auto samples = sample_strip(phi, strip, p, spec.max_q, spec.grid);
    rep.omega.assign(std::size_t(spec.max_n) + 1, {});
    int infinite = 0;
    for (int n = 0; n <= spec.max_n; ++n)
      for (int q = 0; q <= spec.max_q; ++q) {
        rep.omega[std::size_t(n)].push_back(omega_seminorm(samples, n, q));
        infinite += rep.omega[std::size_t(n)].back().infinite ? 1 : 0;
      }
    const int failed = int(samples.failures.size());
    std::string detail = std::to_string(infinite) + " divergent seminorms, " + std::to_string(failed) +
                         " failed grid points";
    if (failed > 0) detail += "; first: " + samples.failures.front();
    return condition(4, "omega seminorms finite", double(infinite + failed), 0.0, detail);
  });
  guarded(5, "symmetry phi(-lambda) = c(lambda) phi(lambda)", [&] { return check_symmetry(g, phi, strip, spec); });
  return rep;
}

}  // namespace rank1sft::schwartz
