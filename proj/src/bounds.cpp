#include "rank1sft/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "rank1sft/eigenfunctions.hpp"
#include "rank1sft/errors.hpp"
#include "rank1sft/numerics.hpp"
#include "rank1sft/parallel.hpp"

namespace rank1sft::bounds {

namespace {

using cplx = std::complex<double>;

// Training nodes a + i h. Finer validation nodes a + (i + 1/4) h and a + (i + 3/4) h,
// or midpoints a + (i + 1/2) h; both disjoint from the training nodes.
enum class Nodes { training, finer, midpoints };

std::vector<double> axis(double a, double b, int n, Nodes kind) {
  const double h = (b - a) / (n - 1);
  std::vector<double> out;
  for (int i = 0; i < n; ++i) {
    if (kind == Nodes::training) {
      out.push_back(a + i * h);
    } else if (i + 1 < n && kind == Nodes::finer) {
      out.push_back(a + (i + 0.25) * h);
      out.push_back(a + (i + 0.75) * h);
    } else if (i + 1 < n) {
      out.push_back(a + (i + 0.5) * h);
    }
  }
  return out;
}

// Coarse nodes with Re lambda on multiples of 1/2, so the line Re lambda = 0
// (where shapes with |Re lambda| have a cusp) is sampled, plus a fine patch
// around lambda = 0 where the normalized functions peak. The imaginary parts
// are shifted off the real axis so no node sits on a removable singularity.
std::vector<cplx> lambda_grid(double re_lo, double re_hi, double nu_max, bool validation) {
  constexpr double kShift = 0.0173;
  const Nodes kind = validation ? Nodes::finer : Nodes::training;
  std::vector<cplx> out;
  auto patch = [&](double step, double x_lo, double x_hi, double y_max) {
    const double lo = std::ceil(x_lo / step - 1e-9) * step, hi = std::floor(x_hi / step + 1e-9) * step;
    const int nx = int(std::lround((hi - lo) / step)) + 1;
    const int ny = int(std::lround(2.0 * y_max / step)) + 1;
    for (double x : axis(lo, hi, nx, kind))
      for (double y : axis(-y_max + kShift, y_max + kShift, ny, kind)) out.emplace_back(x, y);
  };
  patch(0.5, re_lo, re_hi, nu_max);
  // Imaginary step 1.25 on the coarse patch.
  std::vector<cplx> coarse;
  for (const cplx& l : out)
    if (std::abs(std::fmod(l.imag() - kShift + nu_max, 1.25)) < 1e-9 || validation) coarse.push_back(l);
  out = std::move(coarse);
  patch(0.05, std::max(re_lo, -0.75), std::min(re_hi, 0.75), 1.0);
  return out;
}

// Ratios value / shape over a grid; the shape excludes the constant.
using RatioFn = std::function<std::vector<double>(cplx)>;

std::vector<double> ratios(const std::vector<cplx>& grid, const RatioFn& f) {
  std::vector<std::vector<double>> per(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { per[i] = f(grid[i]); });
  std::vector<double> out;
  for (const auto& v : per) out.insert(out.end(), v.begin(), v.end());
  return out;
}

void validate(BoundReport& rep, const std::vector<double>& train, const std::vector<double>& check) {
  rep.train_points = train.size();
  rep.validation_points = check.size();
  rep.constant = 0.0;
  for (double v : train) rep.constant = std::max(rep.constant, v);
  rep.worst_ratio = 0.0;
  rep.violations = 0;
  for (double v : check) {
    const double ratio = rep.constant > 0.0 ? v / rep.constant : (v > 0.0 ? HUGE_VAL : 0.0);
    rep.worst_ratio = std::max(rep.worst_ratio, std::isnan(ratio) ? HUGE_VAL : ratio);
    if (!(ratio <= rep.margin)) ++rep.violations;
  }
  rep.pass = rep.violations == 0 && std::isfinite(rep.constant) && rep.constant > 0.0;
}

double log_shape(cplx l, int degree) { return degree * std::log1p(std::abs(l)); }

}  // namespace

BoundReport coefficient_bound(const SpaceGeometry& g, const BoundOptions& o) {
  BoundReport rep;
  rep.name = "coefficient bound |q_R Gamma_m|";
  rep.margin = o.margin;
  const auto q = spaces::poly_q_R(o.R);
  const double hi = o.R / 2.0;
  // Table of log(|q_R Gamma_m| / (1+|lambda|)^deg q) for even m.
  auto table = [&](const std::vector<cplx>& grid, int m_max) {
    std::vector<std::vector<double>> out(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
      eigen::HCSeries s(g, grid[i]);
      const cplx qv = q(grid[i]);
      for (int m = 0; m <= m_max; m += 2)
        out[i].push_back(std::log(std::abs(qv * s.coefficient(m))) - log_shape(grid[i], q.degree()));
    });
    return out;
  };
  const auto train = table(lambda_grid(-4.0, hi, o.nu_max, false), o.train_m_max);
  const auto check = table(lambda_grid(-4.0, hi, o.nu_max, true), o.validate_m_max);

  // sup over lambda for each m, then the exponent from a log-log fit.
  const std::size_t nm = train.front().size();
  std::vector<double> sup(nm, -HUGE_VAL);
  for (const auto& row : train)
    for (std::size_t j = 0; j < nm; ++j) sup[j] = std::max(sup[j], row[j]);
  double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
  for (std::size_t j = 0; j < nm; ++j) {
    const int m = int(2 * j);
    if (m < 10 || !std::isfinite(sup[j])) continue;
    const double x = std::log1p(double(m));
    sx += x, sy += sup[j], sxx += x * x, sxy += x * sup[j], n += 1;
  }
  rep.exponent = n > 1 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;

  auto normalize = [&](const std::vector<std::vector<double>>& t) {
    std::vector<double> out;
    for (const auto& row : t)
      for (std::size_t j = 0; j < row.size(); ++j) out.push_back(std::exp(row[j] - rep.exponent * std::log1p(2.0 * j)));
    return out;
  };
  validate(rep, normalize(train), normalize(check));

  // Trend of the fit residual over the upper half of the training range.
  double tail_slope = 0.0;
  {
    double a = 0, b = 0, c = 0, d = 0, k = 0;
    for (std::size_t j = nm / 2; j < nm; ++j) {
      const double x = std::log1p(2.0 * j), y = sup[j] - rep.exponent * x;
      a += x, b += y, c += x * x, d += x * y, k += 1;
    }
    if (k > 1) tail_slope = (k * d - a * b) / (k * c - a * a);
  }
  std::ostringstream os;
  os << "chi = " << rep.exponent << " from m in [10, " << o.train_m_max << "], validated to m = " << o.validate_m_max
     << ", Re lambda in [-4, " << hi << "], residual slope over the upper half " << tail_slope;
  rep.detail = os.str();
  return rep;
}

BoundReport series_bound(const SpaceGeometry& g, const BoundOptions& o) {
  BoundReport rep;
  rep.name = "series bound |q_R Phi_lambda(t)|";
  rep.margin = o.margin;
  const auto q = spaces::poly_q_R(o.R);
  const double hi = o.R / 2.0;
  const double rho = g.rho();
  auto run = [&](bool validation) {
    std::vector<double> ts;
    for (double u : axis(0.0, 1.0, 16, validation ? Nodes::midpoints : Nodes::training)) ts.push_back(o.delta * std::pow(o.t_max / o.delta, u));
    return ratios(lambda_grid(-4.0, hi, o.nu_max, validation), [&](cplx l) {
      eigen::HCSeries s(g, l);
      const cplx qv = q(l);
      std::vector<double> out;
      for (double t : ts) {
        const double shape = log_shape(l, q.degree()) + (std::abs(l.real()) - rho) * t;
        out.push_back(std::exp(std::log(std::abs(qv * s.phi(t))) - shape));
      }
      return out;
    });
  };
  const auto train = run(false);
  const auto check = run(true);
  validate(rep, train, check);
  std::ostringstream os;
  os << "t in [" << o.delta << ", " << o.t_max << "], Re lambda in [-4, " << hi << "], |Im lambda| <= " << o.nu_max;
  rep.detail = os.str();
  return rep;
}

BoundReport derivative_bound(const SpaceGeometry& g, int m, const BoundOptions& o) {
  if (m < 0 || m > 4) throw DomainError("derivative_bound: order must lie in [0, 4]");
  BoundReport rep;
  rep.name = "derivative bound |d^" + std::to_string(m) + "/dt p_R E°|";
  rep.margin = o.margin;
  const auto p = spaces::poly_p_R(g, o.R);
  const double rho = g.rho();
  auto run = [&](bool validation) {
    const auto ts = axis(o.delta, o.t_max, o.t_points, validation ? Nodes::midpoints : Nodes::training);
    return ratios(lambda_grid(-o.R, o.R, o.nu_max, validation), [&](cplx l) {
      const eigen::SphericalFunctions sf(g, l, p);
      const std::function<cplx(double)> e = [&](double t) { return sf.eisenstein(t); };
      std::vector<double> out;
      for (double t : ts) {
        const cplx d = m == 0 ? e(t) : numerics::fd_derivative(e, t, m, 1e-3);
        const double shape = std::log1p(t) + log_shape(l, p.degree() + m) + (std::abs(l.real()) - rho) * t;
        out.push_back(std::exp(std::log(std::abs(d)) - shape));
      }
      return out;
    });
  };
  const auto train = run(false);
  const auto check = run(true);
  validate(rep, train, check);
  std::ostringstream os;
  os << "t in [" << o.delta << ", " << o.t_max << "], Re lambda in [" << -o.R << ", " << o.R << "], |Im lambda| <= "
     << o.nu_max << ", deg p_R = " << p.degree();
  rep.detail = os.str();
  return rep;
}

std::vector<BoundReport> run_all(const SpaceGeometry& g, const BoundOptions& o) {
  std::vector<BoundReport> out = {coefficient_bound(g, o), series_bound(g, o)};
  for (int m = 0; m <= 2; ++m) out.push_back(derivative_bound(g, m, o));
  return out;
}

}  // namespace rank1sft::bounds
