#include "rank1sft/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rank1sft/errors.hpp"
#include "rank1sft/parallel.hpp"

namespace rank1sft::transform {

using eigen::SphericalFunctions;
using numerics::integrate_halfline;
using numerics::integrate_partition;

namespace {

constexpr double kReTol = 1e-12;

void check_orbits(const SpaceGeometry& g, int orbits) {
  if (orbits != g.orbits())
    throw DomainError("radial function has " + std::to_string(orbits) + " components, geometry has " +
                      std::to_string(g.orbits()) + " orbits");
}

// |Re lambda| admissible for the forward integral of a non-compact f.
double convergence_limit(const SpaceGeometry& g, const RadialFunction& f) {
  if (f.decay_class()) return spaces::gamma_r(g, *f.decay_class());
  return 0.0;
}

void require_convergent(const RadialFunction& f, double limit, cplx lambda) {
  if (f.support_bound()) return;
  if (std::abs(lambda.real()) > limit + kReTol)
    throw DomainError("forward: Re lambda = " + std::to_string(lambda.real()) +
                      " lies outside the convergence strip |Re lambda| <= " + std::to_string(limit));
}

std::vector<double> uniform_breaks(double a, double b, double width) {
  const int n = std::max(1, int(std::ceil((b - a) / width)));
  std::vector<double> out(std::size_t(n) + 1);
  for (int i = 0; i <= n; ++i) out[std::size_t(i)] = a + (b - a) * i / n;
  return out;
}

// Uniform panels with the two end panels split geometrically: compactly
// supported smooth functions are flat but not analytic at the support ends.
std::vector<double> support_breaks(double a, double b, double width) {
  const auto u = uniform_breaks(a, b, width);
  const double h = u[1] - u[0];
  std::vector<double> out = {a};
  for (double s = h / 64.0; s < h; s *= 2.0) out.push_back(a + s);
  out.insert(out.end(), u.begin() + 1, u.end() - 1);
  std::vector<double> right;
  for (double s = h / 64.0; s < h; s *= 2.0) right.push_back(b - s);
  out.insert(out.end(), right.rbegin(), right.rend());
  out.push_back(b);
  return out;
}

// Phi_lambda(t) for one-off evaluations.
cplx phi_value(const SpaceGeometry& g, cplx lambda, double t) {
  if (t >= 0.005) {
    eigen::HCSeries s(g, lambda);
    return s.phi(t);
  }
  return eigen::phi0(g, lambda, t);
}

Polynomial reflected(const Polynomial& p) {
  std::vector<cplx> roots;
  for (const auto& r : p.roots()) roots.push_back(-r);
  const double sign = p.degree() % 2 ? -1.0 : 1.0;
  return Polynomial(std::move(roots), sign * p.leading());
}

}  // namespace

// ---- forward -------------------------------------------------------------------

WVector forward(const SpaceGeometry& g, const RadialFunction& f, cplx lambda, const QuadratureSpec& spec) {
  check_orbits(g, f.orbits());
  const double limit = convergence_limit(g, f);
  require_convergent(f, limit, lambda);
  const SphericalFunctions e(g, -lambda);
  WVector out(f.orbits());
  const double width = std::min(0.25, std::numbers::pi / std::max(1.0, std::abs(lambda.imag())));
  for (int w = 0; w < f.orbits(); ++w) {
    auto integrand = [&](double t) -> cplx {
      const cplx v = f.value(w, t);
      if (v == 0.0) return 0.0;
      return v * e.eisenstein(t) * g.jacobian(t);
    };
    if (f.support_bound()) {
      out[w] = integrate_partition(integrand, uniform_breaks(f.support_lower(), *f.support_bound(), width), spec)
                   .value;
    } else {
      const double rate = std::max(limit - std::abs(lambda.real()), 0.05);
      out[w] = integrate_halfline(integrand, spec, rate).value;
    }
  }
  return out;
}

ForwardPlan::ForwardPlan(const SpaceGeometry& g, const RadialFunction& f, double nu_max,
                         const FixedRuleSpec& spec)
    : g_(g) {
  check_orbits(g, f.orbits());
  compact_ = bool(f.support_bound());
  gamma_limit_ = convergence_limit(g, f);
  const double width = std::min(spec.t_panel, 10.0 / std::max(nu_max, 1.0));
  std::vector<double> breaks;
  if (compact_) {
    breaks = support_breaks(f.support_lower(), *f.support_bound(), width);
  } else {
    // Graded toward t = 0, where J(t) ~ t^{m1p + m2p}.
    breaks = {0.0};
    for (double x = 1.0 / 64.0; x < std::min(width, 1.0); x *= 2.0) breaks.push_back(x);
    const auto rest = uniform_breaks(breaks.back() > 0.0 ? breaks.back() : 0.0, spec.t_cutoff, width);
    breaks.insert(breaks.end(), rest.begin() + 1, rest.end());
  }
  const auto rule = numerics::composite_gauss(breaks, spec.order);
  weights_.assign(std::size_t(f.orbits()), {});
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    const double t = rule.nodes[j];
    const double wj = rule.weights[j] * g.jacobian(t);
    bool any = false;
    std::vector<cplx> vals(std::size_t(f.orbits()));
    for (int w = 0; w < f.orbits(); ++w) {
      vals[std::size_t(w)] = f.value(w, t) * wj;
      any = any || vals[std::size_t(w)] != 0.0;
    }
    if (!any) continue;
    nodes_.push_back(t);
    for (int w = 0; w < f.orbits(); ++w) weights_[std::size_t(w)].push_back(vals[std::size_t(w)]);
  }
}

void ForwardPlan::check_convergence(cplx lambda) const {
  if (compact_) return;
  if (std::abs(lambda.real()) > gamma_limit_ + kReTol)
    throw DomainError("forward: Re lambda = " + std::to_string(lambda.real()) +
                      " lies outside the convergence strip |Re lambda| <= " + std::to_string(gamma_limit_));
}

WVector ForwardPlan::accumulate(const SphericalFunctions& e) const {
  WVector out(orbits());
  const auto v = e.eisenstein(nodes_);
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    for (int w = 0; w < orbits(); ++w) out[w] += weights_[std::size_t(w)][j] * v[j];
  }
  return out;
}

WVector ForwardPlan::operator()(cplx lambda) const {
  check_convergence(lambda);
  return accumulate(SphericalFunctions(g_, -lambda));
}

WVector ForwardPlan::regularized(cplx lambda, const Polynomial& p) const {
  check_convergence(lambda);
  return accumulate(SphericalFunctions(g_, -lambda, reflected(p)));
}

SpectralFunction transform_of(const SpaceGeometry& g, const RadialFunction& f, double nu_max,
                              const FixedRuleSpec& spec) {
  // A ladder of t-rules: each lambda uses the coarsest one resolving |Im lambda|.
  using Ladder = std::vector<std::pair<double, ForwardPlan>>;
  auto ladder = std::make_shared<Ladder>();
  for (double level = 40.0; level < nu_max; level *= 2.0) ladder->emplace_back(level, ForwardPlan(g, f, level, spec));
  ladder->emplace_back(nu_max, ForwardPlan(g, f, nu_max, spec));
  auto pick = [ladder](cplx l) -> const ForwardPlan& {
    for (const auto& [level, plan] : *ladder)
      if (std::abs(l.imag()) + 2.0 <= level) return plan;
    return ladder->back().second;
  };
  SpectralFunction phi(f.orbits(), [pick](cplx l) { return pick(l)(l); });
  phi.with_regularized([pick](cplx l, const Polynomial& p) { return pick(l).regularized(l, p); });
  phi.with_real_structure(f.real_valued());
  if (f.support_bound()) {
    std::vector<ResidueData> poles;
    const auto L = spaces::pole_set(g);
    for (std::size_t k = 0; k < L.size(); ++k) poles.push_back(residue_at(g, f, int(k)));
    phi.with_poles(std::move(poles));
  } else {
    const double gl = convergence_limit(g, f);
    phi.with_strip(-gl, gl);
  }
  return phi;
}

// ---- residues ---------------------------------------------------------------------

WVector residue(const SpectralFunction& phi, const ContourSpec& c, double tol) {
  WVector out(phi.orbits());
  for (int w = 0; w < phi.orbits(); ++w) {
    out[w] = numerics::contour_residue([&](cplx l) { return phi(l)[w]; }, c, tol);
  }
  return out;
}

ResidueData residue_at(const SpaceGeometry& g, const RadialFunction& f, int k) {
  const auto L = spaces::pole_set(g);
  if (k < 0 || std::size_t(k) >= L.size()) throw DomainError("residue_at: k out of range");
  return residue_at(g, f, k, ContourSpec{-L.lambdas[std::size_t(k)], 0.25, 64});
}

ResidueData residue_at(const SpaceGeometry& g, const RadialFunction& f, int k, const ContourSpec& c) {
  if (!f.support_bound()) throw DomainError("residue_at: f must have compact support");
  const auto L = spaces::pole_set(g);
  if (k < 0 || std::size_t(k) >= L.size()) throw DomainError("residue_at: k out of range");
  if (!(c.radius > 0.0 && c.radius < 1.0))
    throw DomainError("residue_at: radius must lie in (0, 1) to isolate a single pole");
  FixedRuleSpec fs;
  const ForwardPlan plan(g, f, std::abs(c.center) + c.radius + 1.0, fs);
  ResidueData out{c.center, WVector(f.orbits())};
  for (int w = 0; w < f.orbits(); ++w) {
    out.value[w] = numerics::contour_residue([&](cplx l) { return plan(l)[w]; }, c, 1e-9);
  }
  return out;
}

ResidueData residue_limit(const SpaceGeometry& g, const RadialFunction& f, int k, double radius) {
  if (!f.support_bound()) throw DomainError("residue_limit: f must have compact support");
  const auto L = spaces::pole_set(g);
  if (k < 0 || std::size_t(k) >= L.size()) throw DomainError("residue_limit: k out of range");
  const double pole = -L.lambdas[std::size_t(k)];
  const ForwardPlan plan(g, f, std::abs(pole) + 2.0);
  // S(e) = e [F(pole + e) - F(pole - e)] / 2 = Res + O(e^2).
  auto S = [&](double e) { return (0.5 * e) * (plan(pole + e) - plan(pole - e)); };
  const WVector s1 = S(radius);
  const WVector s2 = S(radius / 2.0);
  return ResidueData{pole, (1.0 / 3.0) * (4.0 * s2 - s1)};
}

// ---- wave packets ------------------------------------------------------------------

namespace {

enum class PacketKernel { eisenstein, twice_phi };

WVector line_packet(const SpaceGeometry& g, const SpectralFunction& phi, double x0, double t,
                    const QuadratureSpec& spec, PacketKernel kernel) {
  if (!(t > 0.0)) throw DomainError("wave packet: t must be positive");
  WVector out(phi.orbits());
  for (int w = 0; w < phi.orbits(); ++w) {
    auto h = [&](cplx l) -> cplx {
      const cplx v = phi(l)[w];
      if (v == 0.0) return 0.0;
      const cplx k = kernel == PacketKernel::eisenstein ? eigen::eisenstein_scalar(g, l, t)
                                                        : 2.0 * phi_value(g, l, t);
      return k * v;
    };
    out[w] = cplx(0.0, 1.0) * numerics::integrate_vertical_line(h, x0, spec).value;
  }
  return out;
}

double shifted_abscissa(const SpaceGeometry& g, const SpectralFunction& phi, double r) {
  spaces::split_pole_set(spaces::pole_set(g), r);  // rejects singular r
  const double x0 = -spaces::gamma_r(g, r);
  for (const auto& p : phi.poles()) {
    if (std::abs(p.location.real() - x0) < 1e-9)
      throw PoleError(p.location, "pole of phi on the line Re lambda = -gamma_r");
  }
  return x0;
}

}  // namespace

WVector wave_packet(const SpaceGeometry& g, const SpectralFunction& phi, double t, const QuadratureSpec& spec) {
  return line_packet(g, phi, 0.0, t, spec, PacketKernel::twice_phi);
}

WVector wave_packet_eisenstein(const SpaceGeometry& g, const SpectralFunction& phi, double t,
                               const QuadratureSpec& spec) {
  return line_packet(g, phi, 0.0, t, spec, PacketKernel::eisenstein);
}

WVector shifted_wave_packet(const SpaceGeometry& g, const SpectralFunction& phi, double r, double t,
                            const QuadratureSpec& spec) {
  return line_packet(g, phi, shifted_abscissa(g, phi, r), t, spec, PacketKernel::twice_phi);
}

LineSynthesis::LineSynthesis(const SpaceGeometry& g, const SpectralFunction& phi, double x0, Kernel kernel,
                             const FixedRuleSpec& spec)
    : kernel_(kernel), folded_(phi.real_structure()), orbits_(phi.orbits()) {
  const double lo = folded_ ? 0.0 : -spec.cutoff;
  const auto rule = numerics::composite_gauss(uniform_breaks(lo, spec.cutoff, spec.nu_panel), spec.order);
  auto nodes = std::make_shared<std::vector<Node>>(rule.nodes.size());
  parallel_for(rule.nodes.size(), [&](std::size_t j) {
    const cplx l(x0, rule.nodes[j]);
    (*nodes)[j] = Node{rule.weights[j], phi(l), std::make_shared<const SphericalFunctions>(g, l)};
  });
  nodes_ = std::move(nodes);
}

WVector LineSynthesis::operator()(double t) const {
  if (!(t > 0.0)) throw DomainError("LineSynthesis: t must be positive");
  WVector s(orbits_);
  for (const auto& n : *nodes_) {
    const cplx k = kernel_ == Kernel::eisenstein ? n.kernel->eisenstein(t) : 2.0 * n.kernel->phi(t);
    for (int w = 0; w < orbits_; ++w) s[w] += n.weight * k * n.value[w];
  }
  // The nu < 0 half is the conjugate of the nu > 0 half.
  if (folded_) {
    for (int w = 0; w < orbits_; ++w) s[w] = 2.0 * s[w].real();
  }
  return cplx(0.0, 1.0) * s;
}

std::vector<WVector> LineSynthesis::evaluate(const std::vector<double>& ts) const {
  std::vector<WVector> out(ts.size());
  parallel_for(ts.size(), [&](std::size_t i) { out[i] = (*this)(ts[i]); });
  return out;
}

RadialFunction LineSynthesis::as_radial() const {
  auto self = std::make_shared<const LineSynthesis>(*this);
  std::vector<RadialFunction::Component> comps;
  for (int w = 0; w < orbits_; ++w) comps.push_back([self, w](double t) { return (*self)(t)[w]; });
  return RadialFunction(std::move(comps));
}

std::vector<WVector> wave_packet(const SpaceGeometry& g, const SpectralFunction& phi,
                                 const std::vector<double>& ts, const FixedRuleSpec& spec) {
  return LineSynthesis(g, phi, 0.0, LineSynthesis::Kernel::twice_phi, spec).evaluate(ts);
}

std::vector<WVector> shifted_wave_packet(const SpaceGeometry& g, const SpectralFunction& phi, double r,
                                         const std::vector<double>& ts, const FixedRuleSpec& spec) {
  const double x0 = shifted_abscissa(g, phi, r);
  return LineSynthesis(g, phi, x0, LineSynthesis::Kernel::twice_phi, spec).evaluate(ts);
}

// ---- discrete part ---------------------------------------------------------------------

namespace {

double lambda_k(const SpaceGeometry& g, int k) {
  const auto L = spaces::pole_set(g);
  if (k < 0 || std::size_t(k) >= L.size()) throw DomainError("discrete index k out of range");
  return L.lambdas[std::size_t(k)];
}

QuadratureSpec tight() { return QuadratureSpec{1e-12, 1e-20, 45.0, 8000}; }

}  // namespace

RadialFunction kernel_function(const SpaceGeometry& g, int k, const WVector& eta) {
  const double lk = lambda_k(g, k);
  if (eta.size() != g.orbits()) throw DomainError("kernel_function: eta has wrong length");
  std::vector<RadialFunction::Component> comps;
  bool real = true;
  for (int w = 0; w < eta.size(); ++w) {
    const cplx e = eta[w];
    real = real && e.imag() == 0.0;
    comps.push_back([g, k, e](double t) { return e * eigen::phi0_discrete(g, k, t); });
  }
  RadialFunction f(std::move(comps));
  // In C^r exactly when gamma_r < lambda_k, i.e. r > 2 rho / (lambda_k + rho).
  f.with_decay_class(std::min(2.0, 2.0 * g.rho() / (lk + g.rho()) * (1.0 + 1e-12)));
  f.with_real_values(real);
  return f;
}

double discrete_inner_product(const SpaceGeometry& g, int j, int k) {
  const double rate = lambda_k(g, j) + lambda_k(g, k);
  auto h = [&](double t) -> cplx {
    return eigen::phi0_discrete(g, j, t) * eigen::phi0_discrete(g, k, t) * g.jacobian(t);
  };
  return integrate_halfline(h, tight(), rate).value.real();
}

double discrete_norm_squared(const SpaceGeometry& g, int k) { return discrete_inner_product(g, k, k); }

std::vector<WVector> discrete_coefficients(const SpaceGeometry& g, const RadialFunction& f,
                                           const QuadratureSpec& spec) {
  check_orbits(g, f.orbits());
  const auto L = spaces::pole_set(g);
  std::vector<WVector> out;
  for (std::size_t k = 0; k < L.size(); ++k) {
    const double norm2 = discrete_norm_squared(g, int(k));
    WVector a(f.orbits());
    for (int w = 0; w < f.orbits(); ++w) {
      auto h = [&](double t) -> cplx {
        const cplx v = f.value(w, t);
        if (v == 0.0) return 0.0;
        return v * eigen::phi0_discrete(g, int(k), t) * g.jacobian(t);
      };
      cplx ip;
      if (f.support_bound()) {
        ip = integrate_partition(h, uniform_breaks(f.support_lower(), *f.support_bound(), 0.25), spec).value;
      } else {
        const double rate = L.lambdas[k] + convergence_limit(g, f);
        ip = integrate_halfline(h, spec, rate).value;
      }
      a[w] = ip / norm2;
    }
    out.push_back(a);
  }
  return out;
}

namespace {

RadialFunction discrete_series(const SpaceGeometry& g, const std::vector<int>& ks,
                               const std::vector<WVector>& coefficients) {
  const int n = g.orbits();
  std::vector<RadialFunction::Component> comps;
  bool real = true;
  double decay = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    for (int w = 0; w < n; ++w) real = real && coefficients[i][w].imag() == 0.0;
    decay = std::max(decay, 2.0 * g.rho() / (lambda_k(g, ks[i]) + g.rho()));
  }
  for (int w = 0; w < n; ++w) {
    comps.push_back([g, ks, coefficients, w](double t) {
      cplx s = 0.0;
      for (std::size_t i = 0; i < ks.size(); ++i) s += coefficients[i][w] * eigen::phi0_discrete(g, ks[i], t);
      return s;
    });
  }
  RadialFunction f(std::move(comps));
  if (ks.empty()) {
    f.with_support(0.0, 1.0);
  } else {
    f.with_decay_class(std::min(2.0, decay * (1.0 + 1e-12)));
  }
  f.with_real_values(real);
  return f;
}

}  // namespace

RadialFunction project_discrete(const SpaceGeometry& g, const RadialFunction& f, const QuadratureSpec& spec) {
  const auto a = discrete_coefficients(g, f, spec);
  std::vector<int> ks;
  for (std::size_t k = 0; k < a.size(); ++k) ks.push_back(int(k));
  return discrete_series(g, ks, a);
}

RadialFunction discrete_combination(const SpaceGeometry& g, const std::vector<int>& ks,
                                    const std::vector<WVector>& coefficients) {
  return discrete_series(g, ks, coefficients);
}

}  // namespace rank1sft::transform
