#include "rank1sft/spaces.hpp"

#include <cmath>
#include <numbers>
#include <regex>

#include "rank1sft/errors.hpp"

namespace rank1sft::spaces {

namespace {

constexpr double kSingularR = 1e-12;

double log_sinh(double t) {
  if (t < 20.0) return std::log(std::sinh(t));
  return t - std::numbers::ln2 + std::log1p(-std::exp(-2.0 * t));
}

double log_cosh(double t) {
  return t - std::numbers::ln2 + std::log1p(std::exp(-2.0 * t));
}

}  // namespace

void validate(const MultiplicityDatum& m) {
  if (m.m1p < 0 || m.m1m < 0 || m.m2p < 0 || m.m2m < 0)
    throw InvalidMultiplicities("nonnegative", "all multiplicities must be >= 0");
  if (m.orbits != 1 && m.orbits != 2)
    throw InvalidMultiplicities("orbits", "orbit count must be 1 or 2, got " + std::to_string(m.orbits));
  if (m.m1p + m.m1m <= 0)
    throw InvalidMultiplicities("m1p+m1m>0", "m1p + m1m must be positive");
  if (m.m2m > 0 && m.m1p != m.m1m)
    throw InvalidMultiplicities("m2m>0 => m1p=m1m",
                                "m2m = " + std::to_string(m.m2m) + " requires m1p = m1m, got " +
                                    std::to_string(m.m1p) + " vs " + std::to_string(m.m1m));
}

SpaceGeometry::SpaceGeometry(const MultiplicityDatum& m) : m_(m) {
  validate(m);
  rho_ = (m.m1p + m.m1m + 2.0 * m.m2p + 2.0 * m.m2m) / 2.0;
}

double SpaceGeometry::jacobian(double t) const {
  if (t < 0.0) throw DomainError("jacobian: t must be >= 0");
  if (t > 30.0) return std::exp(log_jacobian(t));
  return std::pow(std::sinh(t), m_.m1p) * std::pow(std::cosh(t), m_.m1m) *
         std::pow(std::sinh(2.0 * t), m_.m2p) * std::pow(std::cosh(2.0 * t), m_.m2m);
}

double SpaceGeometry::log_jacobian(double t) const {
  double s = 0.0;
  if (m_.m1p) s += m_.m1p * log_sinh(t);
  if (m_.m1m) s += m_.m1m * log_cosh(t);
  if (m_.m2p) s += m_.m2p * log_sinh(2.0 * t);
  if (m_.m2m) s += m_.m2m * log_cosh(2.0 * t);
  return s;
}

double SpaceGeometry::laplacian_drift(double t) const {
  double s = 0.0;
  if (m_.m1p) s += m_.m1p / std::tanh(t);
  if (m_.m1m) s += m_.m1m * std::tanh(t);
  if (m_.m2p) s += 2.0 * m_.m2p / std::tanh(2.0 * t);
  if (m_.m2m) s += 2.0 * m_.m2m * std::tanh(2.0 * t);
  return s;
}

SpaceGeometry derive_geometry(const MultiplicityDatum& m) { return SpaceGeometry(m); }

double jacobian(const SpaceGeometry& g, double t) { return g.jacobian(t); }

double gamma_r(const SpaceGeometry& g, double r) {
  if (!(r > 0.0 && r <= 2.0)) throw DomainError("gamma_r: r must lie in (0, 2]");
  return (2.0 / r - 1.0) * g.rho();
}

PoleSet pole_set(const SpaceGeometry& g) {
  PoleSet p;
  p.rho = g.rho();
  p.multiplicities = g.multiplicities();
  const double top = g.rho() - 1.0 - g.m_plus();
  for (int k = 0; top - 2.0 * k > 0.0; ++k) p.lambdas.push_back(top - 2.0 * k);
  return p;
}

PoleSplit split_pole_set(const PoleSet& p, double r) {
  if (!(r > 0.0 && r <= 2.0)) throw DomainError("split_pole_set: r must lie in (0, 2]");
  const double gr = (2.0 / r - 1.0) * p.rho;
  PoleSplit s;
  for (std::size_t k = 0; k < p.lambdas.size(); ++k) {
    const double l = p.lambdas[k];
    if (std::abs(l - gr) < kSingularR)
      throw DomainError("split_pole_set: gamma_r = " + std::to_string(gr) +
                        " coincides with a pole lambda_k; r is singular");
    if (l < gr) {
      s.inside.push_back(l);
      s.inside_index.push_back(int(k));
    } else {
      s.outside.push_back(l);
      s.outside_index.push_back(int(k));
    }
  }
  return s;
}

cplx Polynomial::operator()(cplx x) const {
  cplx v = leading_;
  for (const auto& r : roots_) v *= (x - r);
  return v;
}

std::vector<double> Polynomial::real_roots() const {
  std::vector<double> out;
  out.reserve(roots_.size());
  for (const auto& r : roots_) out.push_back(r.real());
  return out;
}

Polynomial poly_p_R(const SpaceGeometry& g, double R) {
  if (!(R > 0.0)) throw DomainError("poly_p_R: R must be positive");
  std::vector<cplx> roots;
  for (int k = 0; g.rho() + 2.0 * k <= R; ++k) roots.emplace_back(-g.rho() - 2.0 * k);
  const double top = g.rho() - g.m_plus() - 1.0;
  for (int k = 0; -top + 2.0 * k <= R; ++k) roots.emplace_back(top - 2.0 * k);
  return Polynomial(std::move(roots));
}

Polynomial poly_q_R(double R) {
  if (!(R > 0.0)) throw DomainError("poly_q_R: R must be positive");
  std::vector<cplx> roots;
  for (int k = 1; k <= R; ++k) roots.emplace_back(k / 2.0);
  const double leading = std::ldexp(1.0, int(roots.size()));
  return Polynomial(std::move(roots), leading);
}

Polynomial poly_p_r(const SpaceGeometry& g, double r) {
  const PoleSplit s = split_pole_set(pole_set(g), r);
  std::vector<cplx> roots;
  for (double l : s.inside) roots.emplace_back(-l);
  return Polynomial(std::move(roots));
}

Polynomial poly_pi(const PoleSet& p) {
  std::vector<cplx> roots;
  for (double l : p.lambdas) roots.emplace_back(l * l - p.rho * p.rho);
  return Polynomial(std::move(roots));
}

cplx pi_of_eigenvalue(const PoleSet& p, cplx lambda) {
  cplx v = 1.0;
  for (double l : p.lambdas) v *= lambda * lambda - l * l;
  return v;
}

MultiplicityDatum real_hyperbolic(int p, int q) {
  if (p < 1 || q < 1) throw DomainError("real_hyperbolic: need p >= 1 and q >= 1");
  MultiplicityDatum m{q - 1, p - 1, 0, 0, q == 1 ? 2 : 1};
  validate(m);
  return m;
}

MultiplicityDatum riemannian_hyperbolic(int n) {
  if (n < 2) throw DomainError("riemannian_hyperbolic: need n >= 2");
  return real_hyperbolic(1, n);
}

std::vector<Preset> preset_catalogue() {
  const std::string orbit_note =
      "|W| = 2 exactly when q = 1: the sphere S^{q-1} in the polar form (cosh t u, sinh t v) is "
      "then disconnected, so t and -t lie on different orbits.";
  std::vector<Preset> out;
  for (int n : {2, 3, 4, 5}) {
    out.push_back({"riemannian-H" + std::to_string(n), riemannian_hyperbolic(n),
                   "Riemannian real hyperbolic space SO_e(1," + std::to_string(n) + ")/SO(" +
                       std::to_string(n) + "); m1p = n-1, a single orbit; L is empty."});
  }
  for (auto [p, q] : {std::pair{9, 1}, std::pair{4, 3}, std::pair{5, 1}, std::pair{3, 2}}) {
    out.push_back({"real-hyperbolic p=" + std::to_string(p) + " q=" + std::to_string(q),
                   real_hyperbolic(p, q),
                   "SO_e(p,q)/SO_e(p-1,q); m1p = q-1, m1m = p-1, rho = (p+q-2)/2, "
                   "L = {rho - q - 2k > 0}. " +
                       orbit_note});
  }
  return out;
}

std::optional<Preset> find_preset(const std::string& name) {
  static const std::regex riem(R"(\s*riemannian-H(\d+)\s*)");
  static const std::regex real(R"(\s*real-hyperbolic\s+p\s*=\s*(\d+)\s+q\s*=\s*(\d+)\s*)");
  std::smatch match;
  if (std::regex_match(name, match, riem)) {
    const int n = std::stoi(match[1]);
    return Preset{"riemannian-H" + std::to_string(n), riemannian_hyperbolic(n),
                  "Riemannian real hyperbolic space; m1p = n-1, a single orbit."};
  }
  if (std::regex_match(name, match, real)) {
    const int p = std::stoi(match[1]);
    const int q = std::stoi(match[2]);
    return Preset{"real-hyperbolic p=" + std::to_string(p) + " q=" + std::to_string(q),
                  real_hyperbolic(p, q), "SO_e(p,q)/SO_e(p-1,q); m1p = q-1, m1m = p-1."};
  }
  return std::nullopt;
}

}  // namespace rank1sft::spaces
