#include "rank1sft/eigenfunctions.hpp"

#include <algorithm>
#include <cmath>

#include "rank1sft/errors.hpp"
#include "rank1sft/numerics.hpp"

namespace rank1sft::eigen {

using numerics::gauss_2f1;
using numerics::GammaRatio;

namespace {

// Series route is avoided within this distance of the nonzero half-integers,
// where Phi_{+-lambda} and c(lambda) have poles that cancel in E°.
constexpr double kHalfIntegerGuard = 0.2;
// Smallest t served by the Harish-Chandra series inside SphericalFunctions.
constexpr double kSeriesFloor = 0.005;

double log_two_cosh(double t) { return t + std::log1p(std::exp(-2.0 * t)); }

double distance_to_nonzero_half_integers(cplx lambda) {
  const double h = std::round(2.0 * lambda.real()) / 2.0;
  if (h != 0.0) return std::abs(lambda - h);
  return std::min(std::abs(lambda - 0.5), std::abs(lambda + 0.5));
}

int m_plus(const SpaceGeometry& g) { return g.m_plus(); }

}  // namespace

GammaRatio c_function_ratio(const SpaceGeometry& g) {
  const double rho = g.rho();
  const double m = m_plus(g);
  GammaRatio r;
  r.power_of_two(2.0, 0.0)
      .numerator(0.5, rho / 2.0, "(rho+lambda)/2")
      .numerator(-1.0, 0.0, "-lambda")
      .numerator(0.5, (-rho + 1.0 + m) / 2.0, "(lambda-rho+1+m)/2")
      .denominator(-0.5, rho / 2.0, "(rho-lambda)/2")
      .denominator(1.0, 0.0, "lambda")
      .denominator(-0.5, (-rho + 1.0 + m) / 2.0, "(-rho-lambda+1+m)/2");
  return r;
}

GammaRatio eisenstein_prefactor_ratio(const SpaceGeometry& g) {
  const double rho = g.rho();
  const double m = m_plus(g);
  GammaRatio r;
  r.power_of_two(1.0, -rho)
      .numerator(0.5, rho / 2.0, "(rho+lambda)/2")
      .numerator(0.5, (-rho + m + 1.0) / 2.0, "(lambda-rho+m+1)/2")
      .denominator(1.0, 0.0, "lambda")
      .denominator(0.0, (m + 1.0) / 2.0, "(m+1)/2");
  return r;
}

cplx c_function(const SpaceGeometry& g, cplx lambda) {
  return c_function_ratio(g)(lambda, kCPoleTol);
}

cplx eisenstein_prefactor(const SpaceGeometry& g, cplx lambda) {
  return eisenstein_prefactor_ratio(g)(lambda, kEisensteinPoleTol);
}

cplx eisenstein_hypergeometric(const SpaceGeometry& g, cplx lambda, double t) {
  if (t < 0.0) throw DomainError("eisenstein: t must be >= 0");
  const double rho = g.rho();
  const double s = std::sinh(t);
  return eisenstein_prefactor(g, lambda) *
         gauss_2f1((rho + lambda) / 2.0, (rho - lambda) / 2.0, (m_plus(g) + 1.0) / 2.0, -s * s);
}

cplx eisenstein_scalar(const SpaceGeometry& g, cplx lambda, double t) {
  if (t < 0.0) throw DomainError("eisenstein: t must be >= 0");
  SphericalFunctions sf(g, lambda);
  return sf.eisenstein(t);
}

WVector eisenstein(const SpaceGeometry& g, cplx lambda, const WVector& eta, double t) {
  if (eta.size() != g.orbits()) throw DomainError("eisenstein: eta has wrong length");
  const cplx e = eisenstein_scalar(g, lambda, t);
  WVector out(eta.size());
  for (int w = 0; w < eta.size(); ++w) out[w] = eta[w] * e;
  return out;
}

cplx eisenstein_regularized(const SpaceGeometry& g, cplx lambda, double t, const Polynomial& p) {
  SphericalFunctions sf(g, lambda, p);
  return sf.eisenstein(t);
}

cplx phi0(const SpaceGeometry& g, cplx lambda, double t) {
  if (!(t > 0.0)) throw DomainError("phi0: t must be positive");
  const cplx c = 1.0 - lambda;
  if (c.imag() == 0.0 && c.real() <= 0.0 && c.real() == std::floor(c.real()))
    throw PoleError(lambda, "2F1 parameter 1-lambda");
  const double rho = g.rho();
  const double ch = std::cosh(t);
  const cplx a = (rho - lambda) / 2.0;
  const cplx b = (-rho - lambda + 1.0 + double(m_plus(g))) / 2.0;
  return std::exp((lambda - rho) * log_two_cosh(t)) * gauss_2f1(a, b, c, 1.0 / (ch * ch));
}

double phi0_discrete(const SpaceGeometry& g, int k, double t) {
  const spaces::PoleSet L = spaces::pole_set(g);
  if (k < 0 || std::size_t(k) >= L.size()) throw DomainError("phi0_discrete: k out of range");
  const double lk = L.lambdas[std::size_t(k)];
  const double rho = g.rho();
  const double ch = std::cosh(t);
  const double z = 1.0 / (ch * ch);
  // 2F1((rho+lk)/2, -k; 1+lk; z), a polynomial of degree k.
  const double a = (rho + lk) / 2.0;
  double term = 1.0, sum = 1.0;
  for (int n = 0; n < k; ++n) {
    term *= (a + n) * (-k + n) / ((1.0 + lk + n) * (n + 1.0)) * z;
    sum += term;
  }
  return std::exp((-lk - rho) * log_two_cosh(t)) * sum;
}

std::vector<cplx> gamma_coefficients(const SpaceGeometry& g, cplx lambda, int M) {
  if (M < 0) throw DomainError("gamma_coefficients: M must be >= 0");
  for (int m = 1; m < M; ++m) {
    if (std::abs(lambda - m / 2.0) < kCPoleTol) throw PoleError(m / 2.0, "Harish-Chandra recursion");
  }
  HCSeries s(g, lambda);
  std::vector<cplx> out(static_cast<std::size_t>(M));
  for (int m = 0; m < M; ++m) out[std::size_t(m)] = s.coefficient(m);
  return out;
}

cplx hc_series_phi(const SpaceGeometry& g, cplx lambda, double t, double tol, double delta) {
  if (t < delta)
    throw DomainError("hc_series_phi: t = " + std::to_string(t) +
                      " is below the series threshold; use phi0");
  const double h = std::round(2.0 * lambda.real()) / 2.0;
  if (h > 0.0 && std::abs(lambda - h) < kCPoleTol) throw PoleError(h, "Harish-Chandra recursion");
  HCSeries s(g, lambda);
  return s.phi(t, tol);
}

cplx jacobi_function(double alpha, double beta, cplx lambda, double t) {
  const double c = alpha + 1.0;
  if (c <= 0.0 && c == std::floor(c)) throw DomainError("jacobi_function: alpha is a negative integer");
  const double rj = alpha + beta + 1.0;
  const double s = std::sinh(t);
  return gauss_2f1((rj + lambda) / 2.0, (rj - lambda) / 2.0, c, -s * s);
}

cplx radial_laplacian_apply(const SpaceGeometry& g, const RadialFunction& f, int w, double t, double h) {
  if (!(t - 2.0 * h > 0.0) && !f.has_analytic_derivatives())
    throw DomainError("radial_laplacian_apply: t too close to 0 for the stencil");
  return f.derivative(w, t, 2, h) + g.laplacian_drift(t) * f.derivative(w, t, 1, h);
}

cplx radial_laplacian_divergence(const SpaceGeometry& g, const RadialFunction& f, int w, double t,
                                 double h) {
  if (!(t - 4.0 * h > 0.0))
    throw DomainError("radial_laplacian_divergence: t too close to 0 for the stencil");
  std::function<cplx(double)> flux = [&](double s) { return g.jacobian(s) * f.derivative(w, s, 1, h); };
  return numerics::fd_derivative(flux, t, 1, h) / g.jacobian(t);
}

// ---- SphericalFunctions ------------------------------------------------------

SphericalFunctions::SphericalFunctions(const SpaceGeometry& g, cplx lambda) : g_(g), lambda_(lambda) {
  init(nullptr);
}

SphericalFunctions::SphericalFunctions(const SpaceGeometry& g, cplx lambda, const Polynomial& p)
    : g_(g), lambda_(lambda) {
  init(&p);
}

void SphericalFunctions::init(const Polynomial* p) {
  const GammaRatio ratio = eisenstein_prefactor_ratio(g_);
  try {
    if (p) {
      prefactor_ = p->leading() * ratio.regularized(lambda_, p->real_roots(), kEisensteinPoleTol);
      poly_value_ = (*p)(lambda_);
    } else {
      prefactor_ = ratio(lambda_, kEisensteinPoleTol);
    }
  } catch (const PoleError&) {
    prefactor_ok_ = false;
  }
  series_ok_ = distance_to_nonzero_half_integers(lambda_) > kHalfIntegerGuard;
  if (series_ok_) {
    try {
      c_ = c_function(g_, lambda_);
    } catch (const PoleError&) {
      series_ok_ = false;
    }
  }
  const double mag = std::abs(lambda_);
  t_low_ = std::clamp(mag > 0.0 ? 8.0 / mag : kSeriesDelta, kSeriesFloor, kSeriesDelta);
  plus_ = std::make_unique<HCSeries>(g_, lambda_);
  if (series_ok_) minus_ = std::make_unique<HCSeries>(g_, -lambda_);
}

cplx SphericalFunctions::hypergeometric(double t) const {
  if (!prefactor_ok_) {
    // Recompute to raise the PoleError with its location.
    return eisenstein_prefactor(g_, lambda_);
  }
  const double rho = g_.rho();
  const double s = std::sinh(t);
  return prefactor_ * gauss_2f1((rho + lambda_) / 2.0, (rho - lambda_) / 2.0,
                                (g_.m_plus() + 1.0) / 2.0, -s * s);
}

cplx SphericalFunctions::eisenstein(double t) const {
  if (t < 0.0) throw DomainError("eisenstein: t must be >= 0");
  if (series_ok_ && t >= t_low_) {
    if (!prefactor_ok_) hypergeometric(t);
    return poly_value_ * (plus_->phi(t) + c_ * minus_->phi(t));
  }
  return hypergeometric(t);
}

std::vector<cplx> SphericalFunctions::eisenstein(const std::vector<double>& ts) const {
  std::vector<cplx> out(ts.size());
  std::vector<double> series_t;
  std::vector<std::size_t> series_i;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (series_ok_ && ts[i] >= t_low_) {
      series_t.push_back(ts[i]);
      series_i.push_back(i);
    } else {
      out[i] = eisenstein(ts[i]);
    }
  }
  if (series_t.empty()) return out;
  if (!prefactor_ok_) hypergeometric(series_t.front());
  const auto sp = plus_->sums(series_t);
  const auto sm = minus_->sums(series_t);
  const double rho = g_.rho();
  for (std::size_t j = 0; j < series_t.size(); ++j) {
    const double t = series_t[j];
    const cplx e = std::exp(lambda_ * t);
    out[series_i[j]] = poly_value_ * std::exp(-rho * t) * (e * sp[j] + c_ * sm[j] / e);
  }
  return out;
}

cplx SphericalFunctions::phi(double t) const {
  if (!(t > 0.0)) throw DomainError("phi: t must be positive");
  // Below t_low the series needs O(|lambda|) terms; the hypergeometric is cheap there.
  if (t >= t_low_) return plus_->phi(t);
  return phi0(g_, lambda_, t);
}

}  // namespace rank1sft::eigen
