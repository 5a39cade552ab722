#pragma once

#include <complex>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "rank1sft/functions.hpp"
#include "rank1sft/gamma_ratio.hpp"
#include "rank1sft/spaces.hpp"

namespace rank1sft::eigen {

using spaces::Polynomial;
using spaces::SpaceGeometry;

// Pole tolerances: c-function and recursion poles 1e-8, Eisenstein prefactor 1e-6.
inline constexpr double kCPoleTol = 1e-8;
inline constexpr double kEisensteinPoleTol = 1e-6;
// Below this t the Harish-Chandra series is not used by the public operations.
inline constexpr double kSeriesDelta = 0.5;

// Gamma-ratio descriptions of the closed-form coefficients.
numerics::GammaRatio c_function_ratio(const SpaceGeometry& g);
numerics::GammaRatio eisenstein_prefactor_ratio(const SpaceGeometry& g);

cplx c_function(const SpaceGeometry& g, cplx lambda);

// 2^{l-rho} Gamma((rho+l)/2) Gamma((l-rho+m+1)/2) / (Gamma(l) Gamma((m+1)/2)), m = m1p + m2p.
cplx eisenstein_prefactor(const SpaceGeometry& g, cplx lambda);

// E°(lambda, eta)(t) per component; dispatches between the hypergeometric
// form and the Harish-Chandra form E° = Phi_l + c(l) Phi_{-l}.
WVector eisenstein(const SpaceGeometry& g, cplx lambda, const WVector& eta, double t);
cplx eisenstein_scalar(const SpaceGeometry& g, cplx lambda, double t);
// p(lambda) E°(lambda, 1)(t), finite at the roots of p that cancel poles.
cplx eisenstein_regularized(const SpaceGeometry& g, cplx lambda, double t, const Polynomial& p);
// Prefactor times 2F1(...; -sinh^2 t), without route dispatch. The 2F1
// transformations cancel badly once |lambda| sinh t is large; use
// eisenstein_scalar there.
cplx eisenstein_hypergeometric(const SpaceGeometry& g, cplx lambda, double t);

cplx phi0(const SpaceGeometry& g, cplx lambda, double t);
double phi0_discrete(const SpaceGeometry& g, int k, double t);

// Gamma_0 .. Gamma_{M-1}; rejects lambda within 1e-8 of {m/2 : 0 < m < M}.
std::vector<cplx> gamma_coefficients(const SpaceGeometry& g, cplx lambda, int M);

// e^{(l-rho)t} sum Gamma_m e^{-mt}; rejects t < delta.
cplx hc_series_phi(const SpaceGeometry& g, cplx lambda, double t, double tol = 1e-15,
                   double delta = kSeriesDelta);

cplx jacobi_function(double alpha, double beta, cplx lambda, double t);

// f'' + (m1p coth t + m1m tanh t + 2 m2p coth 2t + 2 m2m tanh 2t) f'.
cplx radial_laplacian_apply(const SpaceGeometry& g, const RadialFunction& f, int w, double t,
                            double h = 1e-3);
// (1/J)(J f')', evaluated with nested stencils.
cplx radial_laplacian_divergence(const SpaceGeometry& g, const RadialFunction& f, int w, double t,
                                 double h = 1e-3);

// Harish-Chandra coefficients for fixed lambda, extended on demand.
// Only even indices are stored; odd coefficients vanish.
class HCSeries {
 public:
  HCSeries(const SpaceGeometry& g, cplx lambda);
  HCSeries(const HCSeries&) = delete;
  HCSeries& operator=(const HCSeries&) = delete;

  cplx lambda() const { return lambda_; }
  cplx coefficient(int m);
  // sum_m Gamma_m x^m with x = e^{-t}, truncated once terms stay below tol.
  cplx sum(double t, double tol = 1e-16);
  cplx phi(double t, double tol = 1e-16);
  // sum(t) at every t in ts, under one lock.
  std::vector<cplx> sums(const std::vector<double>& ts, double tol = 1e-16);

 private:
  void extend_to(std::size_t j);  // caller holds mutex_
  cplx sum_locked(double t, double tol);

  SpaceGeometry g_;
  cplx lambda_;
  std::vector<cplx> gamma_;  // Gamma_{2j}
  // Recursion state for the last two indices: u = (rho - lambda + 2j) Gamma_{2j}
  // and the four running sums.
  cplx u_[2] = {};
  cplx sa_[2] = {}, sb_[2] = {}, sc_[2] = {}, sd_[2] = {};
  std::mutex mutex_;
};

// Repeated evaluation of the spherical functions at one lambda. Evaluation is
// safe from several threads.
class SphericalFunctions {
 public:
  SphericalFunctions(const SpaceGeometry& g, cplx lambda);
  // Values are multiplied by p(lambda); poles of E° at roots of p cancel.
  SphericalFunctions(const SpaceGeometry& g, cplx lambda, const Polynomial& regularizer);

  cplx lambda() const { return lambda_; }
  // E°(lambda, 1)(t) (times p(lambda) when regularized).
  cplx eisenstein(double t) const;
  std::vector<cplx> eisenstein(const std::vector<double>& ts) const;
  // Phi_lambda(t).
  cplx phi(double t) const;
  bool uses_series() const { return series_ok_; }

 private:
  void init(const Polynomial* p);
  cplx hypergeometric(double t) const;

  SpaceGeometry g_;
  cplx lambda_;
  cplx prefactor_ = 0.0;  // includes p(lambda) when regularized
  cplx poly_value_ = 1.0;
  bool prefactor_ok_ = true;
  bool series_ok_ = false;
  double t_low_ = kSeriesDelta;
  cplx c_ = 0.0;
  std::unique_ptr<HCSeries> plus_, minus_;
};

}  // namespace rank1sft::eigen
