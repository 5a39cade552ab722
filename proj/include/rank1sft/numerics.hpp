#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace rank1sft::numerics {

using cplx = std::complex<double>;

// ---- Gamma function -------------------------------------------------------

// Principal branch for Re z >= 1/2; continued to the left half-plane by the
// recurrence, so log_gamma(z+1) - log_gamma(z) == log z along the way.
cplx log_gamma(cplx z);
cplx gamma(cplx z);
// 1/Gamma, entire; exactly zero at the nonpositive integers.
cplx rgamma(cplx z);

// ---- Gauss hypergeometric function ----------------------------------------

enum class Hyp2F1Route {
  automatic,
  series,      // Gauss series in z
  pfaff,       // series in z/(z-1) after the Pfaff transformation
  inversion,   // connection formula at infinity, series in 1/z
  reflection,  // connection formula at z = 1, series in 1-z
};

cplx gauss_2f1(cplx a, cplx b, cplx c, cplx z);
// Forces one evaluation route; used for cross-checks.
cplx gauss_2f1(cplx a, cplx b, cplx c, cplx z, Hyp2F1Route route);
std::string to_string(Hyp2F1Route route);

// ---- Quadrature -----------------------------------------------------------

struct QuadratureSpec {
  double rel_tol = 1e-11;
  double abs_tol = 1e-14;
  double truncation = 45.0;  // half-line cutoff T or line cutoff Lambda
  int refinement_limit = 4000;
};

struct QuadratureResult {
  cplx value;
  double error = 0.0;
  long evaluations = 0;
};

using RealIntegrand = std::function<cplx(double)>;
using ComplexIntegrand = std::function<cplx(cplx)>;

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule, cached.
const GaussRule& gauss_legendre(int n);

// Fixed composite rule: nodes and weights for a partition of [a, b].
struct CompositeRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  void append_panel(double a, double b, const GaussRule& rule);
};

CompositeRule composite_gauss(const std::vector<double>& breakpoints, int order);
CompositeRule composite_gauss_uniform(double a, double b, int panels, int order);

// Adaptive Gauss-Kronrod (7/15) on [a, b].
QuadratureResult integrate(const RealIntegrand& f, double a, double b, const QuadratureSpec& spec);

// Adaptive quadrature starting from the given partition of [breaks.front(), breaks.back()].
QuadratureResult integrate_partition(const RealIntegrand& f, const std::vector<double>& breaks,
                                     const QuadratureSpec& spec);

// Integral over (0, inf). The cutoff starts at spec.truncation and grows until
// |f(T)| / decay_rate <= abs_tol / 10. The initial partition is graded toward 0.
QuadratureResult integrate_halfline(const RealIntegrand& f, const QuadratureSpec& spec,
                                    double decay_rate);

// Integral of h(x0 + i nu) d nu over the real line (real line element, nu
// increasing). With a finite spec.truncation the range is [-Lambda, Lambda];
// an infinite truncation maps the whole line onto (-1, 1).
QuadratureResult integrate_vertical_line(const ComplexIntegrand& h, double x0,
                                         const QuadratureSpec& spec);

// ---- Contours -------------------------------------------------------------

struct ContourSpec {
  cplx center;
  double radius = 0.1;
  int node_count = 64;
};

// (1 / 2 pi i) times the counterclockwise circle integral, trapezoid rule.
// Throws ConvergenceError when doubling the nodes moves the value by more
// than tol * max(1, |value|).
cplx contour_residue(const ComplexIntegrand& h, const ContourSpec& contour, double tol = 1e-10);

// Trapezoid Cauchy integrals for derivatives 0..max_order of an analytic h.
std::vector<cplx> cauchy_derivatives(const ComplexIntegrand& h, cplx center, double radius,
                                     int max_order, int node_count = 32);

// ---- Finite differences ---------------------------------------------------

// Central stencils of O(h^4) accuracy for orders 1..4.
double fd_derivative(const std::function<double(double)>& g, double t, int order, double h);
cplx fd_derivative(const std::function<cplx(double)>& g, double t, int order, double h);
// Half-width of the stencil in units of h.
int fd_stencil_radius(int order);

}  // namespace rank1sft::numerics
