#pragma once

#include <string>
#include <vector>

#include "rank1sft/functions.hpp"
#include "rank1sft/spaces.hpp"

namespace rank1sft::schwartz {

using spaces::Polynomial;
using spaces::SpaceGeometry;

// S_r = iR + [left, right], left = -gamma_r, right = epsilon0.
struct StripSpec {
  double r = 2.0;
  double epsilon0 = 0.25;
  double left = 0.0;
  double right = 0.25;

  bool is_line() const { return left == right; }
};

// E° has no pole in -1/2 < Re lambda < 0, so F f has none in 0 < Re lambda < 1/2;
// epsilon0 is taken from that gap.
StripSpec strip_for(const SpaceGeometry& g, double r, double epsilon0 = 0.25);
// The imaginary axis alone, for the iR-only checks.
StripSpec imaginary_axis();

// ---- tau seminorms -------------------------------------------------------------

struct RadialGrid {
  double t_min = 1e-3;
  double t_max = 40.0;
  int points = 400;  // log-spaced
};

struct SeminormReport {
  double value = 0.0;     // grid supremum (a lower bound of the seminorm)
  bool infinite = false;  // divergence heuristic fired
  cplx argmax = 0.0;      // t (real) or lambda where the supremum is attained
  int orbit = 0;
  std::string grid;       // grid description
};

// Weighted profile growing monotonically over the last decade of the grid,
// by more than this factor in total, is declared divergent.
constexpr double kGrowthThreshold = 1e-6;

// sup_t (1+t)^n e^{(2/r) rho t} |(d/dt)^m f_w(t)| over the grid, maximized over orbits.
SeminormReport tau_seminorm(const SpaceGeometry& g, const RadialFunction& f, int n, int m_deriv,
                            double r, const RadialGrid& grid = {});

// ---- omega seminorms ------------------------------------------------------------

struct StripGrid {
  int re_points = 60;   // uniform across [left, right], plus Re lambda = 0
  int im_points = 120;  // im_points / 2 log-spaced |nu| per sign, plus nu = 0
  double nu_min = 0.1;
  double nu_max = 200.0;
  double cauchy_radius = 0.05;
  int cauchy_nodes = 16;
};

// Derivatives 0..max_order of p(lambda) phi(lambda) on a strip grid. Interior
// points use Cauchy circles; points within the circle radius of a strip edge
// use one-sided finite differences in Re lambda.
struct StripSamples {
  StripSpec strip;
  StripGrid grid;
  int max_order = 0;
  int degree_p = 0;
  std::vector<cplx> points;
  std::vector<std::vector<WVector>> derivatives;  // [point][order]
  std::vector<std::string> failures;              // points where evaluation threw
};

StripSamples sample_strip(const SpectralFunction& phi, const StripSpec& strip, const Polynomial& p,
                          int max_order, const StripGrid& grid = {});

// sup (1+|lambda|)^{n - deg p} ||(d/d lambda)^q [p phi](lambda)|| over the samples.
// The divergence heuristic looks at the profile in |nu| over the last decade.
SeminormReport omega_seminorm(const StripSamples& s, int n, int q);
SeminormReport omega_seminorm(const SpectralFunction& phi, int n, int q, const StripSpec& strip,
                              const Polynomial& p, const StripGrid& grid = {});

// ---- S(S_r)_e membership ---------------------------------------------------------

struct ValidationSpec {
  StripGrid grid;
  int max_n = 4;              // omega_{n,q} checked for n, q <= these
  int max_q = 4;
  double smooth_nu_max = 20.0;
  double smooth_tol = 1e-5;   // finite-difference derivative consistency on iR
  double holomorphy_tol = 1e-7;
  double continuity_tol = 1e-5;
  double residue_radius = 0.25;
  double residue_tol = 1e-9;  // nonzero threshold, relative to the circle scale
  double simple_tol = 1e-6;
  double symmetry_nu_max = 40.0;
  double symmetry_tol = 1e-8;
};

struct ConditionReport {
  int index = 0;  // 1..5
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct SchwartzReport {
  std::vector<ConditionReport> conditions;
  std::vector<std::vector<SeminormReport>> omega;  // [n][q]
  bool pass() const;
};

// Conditions: (1) smooth on iR, (2) p phi holomorphic inside the strip and
// continuous up to its edges, (3) simple nonzero poles at -lambda_k for
// lambda_k in L_r, (4) sampled omega_{n,q} finite, (5) phi(-lambda) = c(lambda) phi(lambda)
// where both lambda and -lambda lie in the strip.
SchwartzReport validate_spectral_schwartz(const SpaceGeometry& g, const SpectralFunction& phi,
                                          const StripSpec& strip, const Polynomial& p,
                                          const ValidationSpec& spec = {});

}  // namespace rank1sft::schwartz
