#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "rank1sft/eigenfunctions.hpp"
#include "rank1sft/functions.hpp"
#include "rank1sft/numerics.hpp"
#include "rank1sft/spaces.hpp"

namespace rank1sft::transform {

using numerics::ContourSpec;
using numerics::QuadratureSpec;
using spaces::Polynomial;
using spaces::SpaceGeometry;

// Fixed composite Gauss-Legendre rules used when one transform is evaluated
// at many points (inversion, calibration, synthesis on a t-grid).
struct FixedRuleSpec {
  double cutoff = 250.0;   // Lambda: spectral integrals run over |nu| <= Lambda
  double nu_panel = 0.5;   // widest nu panel
  int order = 16;          // points per panel, both sides
  double t_cutoff = 45.0;  // T for radial functions without compact support
  double t_panel = 0.25;   // widest t panel
};

// ---- Forward transform ------------------------------------------------------

// [F f(lambda)]_w = int_0^inf f_w(t) E°(-lambda, e_w)(t) J(t) dt, adaptive quadrature.
// Without compact support lambda must satisfy |Re lambda| <= gamma_r for the
// decay class r of f (Re lambda = 0 when no class is declared).
WVector forward(const SpaceGeometry& g, const RadialFunction& f, cplx lambda,
                const QuadratureSpec& spec = {});

// The same integral on a fixed t-rule; f J is sampled once.
class ForwardPlan {
 public:
  // nu_max: largest |Im lambda| to be resolved by the t-rule.
  ForwardPlan(const SpaceGeometry& g, const RadialFunction& f, double nu_max,
              const FixedRuleSpec& spec = {});

  WVector operator()(cplx lambda) const;
  // p(lambda) F f(lambda), finite at roots of p that cancel poles of F f.
  WVector regularized(cplx lambda, const Polynomial& p) const;
  const SpaceGeometry& geometry() const { return g_; }
  int orbits() const { return int(weights_.size()); }
  std::size_t node_count() const { return nodes_.size(); }

 private:
  WVector accumulate(const eigen::SphericalFunctions& e) const;
  void check_convergence(cplx lambda) const;

  SpaceGeometry g_;
  std::vector<double> nodes_;
  std::vector<std::vector<cplx>> weights_;  // per orbit: quadrature weight * f_w * J
  bool compact_ = false;
  double gamma_limit_ = 0.0;  // |Re lambda| bound for non-compact f
};

// F f as a SpectralFunction. Compactly supported f: residues at -lambda_k
// are attached and the function is meromorphic; otherwise it lives on the
// strip |Re lambda| <= gamma_r.
SpectralFunction transform_of(const SpaceGeometry& g, const RadialFunction& f, double nu_max,
                              const FixedRuleSpec& spec = {});

// ---- Residues ----------------------------------------------------------------

// Res_{lambda=-lambda_k} F f via the counterclockwise circle. The default
// circle has radius 0.25 around -lambda_k.
ResidueData residue_at(const SpaceGeometry& g, const RadialFunction& f, int k);
ResidueData residue_at(const SpaceGeometry& g, const RadialFunction& f, int k, const ContourSpec& c);
// Same residue as the limit of (lambda + lambda_k) F f(lambda), Richardson
// extrapolated from two radii along the real axis.
ResidueData residue_limit(const SpaceGeometry& g, const RadialFunction& f, int k, double radius = 1e-3);
// Residue of an arbitrary spectral function, per component.
WVector residue(const SpectralFunction& phi, const ContourSpec& c, double tol = 1e-10);

// ---- Wave packets -------------------------------------------------------------

// J phi(t) = int_{iR} E°(lambda, phi(lambda))(t) d lambda = 2 int_{iR} Phi_lambda(t) phi(lambda) d lambda,
// with d lambda = i d nu. Adaptive quadrature over |nu| <= spec.truncation.
WVector wave_packet(const SpaceGeometry& g, const SpectralFunction& phi, double t,
                    const QuadratureSpec& spec);
// The E°-form of the same integral.
WVector wave_packet_eisenstein(const SpaceGeometry& g, const SpectralFunction& phi, double t,
                               const QuadratureSpec& spec);
// I_r phi(t) = 2 int_{Re lambda = -gamma_r} Phi_lambda(t) phi(lambda) d lambda.
WVector shifted_wave_packet(const SpaceGeometry& g, const SpectralFunction& phi, double r, double t,
                            const QuadratureSpec& spec);

// Line integrals on a fixed nu-rule with the kernels cached per node, for
// evaluation at many t. phi is sampled once.
class LineSynthesis {
 public:
  enum class Kernel { eisenstein, twice_phi };

  LineSynthesis(const SpaceGeometry& g, const SpectralFunction& phi, double x0, Kernel kernel,
                const FixedRuleSpec& spec = {});

  // int_{x0 + iR} K(lambda, t) phi(lambda) d lambda, d lambda = i d nu.
  WVector operator()(double t) const;
  std::vector<WVector> evaluate(const std::vector<double>& ts) const;
  // The synthesis as a radial function (shares the cached nodes).
  RadialFunction as_radial() const;

 private:
  struct Node {
    double weight;
    WVector value;  // phi(lambda)
    std::shared_ptr<const eigen::SphericalFunctions> kernel;
  };
  std::shared_ptr<const std::vector<Node>> nodes_;
  Kernel kernel_;
  bool folded_ = false;
  int orbits_ = 1;
};

std::vector<WVector> wave_packet(const SpaceGeometry& g, const SpectralFunction& phi,
                                 const std::vector<double>& ts, const FixedRuleSpec& spec);
std::vector<WVector> shifted_wave_packet(const SpaceGeometry& g, const SpectralFunction& phi, double r,
                                         const std::vector<double>& ts, const FixedRuleSpec& spec);

// ---- Discrete part ------------------------------------------------------------

// Phi0_{-lambda_k} on every orbit, scaled per orbit by eta.
RadialFunction kernel_function(const SpaceGeometry& g, int k, const WVector& eta);
// ||Phi0_{-lambda_k}||^2 = int_0^inf Phi0^2 J dt.
double discrete_norm_squared(const SpaceGeometry& g, int k);
// <f_w, Phi0_{-lambda_k}>_J / ||Phi0_{-lambda_k}||^2 for each k and orbit w.
std::vector<WVector> discrete_coefficients(const SpaceGeometry& g, const RadialFunction& f,
                                           const QuadratureSpec& spec = {});
// Orthogonal projection onto span{Phi0_{-lambda_k} e_w}.
RadialFunction project_discrete(const SpaceGeometry& g, const RadialFunction& f,
                                const QuadratureSpec& spec = {});
// sum_i coefficients[i]_w Phi0_{-lambda_{ks[i]}} on orbit w.
RadialFunction discrete_combination(const SpaceGeometry& g, const std::vector<int>& ks,
                                    const std::vector<WVector>& coefficients);
// <Phi0_{-lambda_j}, Phi0_{-lambda_k}>_J.
double discrete_inner_product(const SpaceGeometry& g, int j, int k);

// ---- Inversion ------------------------------------------------------------------

// The inversion formula with the discrete terms written through residues:
//   f = (kappa / i) [ J(F f) - 4 pi i sum_L Phi0_{-lambda_k} Res_{-lambda_k} F f ].
// With d lambda = i d nu, (1/i) J(F f)(t) = int_R E°(i nu, F f(i nu))(t) d nu.
struct Inversion {
  RadialFunction reconstruction;  // kappa * (continuous + discrete)
  RadialFunction continuous;      // (1/i) J(F f), uncalibrated
  RadialFunction discrete;        // -4 pi sum Phi0 Res, uncalibrated
  std::vector<WVector> residues;  // Res_{-lambda_k} F f, one per pole
  double kappa = 0.0;
  bool projection_path = false;   // residues derived from the projection
};

// Reconstruction with the calibrated constant for g.
Inversion invert_detailed(const SpaceGeometry& g, const RadialFunction& f, double r,
                          const FixedRuleSpec& spec = {});
// Reconstruction with a given constant (kappa <= 0: uncalibrated, kappa = 1).
Inversion invert_with(const SpaceGeometry& g, const RadialFunction& f, double r, double kappa,
                      const FixedRuleSpec& spec = {});
RadialFunction invert(const SpaceGeometry& g, const RadialFunction& f, double r,
                      const FixedRuleSpec& spec = {});

// f = f_H + f_B, f_B the part of the discrete series indexed by L_r^c.
struct Decomposition {
  RadialFunction f_H;
  RadialFunction f_B;
  std::vector<int> indices;           // k with lambda_k in L_r^c
  std::vector<WVector> coefficients;  // f_B = sum coefficients[i]_w Phi0_{-lambda_k}
};
Decomposition decompose_HB(const SpaceGeometry& g, const RadialFunction& f, double r,
                           const FixedRuleSpec& spec = {});

// ---- Plancherel constant ----------------------------------------------------------

struct Calibration {
  double kappa = 0.0;
  double residual = 0.0;  // relative L2 misfit of f ~ kappa * U on the samples
  std::vector<double> samples;
};

// Least-squares kappa with f ~ kappa * U on t in [0.5, 3], U the uncalibrated
// inversion output, for the reference bump (t0 = 2, w = 1). Cached per geometry.
double calibrate_plancherel(const SpaceGeometry& g, const FixedRuleSpec& spec = {});
// Same fit for a given compactly supported f; not cached.
Calibration calibrate_plancherel_with(const SpaceGeometry& g, const RadialFunction& f,
                                      const FixedRuleSpec& spec = {});

}  // namespace rank1sft::transform
