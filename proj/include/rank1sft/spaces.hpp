#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace rank1sft::spaces {

using cplx = std::complex<double>;

struct MultiplicityDatum {
  int m1p = 0;  // m_1^+
  int m1m = 0;  // m_1^-
  int m2p = 0;  // m_2^+
  int m2m = 0;  // m_2^-
  int orbits = 2;

  bool operator==(const MultiplicityDatum&) const = default;
};

// Throws InvalidMultiplicities naming the violated rule.
void validate(const MultiplicityDatum& m);

class SpaceGeometry {
 public:
  explicit SpaceGeometry(const MultiplicityDatum& m);

  const MultiplicityDatum& multiplicities() const { return m_; }
  double rho() const { return rho_; }
  int orbits() const { return m_.orbits; }
  bool riemannian() const { return m_.m1m == 0 && m_.m2m == 0; }
  // m_1^+ + m_2^+, the exponent of t in J(t) near 0.
  int m_plus() const { return m_.m1p + m_.m2p; }
  // Jacobi parameters of the hypergeometric closed forms.
  double alpha() const { return (m_plus() + 1) / 2.0 - 1.0; }
  double beta() const { return (m_.m1m + m_.m2p + 2 * m_.m2m + 1) / 2.0 - 1.0; }
  // The hypergeometric closed forms solve the operator with first-order
  // coefficient (m1p+m2p) coth t + (m1m+m2p+2m2m) tanh t, which equals the
  // radial Laplacian only when m2m = 0.
  bool closed_forms_consistent() const { return m_.m2m == 0; }

  double jacobian(double t) const;
  double log_jacobian(double t) const;
  // m1p coth t + m1m tanh t + 2 m2p coth 2t + 2 m2m tanh 2t
  double laplacian_drift(double t) const;

 private:
  MultiplicityDatum m_;
  double rho_;
};

SpaceGeometry derive_geometry(const MultiplicityDatum& m);
double jacobian(const SpaceGeometry& g, double t);
double gamma_r(const SpaceGeometry& g, double r);

struct PoleSet {
  std::vector<double> lambdas;  // descending, lambda_k = rho - 1 - m1p - m2p - 2k > 0
  double rho = 0.0;
  MultiplicityDatum multiplicities;
  std::size_t size() const { return lambdas.size(); }
};

PoleSet pole_set(const SpaceGeometry& g);

struct PoleSplit {
  std::vector<double> inside;   // L_r: lambda_k < gamma_r
  std::vector<double> outside;  // L_r^c: lambda_k > gamma_r
  std::vector<int> inside_index;
  std::vector<int> outside_index;
};

// Throws DomainError when gamma_r is within 1e-12 of some lambda_k.
PoleSplit split_pole_set(const PoleSet& p, double r);

// Polynomial stored by its roots: leading * prod (x - root).
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(std::vector<cplx> roots, double leading = 1.0)
      : roots_(std::move(roots)), leading_(leading) {}

  cplx operator()(cplx x) const;
  int degree() const { return int(roots_.size()); }
  const std::vector<cplx>& roots() const { return roots_; }
  double leading() const { return leading_; }
  // Real parts of the roots, for Gamma-ratio regularization.
  std::vector<double> real_roots() const;

 private:
  std::vector<cplx> roots_;
  double leading_ = 1.0;
};

Polynomial poly_p_R(const SpaceGeometry& g, double R);
// prod_{0 < k <= R} (2 lambda - k): roots k/2, leading coefficient 2^{#roots}.
Polynomial poly_q_R(double R);
// prod_{lambda_k in L_r} (lambda + lambda_k).
Polynomial poly_p_r(const SpaceGeometry& g, double r);
// pi(s) = prod (s - lambda_k^2 + rho^2), in the eigenvalue variable s.
Polynomial poly_pi(const PoleSet& p);
// pi(lambda^2 - rho^2) = prod (lambda^2 - lambda_k^2).
cplx pi_of_eigenvalue(const PoleSet& p, cplx lambda);

struct Preset {
  std::string name;
  MultiplicityDatum multiplicities;
  std::string note;
};

// SO_e(p,q)/SO_e(p-1,q): m1p = q-1, m1m = p-1. Two orbits when q = 1.
MultiplicityDatum real_hyperbolic(int p, int q);
// Riemannian H^n = SO_e(1,n)/SO(n): m1p = n-1, one orbit.
MultiplicityDatum riemannian_hyperbolic(int n);

std::vector<Preset> preset_catalogue();
// Accepts "riemannian-H<n>", "real-hyperbolic p=<p> q=<q>" and the catalogue names.
std::optional<Preset> find_preset(const std::string& name);

}  // namespace rank1sft::spaces
