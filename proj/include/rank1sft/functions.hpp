#pragma once

#include <complex>
#include <functional>
#include <initializer_list>
#include <optional>
#include <vector>

#include "rank1sft/spaces.hpp"

namespace rank1sft {

using cplx = std::complex<double>;

// Element of C^W, one coordinate per open orbit.
class WVector {
 public:
  WVector() = default;
  explicit WVector(int n, cplx fill = 0.0) : c_(std::size_t(n), fill) {}
  WVector(std::initializer_list<cplx> values) : c_(values) {}

  static WVector basis(int n, int w) {
    WVector e(n);
    e[w] = 1.0;
    return e;
  }

  int size() const { return int(c_.size()); }
  cplx& operator[](int w) { return c_[std::size_t(w)]; }
  const cplx& operator[](int w) const { return c_[std::size_t(w)]; }
  const std::vector<cplx>& components() const { return c_; }

  WVector& operator+=(const WVector& o);
  WVector& operator-=(const WVector& o);
  WVector& operator*=(cplx s);
  double norm() const;       // Euclidean
  double max_abs() const;

 private:
  std::vector<cplx> c_;
};

WVector operator+(WVector a, const WVector& b);
WVector operator-(WVector a, const WVector& b);
WVector operator*(cplx s, WVector a);

// K-invariant function, one radial profile f_w(t) per orbit.
class RadialFunction {
 public:
  using Component = std::function<cplx(double)>;
  // Analytic derivative of the given order (>= 1) at t.
  using Derivative = std::function<cplx(double, int)>;

  RadialFunction() = default;
  explicit RadialFunction(std::vector<Component> components);
  static RadialFunction uniform(int orbits, Component f);

  RadialFunction& with_derivatives(std::vector<Derivative> d);
  // f vanishes outside [lower, upper].
  RadialFunction& with_support(double lower, double upper);
  RadialFunction& with_decay_class(double r);
  RadialFunction& with_real_values(bool real);

  int orbits() const { return int(f_.size()); }
  cplx value(int w, double t) const;
  WVector operator()(double t) const;
  // order 0 is the value; analytic derivatives when provided, otherwise
  // O(h^4) central stencils (h shrunk near t = 0).
  cplx derivative(int w, double t, int order, double h = 1e-3) const;
  bool has_analytic_derivatives() const { return !d_.empty(); }

  std::optional<double> support_bound() const { return support_hi_; }
  double support_lower() const { return support_lo_; }
  std::optional<double> decay_class() const { return decay_class_; }
  bool real_valued() const { return real_; }
  const Component& component(int w) const { return f_[std::size_t(w)]; }

  // Pointwise combinations; support is the union, decay the weaker class.
  RadialFunction operator+(const RadialFunction& o) const;
  RadialFunction operator-(const RadialFunction& o) const;
  RadialFunction scaled(cplx s) const;

 private:
  std::vector<Component> f_;
  std::vector<Derivative> d_;
  std::optional<double> support_hi_;
  double support_lo_ = 0.0;
  std::optional<double> decay_class_;
  bool real_ = false;
};

// Smooth window exp(1 - 1/(1-u^2)), u = (t - t0)/w, identical on each orbit.
RadialFunction bump(int orbits, double t0 = 1.5, double w = 0.5);

// Location and value of a simple pole of a spectral function.
struct ResidueData {
  cplx location;
  WVector value;
};

// C^W-valued function of the spectral parameter on a strip.
class SpectralFunction {
 public:
  using Evaluator = std::function<WVector(cplx)>;
  // p(lambda) phi(lambda), computed without forming phi at a root of p.
  using RegularizedEvaluator = std::function<WVector(cplx, const spaces::Polynomial&)>;

  SpectralFunction() = default;
  SpectralFunction(int orbits, Evaluator f) : orbits_(orbits), f_(std::move(f)) {}

  SpectralFunction& with_regularized(RegularizedEvaluator r);
  SpectralFunction& with_poles(std::vector<ResidueData> poles);
  SpectralFunction& with_strip(double left, double right);
  // phi(conj(lambda)) = conj(phi(lambda)); lets line integrals fold nu -> -nu.
  SpectralFunction& with_real_structure(bool on);

  int orbits() const { return orbits_; }
  WVector operator()(cplx lambda) const { return f_(lambda); }
  WVector regularized(cplx lambda, const spaces::Polynomial& p) const;
  const std::vector<ResidueData>& poles() const { return poles_; }
  std::optional<std::pair<double, double>> strip() const { return strip_; }
  bool real_structure() const { return real_structure_; }

 private:
  int orbits_ = 1;
  Evaluator f_;
  RegularizedEvaluator reg_;
  std::vector<ResidueData> poles_;
  std::optional<std::pair<double, double>> strip_;
  bool real_structure_ = false;
};

}  // namespace rank1sft
