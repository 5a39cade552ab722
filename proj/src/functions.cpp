#include "rank1sft/functions.hpp"

#include <algorithm>
#include <cmath>

#include "rank1sft/errors.hpp"
#include "rank1sft/numerics.hpp"

namespace rank1sft {

WVector& WVector::operator+=(const WVector& o) {
  if (o.size() != size()) throw DomainError("WVector: size mismatch");
  for (int w = 0; w < size(); ++w) c_[w] += o[w];
  return *this;
}

WVector& WVector::operator-=(const WVector& o) {
  if (o.size() != size()) throw DomainError("WVector: size mismatch");
  for (int w = 0; w < size(); ++w) c_[w] -= o[w];
  return *this;
}

WVector& WVector::operator*=(cplx s) {
  for (auto& v : c_) v *= s;
  return *this;
}

double WVector::norm() const {
  double s = 0.0;
  for (const auto& v : c_) s += std::norm(v);
  return std::sqrt(s);
}

double WVector::max_abs() const {
  double m = 0.0;
  for (const auto& v : c_) m = std::max(m, std::abs(v));
  return m;
}

WVector operator+(WVector a, const WVector& b) { return a += b; }
WVector operator-(WVector a, const WVector& b) { return a -= b; }
WVector operator*(cplx s, WVector a) { return a *= s; }

RadialFunction::RadialFunction(std::vector<Component> components) : f_(std::move(components)) {}

RadialFunction RadialFunction::uniform(int orbits, Component f) {
  return RadialFunction(std::vector<Component>(std::size_t(orbits), f));
}

RadialFunction& RadialFunction::with_derivatives(std::vector<Derivative> d) {
  if (d.size() != f_.size()) throw DomainError("RadialFunction: derivative count mismatch");
  d_ = std::move(d);
  return *this;
}

RadialFunction& RadialFunction::with_support(double lower, double upper) {
  if (!(lower >= 0.0 && upper > lower)) throw DomainError("RadialFunction: bad support");
  support_lo_ = lower;
  support_hi_ = upper;
  return *this;
}

RadialFunction& RadialFunction::with_decay_class(double r) {
  if (!(r > 0.0 && r <= 2.0)) throw DomainError("RadialFunction: decay class must lie in (0, 2]");
  decay_class_ = r;
  return *this;
}

RadialFunction& RadialFunction::with_real_values(bool real) {
  real_ = real;
  return *this;
}

cplx RadialFunction::value(int w, double t) const {
  if (support_hi_ && (t > *support_hi_ || t < support_lo_)) return 0.0;
  return f_[std::size_t(w)](t);
}

WVector RadialFunction::operator()(double t) const {
  WVector out(orbits());
  for (int w = 0; w < orbits(); ++w) out[w] = value(w, t);
  return out;
}

cplx RadialFunction::derivative(int w, double t, int order, double h) const {
  if (order == 0) return value(w, t);
  if (!d_.empty()) {
    if (support_hi_ && (t > *support_hi_ || t < support_lo_)) return 0.0;
    return d_[std::size_t(w)](t, order);
  }
  const int radius = numerics::fd_stencil_radius(order);
  const double step = std::min(h, 0.9 * t / radius);
  if (!(step > 0.0)) throw DomainError("RadialFunction::derivative: t too close to 0");
  return numerics::fd_derivative(std::function<cplx(double)>([&](double s) { return value(w, s); }),
                                 t, order, step);
}

namespace {

RadialFunction combine(const RadialFunction& a, const RadialFunction& b, cplx sb) {
  if (a.orbits() != b.orbits()) throw DomainError("RadialFunction: orbit count mismatch");
  std::vector<RadialFunction::Component> comps;
  for (int w = 0; w < a.orbits(); ++w) {
    comps.push_back([a, b, sb, w](double t) { return a.value(w, t) + sb * b.value(w, t); });
  }
  RadialFunction out(std::move(comps));
  if (a.support_bound() && b.support_bound()) {
    out.with_support(std::min(a.support_lower(), b.support_lower()),
                     std::max(*a.support_bound(), *b.support_bound()));
  }
  if (a.decay_class() && b.decay_class()) {
    out.with_decay_class(std::max(*a.decay_class(), *b.decay_class()));
  } else if (a.decay_class() && b.support_bound()) {
    out.with_decay_class(*a.decay_class());
  } else if (b.decay_class() && a.support_bound()) {
    out.with_decay_class(*b.decay_class());
  }
  out.with_real_values(a.real_valued() && b.real_valued() && sb.imag() == 0.0);
  return out;
}

}  // namespace

RadialFunction RadialFunction::operator+(const RadialFunction& o) const { return combine(*this, o, 1.0); }
RadialFunction RadialFunction::operator-(const RadialFunction& o) const { return combine(*this, o, -1.0); }

RadialFunction RadialFunction::scaled(cplx s) const {
  std::vector<Component> comps;
  for (int w = 0; w < orbits(); ++w) {
    comps.push_back([f = f_[std::size_t(w)], s](double t) { return s * f(t); });
  }
  RadialFunction out(std::move(comps));
  if (support_hi_) out.with_support(support_lo_, *support_hi_);
  if (decay_class_) out.with_decay_class(*decay_class_);
  out.with_real_values(real_ && s.imag() == 0.0);
  if (!d_.empty()) {
    std::vector<Derivative> d;
    for (const auto& dw : d_) d.push_back([dw, s](double t, int k) { return s * dw(t, k); });
    out.d_ = std::move(d);
  }
  return out;
}

RadialFunction bump(int orbits, double t0, double w) {
  if (!(w > 0.0 && t0 - w >= 0.0)) throw DomainError("bump: need w > 0 and t0 - w >= 0");
  auto f = [t0, w](double t) -> cplx {
    const double u = (t - t0) / w;
    if (std::abs(u) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - u * u));
  };
  RadialFunction out = RadialFunction::uniform(orbits, f);
  out.with_support(t0 - w, t0 + w).with_real_values(true);
  return out;
}

SpectralFunction& SpectralFunction::with_regularized(RegularizedEvaluator r) {
  reg_ = std::move(r);
  return *this;
}

SpectralFunction& SpectralFunction::with_poles(std::vector<ResidueData> poles) {
  poles_ = std::move(poles);
  return *this;
}

SpectralFunction& SpectralFunction::with_strip(double left, double right) {
  strip_ = std::make_pair(left, right);
  return *this;
}

SpectralFunction& SpectralFunction::with_real_structure(bool on) {
  real_structure_ = on;
  return *this;
}

WVector SpectralFunction::regularized(cplx lambda, const spaces::Polynomial& p) const {
  if (reg_) return reg_(lambda, p);
  return p(lambda) * f_(lambda);
}

}  // namespace rank1sft
