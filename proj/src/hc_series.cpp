#include <cmath>

#include "rank1sft/eigenfunctions.hpp"
#include "rank1sft/errors.hpp"

namespace rank1sft::eigen {

namespace {

constexpr std::size_t kMaxTerms = 60000;  // even coefficients
constexpr double kRecursionPoleTol = 1e-8;

}  // namespace

HCSeries::HCSeries(const SpaceGeometry& g, cplx lambda) : g_(g), lambda_(lambda) {
  gamma_.push_back(1.0);
  u_[1] = g_.rho() - lambda_;
}

// Recursion m(m - 2 lambda) Gamma_m = sum_{i>=1} b_i (rho + m - 2i - lambda) Gamma_{m-2i},
// b_i = 2 m1p + 2 m1m (-1)^i + [i even] (4 m2p + 4 m2m (-1)^{i/2}),
// written with running sums so each new coefficient costs O(1).
// Index 1 of the state arrays holds entry i-1, index 0 entry i-2.
void HCSeries::extend_to(std::size_t j) {
  const auto& m = g_.multiplicities();
  const double rho = g_.rho();
  while (gamma_.size() <= j) {
    const std::size_t i = gamma_.size();
    const cplx sa = u_[1] + sa_[1];
    const cplx sb = -u_[1] - sb_[1];
    const cplx sc = i >= 2 ? u_[0] + sc_[0] : cplx(0.0);
    const cplx sd = i >= 2 ? -u_[0] - sd_[0] : cplx(0.0);
    const cplx rhs = 2.0 * m.m1p * sa + 2.0 * m.m1m * sb + 4.0 * m.m2p * sc + 4.0 * m.m2m * sd;
    const cplx gap = double(i) - lambda_;
    if (std::abs(gap) < kRecursionPoleTol) throw PoleError(double(i), "Harish-Chandra coefficient");
    const cplx gm = rhs / (4.0 * double(i) * gap);
    gamma_.push_back(gm);
    u_[0] = u_[1];
    u_[1] = (rho - lambda_ + 2.0 * double(i)) * gm;
    sa_[0] = sa_[1], sa_[1] = sa;
    sb_[0] = sb_[1], sb_[1] = sb;
    sc_[0] = sc_[1], sc_[1] = sc;
    sd_[0] = sd_[1], sd_[1] = sd;
  }
}

cplx HCSeries::coefficient(int m) {
  if (m < 0) throw DomainError("HCSeries: negative index");
  if (m % 2 == 1) return 0.0;
  std::lock_guard<std::mutex> lock(mutex_);
  extend_to(std::size_t(m / 2));
  return gamma_[std::size_t(m / 2)];
}

cplx HCSeries::sum(double t, double tol) {
  if (!(t > 0.0)) throw DomainError("HCSeries: t must be positive");
  std::lock_guard<std::mutex> lock(mutex_);
  return sum_locked(t, tol);
}

std::vector<cplx> HCSeries::sums(const std::vector<double>& ts, double tol) {
  for (double t : ts)
    if (!(t > 0.0)) throw DomainError("HCSeries: t must be positive");
  std::lock_guard<std::mutex> lock(mutex_);
  std::vector<cplx> out(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) out[i] = sum_locked(ts[i], tol);
  return out;
}

cplx HCSeries::sum_locked(double t, double tol) {
  const double x2 = std::exp(-2.0 * t);
  cplx s = 0.0;
  double power = 1.0;
  int quiet = 0;
  const double tol2 = tol * tol;
  for (std::size_t j = 0; j < kMaxTerms; ++j) {
    if (j >= gamma_.size()) extend_to(std::min(kMaxTerms - 1, 2 * j + 16));
    const cplx term = gamma_[j] * power;
    s += term;
    if (std::norm(term) <= tol2 * std::norm(s)) {
      if (++quiet >= 3 && j >= 3) return s;
    } else {
      quiet = 0;
    }
    power *= x2;
    if (power == 0.0) return s;
  }
  throw ConvergenceError("Harish-Chandra series did not converge at t = " + std::to_string(t));
}

cplx HCSeries::phi(double t, double tol) {
  return std::exp((lambda_ - g_.rho()) * t) * sum(t, tol);
}

}  // namespace rank1sft::eigen
