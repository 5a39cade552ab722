#pragma once

#include <complex>
#include <string>
#include <vector>

namespace rank1sft::numerics {

// Products and quotients of Gamma(s * lambda + o) with s in {0, +-1/2, +-1, ...},
// times 2^(a * lambda + b). Arguments left of Re = 1/2 are shifted right by
// the recurrence; the resulting linear factors (s*lambda + o + j) are matched
// between numerator and denominator and cancelled exactly, so removable
// singularities evaluate cleanly. A polynomial given by its roots can be
// multiplied in before cancellation, which serves regularized values
// p(lambda) * ratio(lambda) at the poles themselves.
class GammaRatio {
 public:
  GammaRatio& numerator(double slope, double offset, std::string label);
  GammaRatio& denominator(double slope, double offset, std::string label);
  GammaRatio& power_of_two(double slope, double offset);

  // Throws PoleError when an uncancelled pole lies within pole_tol of lambda.
  std::complex<double> operator()(std::complex<double> lambda, double pole_tol = 1e-8) const;
  std::complex<double> regularized(std::complex<double> lambda, const std::vector<double>& roots,
                                   double pole_tol = 1e-8) const;

  // Net pole order at a real point (negative for zeros), from the factor lists.
  int pole_order(double lambda) const;

 private:
  struct Factor {
    double slope;
    double offset;
    std::string label;
  };
  std::vector<Factor> num_, den_;
  double two_slope_ = 0.0;
  double two_offset_ = 0.0;
};

}  // namespace rank1sft::numerics
