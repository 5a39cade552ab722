#include "rank1sft/gamma_ratio.hpp"

#include <cmath>
#include <numbers>

#include "rank1sft/errors.hpp"
#include "rank1sft/numerics.hpp"

namespace rank1sft::numerics {

namespace {

constexpr double kRootMatch = 1e-9;

struct Linear {
  double slope;
  double root;
  const std::string* label;
  bool cancelled = false;
};

int shift_count(cplx arg) {
  return arg.real() < 0.5 ? int(std::ceil(0.5 - arg.real())) : 0;
}

}  // namespace

GammaRatio& GammaRatio::numerator(double slope, double offset, std::string label) {
  num_.push_back({slope, offset, std::move(label)});
  return *this;
}

GammaRatio& GammaRatio::denominator(double slope, double offset, std::string label) {
  den_.push_back({slope, offset, std::move(label)});
  return *this;
}

GammaRatio& GammaRatio::power_of_two(double slope, double offset) {
  two_slope_ += slope;
  two_offset_ += offset;
  return *this;
}

cplx GammaRatio::operator()(cplx lambda, double pole_tol) const {
  return regularized(lambda, {}, pole_tol);
}

cplx GammaRatio::regularized(cplx lambda, const std::vector<double>& roots, double pole_tol) const {
  cplx log_sum = (two_slope_ * lambda + two_offset_) * std::numbers::ln2;
  std::vector<Linear> top, bottom;
  auto expand = [&](const Factor& f, double sign, std::vector<Linear>& linear) {
    const cplx arg = f.slope * lambda + f.offset;
    if (f.slope == 0.0) {
      log_sum += sign * log_gamma(arg);
      return;
    }
    const int n = shift_count(arg);
    log_sum += sign * log_gamma(arg + double(n));
    for (int j = 0; j < n; ++j) linear.push_back({f.slope, -(f.offset + j) / f.slope, &f.label});
  };
  for (const auto& f : num_) expand(f, 1.0, bottom);
  for (const auto& f : den_) expand(f, -1.0, top);
  static const std::string poly_label = "regularizing polynomial";
  for (double r : roots) top.push_back({1.0, r, &poly_label});

  cplx scale = 1.0;
  for (auto& t : top) {
    for (auto& b : bottom) {
      if (!b.cancelled && std::abs(t.root - b.root) < kRootMatch) {
        t.cancelled = b.cancelled = true;
        scale *= t.slope / b.slope;
        break;
      }
    }
  }
  for (const auto& t : top) {
    if (t.cancelled) continue;
    const cplx v = t.slope * (lambda - t.root);
    if (v == 0.0) return 0.0;
    log_sum += std::log(v);
  }
  for (const auto& b : bottom) {
    if (b.cancelled) continue;
    if (std::abs(lambda - b.root) < pole_tol) throw PoleError(b.root, "Gamma(" + *b.label + ")");
    log_sum -= std::log(b.slope * (lambda - b.root));
  }
  return scale * std::exp(log_sum);
}

int GammaRatio::pole_order(double lambda) const {
  auto count = [&](const std::vector<Factor>& fs) {
    int c = 0;
    for (const auto& f : fs) {
      if (f.slope == 0.0) continue;
      const double arg = f.slope * lambda + f.offset;
      if (arg <= 0.0 && std::abs(arg - std::round(arg)) < kRootMatch) ++c;
    }
    return c;
  };
  return count(num_) - count(den_);
}

}  // namespace rank1sft::numerics
