#include <array>
#include <cmath>
#include <numbers>

#include "rank1sft/errors.hpp"
#include "rank1sft/numerics.hpp"

namespace rank1sft::numerics {

namespace {

// Lanczos approximation, g = 607/128, 15 terms (Godfrey's coefficients).
constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczos = {
    0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,   .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4, .15808870322491248884e-3,
    -.21026444172410488319e-3,  .21743961811521264320e-3,  -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4, .36899182659531622704e-5};

cplx lanczos_log_gamma(cplx z) {
  const cplx x = z - 1.0;
  cplx a = kLanczos[0];
  for (std::size_t k = 1; k < kLanczos.size(); ++k) a += kLanczos[k] / (x + double(k));
  const cplx t = x + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (x + 0.5) * std::log(t) - t + std::log(a);
}

bool is_nonpositive_integer(cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

}  // namespace

cplx log_gamma(cplx z) {
  if (is_nonpositive_integer(z)) throw PoleError(z, "Gamma");
  if (z.real() >= 0.5) return lanczos_log_gamma(z);
  const int n = int(std::ceil(0.5 - z.real()));
  cplx shift = 0.0;
  for (int j = 0; j < n; ++j) shift += std::log(z + double(j));
  return lanczos_log_gamma(z + double(n)) - shift;
}

cplx gamma(cplx z) { return std::exp(log_gamma(z)); }

cplx rgamma(cplx z) {
  if (is_nonpositive_integer(z)) return 0.0;
  return std::exp(-log_gamma(z));
}

}  // namespace rank1sft::numerics
