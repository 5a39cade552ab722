#include <cmath>
#include <limits>

#include "rank1sft/errors.hpp"
#include "rank1sft/numerics.hpp"

namespace rank1sft::numerics {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxTerms = 200000;
// Distance to the integers below which a connection formula is treated as
// degenerate and evaluated as the mean of two symmetric perturbations.
constexpr double kDegenerate = 1e-6;
constexpr double kPerturb = 1e-5;
// Distance below which the inversion formula is avoided if another route exists.
constexpr double kNearInteger = 1e-2;

bool is_nonpositive_integer(cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

double distance_to_integer(cplx z) {
  return std::abs(z - std::round(z.real()));
}

// Gamma(p1) Gamma(p2) / (Gamma(q1) Gamma(q2)) in log space, so that large
// imaginary parts do not overflow one factor while the other underflows.
// Zero when a denominator argument is a pole.
cplx gamma_quotient(cplx p1, cplx p2, cplx q1, cplx q2, cplx log_extra = 0.0) {
  if (is_nonpositive_integer(q1) || is_nonpositive_integer(q2)) return 0.0;
  return std::exp(log_gamma(p1) + log_gamma(p2) - log_gamma(q1) - log_gamma(q2) + log_extra);
}

cplx series(cplx a, cplx b, cplx c, cplx z) {
  if (z == 0.0) return 1.0;
  if (is_nonpositive_integer(c)) {
    // Allowed only if the series terminates first.
    const double cm = -c.real();
    const bool a_stops = is_nonpositive_integer(a) && -a.real() <= cm;
    const bool b_stops = is_nonpositive_integer(b) && -b.real() <= cm;
    if (!a_stops && !b_stops) throw DomainError("2F1: c is a nonpositive integer");
  }
  cplx sum = 1.0;
  cplx term = 1.0;
  int small = 0;
  for (int n = 0; n < kMaxTerms; ++n) {
    const double dn = n;
    const cplx num = (a + dn) * (b + dn);
    if (num == 0.0) return sum;
    const cplx ratio = num / ((c + dn) * (dn + 1.0)) * z;
    term *= ratio;
    sum += term;
    if (std::abs(term) <= kEps * std::abs(sum) && std::abs(ratio) < 1.0) {
      if (++small >= 2) return sum;
    } else {
      small = 0;
    }
  }
  throw ConvergenceError("2F1 series did not converge");
}

cplx pfaff(cplx a, cplx b, cplx c, cplx z) {
  const cplx w = z / (z - 1.0);
  return std::exp(-a * std::log(1.0 - z)) * series(a, c - b, c, w);
}

cplx inversion_nondegenerate(cplx a, cplx b, cplx c, cplx z) {
  const cplx lmz = std::log(-z);
  const cplx w = 1.0 / z;
  cplx result = 0.0;
  // Each term is skipped when its reciprocal Gamma factors vanish.
  const cplx k1 = gamma_quotient(c, b - a, b, c - a, -a * lmz);
  if (k1 != 0.0) result += k1 * series(a, a - c + 1.0, a - b + 1.0, w);
  const cplx k2 = gamma_quotient(c, a - b, a, c - b, -b * lmz);
  if (k2 != 0.0) result += k2 * series(b, b - c + 1.0, b - a + 1.0, w);
  return result;
}

cplx inversion(cplx a, cplx b, cplx c, cplx z) {
  if (distance_to_integer(a - b) < kDegenerate) {
    return 0.5 * (inversion_nondegenerate(a, b + kPerturb, c, z) +
                  inversion_nondegenerate(a, b - kPerturb, c, z));
  }
  return inversion_nondegenerate(a, b, c, z);
}

cplx reflection_nondegenerate(cplx a, cplx b, cplx c, cplx z) {
  const cplx s = c - a - b;
  const cplx w = 1.0 - z;
  cplx result = 0.0;
  const cplx k1 = gamma_quotient(c, s, c - a, c - b);
  if (k1 != 0.0) result += k1 * series(a, b, 1.0 - s, w);
  const cplx k2 = gamma_quotient(c, -s, a, b, s * std::log(w));
  if (k2 != 0.0) result += k2 * series(c - a, c - b, s + 1.0, w);
  return result;
}

cplx reflection(cplx a, cplx b, cplx c, cplx z) {
  if (distance_to_integer(c - a - b) < kDegenerate) {
    return 0.5 * (reflection_nondegenerate(a + kPerturb, b, c, z) +
                  reflection_nondegenerate(a - kPerturb, b, c, z));
  }
  return reflection_nondegenerate(a, b, c, z);
}

cplx gauss_sum(cplx a, cplx b, cplx c) {
  const cplx s = c - a - b;
  if (s.real() <= 0.0) throw DomainError("2F1 at z=1 requires Re(c-a-b) > 0");
  return gamma_quotient(c, s, c - a, c - b);
}

cplx automatic(cplx a, cplx b, cplx c, cplx z) {
  if (z == 0.0) return 1.0;
  if (is_nonpositive_integer(a) || is_nonpositive_integer(b)) {
    // Polynomial: the plain series is exact wherever it is well conditioned.
    if (std::abs(z) <= 1.0) return series(a, b, c, z);
  }
  if (z == 1.0) return gauss_sum(a, b, c);
  const double az = std::abs(z);
  if (az <= 0.7) return series(a, b, c, z);
  if (z.real() < 0.5) {
    const double aw = std::abs(z / (z - 1.0));
    if (aw <= 0.9) return pfaff(a, b, c, z);
    if (az >= 2.0 && distance_to_integer(a - b) > kNearInteger) return inversion(a, b, c, z);
    if (aw <= 0.999) return pfaff(a, b, c, z);
    return inversion(a, b, c, z);
  }
  if (az < 1.0) {
    const double d = std::abs(1.0 - z);
    if (d >= 0.1) return series(a, b, c, z);
    if (distance_to_integer(c - a - b) > kNearInteger) return reflection(a, b, c, z);
    if (d >= 1e-3) return series(a, b, c, z);
    return reflection(a, b, c, z);
  }
  if (z.imag() == 0.0 && z.real() > 1.0) throw DomainError("2F1: z on the branch cut (1, inf)");
  if (az >= 2.0) return inversion(a, b, c, z);
  return reflection(a, b, c, z);
}

}  // namespace

cplx gauss_2f1(cplx a, cplx b, cplx c, cplx z) {
  if (is_nonpositive_integer(c) && !is_nonpositive_integer(a) && !is_nonpositive_integer(b))
    throw DomainError("2F1: c is a nonpositive integer");
  return automatic(a, b, c, z);
}

cplx gauss_2f1(cplx a, cplx b, cplx c, cplx z, Hyp2F1Route route) {
  if (is_nonpositive_integer(c) && !is_nonpositive_integer(a) && !is_nonpositive_integer(b))
    throw DomainError("2F1: c is a nonpositive integer");
  switch (route) {
    case Hyp2F1Route::automatic: return automatic(a, b, c, z);
    case Hyp2F1Route::series: return series(a, b, c, z);
    case Hyp2F1Route::pfaff: return pfaff(a, b, c, z);
    case Hyp2F1Route::inversion: return inversion(a, b, c, z);
    case Hyp2F1Route::reflection: return reflection(a, b, c, z);
  }
  return automatic(a, b, c, z);
}

std::string to_string(Hyp2F1Route route) {
  switch (route) {
    case Hyp2F1Route::automatic: return "automatic";
    case Hyp2F1Route::series: return "series";
    case Hyp2F1Route::pfaff: return "pfaff";
    case Hyp2F1Route::inversion: return "inversion";
    case Hyp2F1Route::reflection: return "reflection";
  }
  return "unknown";
}

}  // namespace rank1sft::numerics
