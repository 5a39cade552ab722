#include <cmath>
#include <random>

#include "doctest.h"
#include "rank1sft/eigenfunctions.hpp"
#include "rank1sft/errors.hpp"
#include "rank1sft/numerics.hpp"

using namespace rank1sft;
using namespace rank1sft::eigen;
using spaces::MultiplicityDatum;

namespace {

SpaceGeometry geom(int a, int b, int c, int d, int orbits = 1) {
  return SpaceGeometry(MultiplicityDatum{a, b, c, d, orbits});
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Direct O(M^2) evaluation of the coefficient recursion, with b_j read off
// from the expansions coth t = 1 + 2 sum e^{-2jt}, tanh t = 1 + 2 sum (-1)^j e^{-2jt}.
std::vector<cplx> naive_gamma(const MultiplicityDatum& m, cplx lambda, int M) {
  const double rho = (m.m1p + m.m1m + 2.0 * m.m2p + 2.0 * m.m2m) / 2.0;
  auto b = [&](int j) {
    double v = 2.0 * m.m1p + 2.0 * m.m1m * (j % 2 ? -1.0 : 1.0);
    if (j % 2 == 0) v += 4.0 * m.m2p + 4.0 * m.m2m * ((j / 2) % 2 ? -1.0 : 1.0);
    return v;
  };
  std::vector<cplx> g(std::size_t(M), 0.0);
  g[0] = 1.0;
  for (int n = 2; n < M; n += 2) {
    cplx s = 0.0;
    for (int j = 1; 2 * j <= n; ++j) s += b(j) * (rho + n - 2.0 * j - lambda) * g[std::size_t(n - 2 * j)];
    g[std::size_t(n)] = s / (double(n) * (double(n) - 2.0 * lambda));
  }
  return g;
}

cplx random_lambda(std::mt19937_64& rng, double re_lo, double re_hi, double im) {
  std::uniform_real_distribution<double> ur(re_lo, re_hi), ui(-im, im);
  for (;;) {
    const cplx l(ur(rng), ui(rng));
    const double h = std::round(2.0 * l.real()) / 2.0;
    if (std::abs(l - h) > 0.05) return l;
  }
}

const std::vector<MultiplicityDatum> kPresets = {
    {2, 0, 0, 0, 1}, {0, 8, 0, 0, 2}, {2, 3, 0, 0, 1}, {2, 0, 1, 0, 1}, {1, 1, 2, 0, 1}};

}  // namespace

TEST_CASE("c-function identities") {
  std::mt19937_64 rng(11);
  for (const auto& m : kPresets) {
    const SpaceGeometry g(m);
    for (int i = 0; i < 50; ++i) {
      const cplx l = random_lambda(rng, -3.0, 3.0, 6.0);
      CHECK(std::abs(c_function(g, l) * c_function(g, -l) - 1.0) < 1e-10);
      const double nu = std::uniform_real_distribution<double>(0.05, 30.0)(rng);
      CHECK(std::abs(std::abs(c_function(g, cplx(0.0, nu))) - 1.0) < 1e-10);
    }
  }
  const auto h3 = geom(2, 0, 0, 0);
  for (int i = 0; i < 20; ++i) {
    const cplx l = random_lambda(rng, -3.0, 3.0, 5.0);
    CHECK(std::abs(c_function(h3, l) + 1.0) < 1e-12);
  }
}

TEST_CASE("c-function rejects Gamma poles") {
  const auto g = geom(0, 8, 0, 0);
  // Gamma(-l)/Gamma(l) -> -1 at 0: removable.
  CHECK(std::abs(c_function(g, 0.0) + 1.0) < 1e-12);
  CHECK_THROWS_AS(c_function(g, 2.0), PoleError);
}

TEST_CASE("H3 closed forms") {
  const auto g = geom(2, 0, 0, 0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ut(0.1, 10.0);
  for (int i = 0; i < 50; ++i) {
    const cplx l = random_lambda(rng, -3.0, 3.0, 4.0);
    const double t = ut(rng);
    const cplx expected = std::sinh(l * t) / std::sinh(t);
    CHECK(rel(eisenstein_scalar(g, l, t), expected) < 1e-10);
    CHECK(rel(eisenstein_hypergeometric(g, l, t), expected) < 1e-9);
    if (t >= 0.5) {
      CHECK(rel(hc_series_phi(g, l, t), std::exp(l * t) / (2.0 * std::sinh(t))) < 1e-12);
    }
  }
  // Gamma_{2j} = 1 for H3.
  const auto gm = gamma_coefficients(g, cplx(0.3, 2.0), 40);
  for (int n = 0; n < 40; ++n) CHECK(std::abs(gm[std::size_t(n)] - (n % 2 ? 0.0 : 1.0)) < 1e-13);
}

TEST_CASE("eisenstein at t = 0 and with a boundary vector") {
  const auto g = geom(0, 8, 0, 0, 2);
  const cplx l(0.4, 1.3);
  CHECK(rel(eisenstein_scalar(g, l, 0.0), eisenstein_prefactor(g, l)) < 1e-14);
  const WVector eta{cplx(2.0, 0.0), cplx(0.0, -1.0)};
  const WVector v = eisenstein(g, l, eta, 1.7);
  const cplx e = eisenstein_scalar(g, l, 1.7);
  CHECK(rel(v[0], 2.0 * e) < 1e-14);
  CHECK(rel(v[1], cplx(0.0, -1.0) * e) < 1e-14);
  CHECK_THROWS_AS(eisenstein(g, l, WVector{1.0}, 1.0), DomainError);
}

TEST_CASE("coefficient recursion matches the direct O(M^2) form") {
  std::mt19937_64 rng(17);
  for (const auto& m : std::vector<MultiplicityDatum>{{2, 0, 0, 0, 1}, {0, 8, 0, 0, 2}, {2, 3, 0, 0, 1},
                                                      {2, 0, 1, 0, 1}, {3, 3, 2, 1, 1}, {1, 1, 0, 4, 1}}) {
    const SpaceGeometry g(m);
    for (int i = 0; i < 5; ++i) {
      const cplx l = random_lambda(rng, -2.5, 2.5, 3.0);
      const auto fast = gamma_coefficients(g, l, 120);
      const auto slow = naive_gamma(m, l, 120);
      for (int n = 0; n < 120; ++n) {
        CHECK(std::abs(fast[std::size_t(n)] - slow[std::size_t(n)]) <=
              1e-10 * std::max(1.0, std::abs(slow[std::size_t(n)])));
      }
    }
  }
}

TEST_CASE("coefficient structure") {
  const auto g = geom(0, 8, 0, 0);
  const auto gm = gamma_coefficients(g, cplx(0.2, 0.7), 30);
  CHECK(gm[0] == cplx(1.0));
  for (int n = 1; n < 30; n += 2) CHECK(gm[std::size_t(n)] == cplx(0.0));
  CHECK_THROWS_AS(gamma_coefficients(g, 1.5, 10), PoleError);
  CHECK_NOTHROW(gamma_coefficients(g, 1.5, 3));
  // Poles only at half-integers <= m/2: approaching lambda = 2 from nearby
  // blows up Gamma_4 but leaves Gamma_2 bounded.
  const auto near = gamma_coefficients(g, 2.0 + 1e-6, 3);
  CHECK(std::abs(near[2]) < 1e3);
  HCSeries s(g, 2.0 + 1e-6);
  CHECK(std::abs(s.coefficient(4)) > 1e4);
}

TEST_CASE("series agrees with the hypergeometric form") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ut(1.0, 8.0);
  for (const auto& m : kPresets) {
    const SpaceGeometry g(m);
    for (int i = 0; i < 30; ++i) {
      const cplx l = random_lambda(rng, -3.0, 3.0, 6.0);
      const double t = ut(rng);
      CHECK(rel(hc_series_phi(g, l, t), phi0(g, l, t)) < 1e-8);
    }
  }
}

TEST_CASE("E° decomposes into Phi0 terms") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> ut(0.05, 6.0);
  for (const auto& m : kPresets) {
    const SpaceGeometry g(m);
    for (int i = 0; i < 30; ++i) {
      cplx l = random_lambda(rng, -2.5, 2.5, 5.0);
      if (std::abs(l.real() - std::round(l.real())) < 0.05 && std::abs(l.imag()) < 0.05) continue;
      const double t = ut(rng);
      const cplx expected = phi0(g, l, t) + c_function(g, l) * phi0(g, -l, t);
      CHECK(rel(eisenstein_hypergeometric(g, l, t), expected) < 1e-8);
      CHECK(rel(eisenstein_scalar(g, l, t), expected) < 1e-8);
    }
  }
}

TEST_CASE("asymptotics") {
  for (const auto& m : kPresets) {
    const SpaceGeometry g(m);
    const cplx l(0.8, 1.1);
    for (double t : {10.0, 15.0}) {
      const cplx e = std::exp((g.rho() - l) * t) * eisenstein_scalar(g, l, t);
      CHECK(std::abs(e - 1.0) < 1e-4);
      CHECK(std::abs(std::exp((g.rho() - l) * t) * phi0(g, l, t) - 1.0) < 1e-4);
    }
  }
}

TEST_CASE("phi0 rejects parameter poles") {
  const auto g = geom(0, 8, 0, 0);
  CHECK_THROWS_AS(phi0(g, 1.0, 1.0), PoleError);
  CHECK_THROWS_AS(phi0(g, 3.0, 1.0), PoleError);
  CHECK_THROWS_AS(hc_series_phi(g, 0.5, 0.2), DomainError);
}

TEST_CASE("discrete functions") {
  const auto g = geom(0, 8, 0, 0, 2);
  const double rho = g.rho();
  for (double t : {0.2, 1.0, 3.0}) {
    CHECK(phi0_discrete(g, 0, t) == doctest::Approx(std::pow(2.0 * std::cosh(t), -3.0 - rho)).epsilon(1e-14));
  }
  for (int k = 0; k < 2; ++k) {
    const double lk = 3.0 - 2.0 * k;
    for (double t : {0.1, 0.7, 2.0, 6.0}) {
      CHECK(rel(phi0(g, -lk, t), phi0_discrete(g, k, t)) < 1e-12);
    }
    // log|Phi0| / t slope on [10, 20].
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (double t = 10.0; t <= 20.0; t += 0.5, ++n) {
      const double y = std::log(std::abs(phi0_discrete(g, k, t)));
      sx += t, sy += y, sxx += t * t, sxy += t * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(std::abs(slope + lk + rho) < 1e-3);
  }
  CHECK_THROWS_AS(phi0_discrete(g, 2, 1.0), DomainError);
}

TEST_CASE("jacobi function") {
  CHECK(jacobi_function(0.5, 1.0, cplx(0.3, 2.0), 0.0) == cplx(1.0));
  const cplx l(0.3, 2.0);
  CHECK(rel(jacobi_function(0.5, 1.0, l, 1.3), jacobi_function(0.5, 1.0, -l, 1.3)) < 1e-12);
  CHECK_THROWS_AS(jacobi_function(-2.0, 0.0, l, 1.0), DomainError);
  for (const auto& m : kPresets) {
    const SpaceGeometry g(m);
    for (double t : {0.3, 1.0, 2.5}) {
      const cplx via_jacobi = eisenstein_prefactor(g, l) * jacobi_function(g.alpha(), g.beta(), l, t);
      CHECK(rel(eisenstein_hypergeometric(g, l, t), via_jacobi) < 1e-12);
    }
  }
}

TEST_CASE("radial Laplacian eigen-equations") {
  auto fn = [](auto f) { return RadialFunction::uniform(1, f); };
  for (const auto& m : kPresets) {
    const SpaceGeometry g(m);
    CHECK(std::abs(radial_laplacian_apply(g, fn([](double) { return cplx(2.0); }), 0, 1.0)) < 1e-9);
    for (cplx l : {cplx(0.3, 1.7), cplx(1.2, -0.4), cplx(-0.7, 3.0)}) {
      const cplx ev = l * l - g.rho() * g.rho();
      for (double t : {0.5, 1.5, 3.0, 5.0}) {
        auto check = [&](const RadialFunction& f) {
          const cplx lhs = radial_laplacian_apply(g, f, 0, t);
          const double scale = std::abs(f.derivative(0, t, 2)) + std::abs(g.laplacian_drift(t) * f.derivative(0, t, 1)) +
                             std::abs(ev * f.value(0, t));
          CHECK(std::abs(lhs - ev * f.value(0, t)) < 1e-6 * scale);
          const cplx div = radial_laplacian_divergence(g, f, 0, t);
          CHECK(std::abs(div - lhs) < 1e-8 * scale);
        };
        check(fn([&g, l](double s) { return phi0(g, l, s); }));
        check(fn([&g, l](double s) { return hc_series_phi(g, l, s, 1e-16, 0.4); }));
        check(fn([&g, l](double s) { return eisenstein_scalar(g, l, s); }));
      }
    }
  }
  const auto g = geom(0, 8, 0, 0, 2);
  for (int k = 0; k < 2; ++k) {
    const double lk = 3.0 - 2.0 * k;
    const auto f = fn([&g, k](double s) { return cplx(phi0_discrete(g, k, s)); });
    for (double t : {0.5, 2.0, 5.0}) {
      const cplx expected = (lk * lk - 16.0) * f.value(0, t);
      CHECK(rel(radial_laplacian_apply(g, f, 0, t), expected) < 1e-6);
    }
  }
  CHECK_THROWS_AS(radial_laplacian_apply(g, fn([](double s) { return cplx(s); }), 0, 1e-3), DomainError);
}

TEST_CASE("m2m > 0: series solves the radial ODE") {
  // The hypergeometric closed forms do not solve this ODE when m2m > 0, but
  // the series is built from it.
  const auto g = geom(1, 1, 0, 2);
  CHECK_FALSE(g.closed_forms_consistent());
  const cplx l(0.6, 1.4);
  const auto f = RadialFunction::uniform(1, [&g, l](double s) { return hc_series_phi(g, l, s, 1e-16, 0.4); });
  for (double t : {0.8, 2.0, 4.0}) {
    const cplx ev = l * l - g.rho() * g.rho();
    CHECK(rel(radial_laplacian_apply(g, f, 0, t), ev * f.value(0, t)) < 1e-6);
  }
}

TEST_CASE("spherical functions object") {
  const auto g = geom(2, 3, 0, 0);
  SphericalFunctions sf(g, cplx(0.0, 40.0));
  CHECK(sf.uses_series());
  // mpmath, 40 digits.
  const std::vector<std::pair<double, cplx>> ref = {
      {0.01, cplx(0.1290648551055830884, 13.767590136683222486)},
      {0.2, cplx(0.01580182907830467345, 1.6856107418402133617)},
      {1.0, cplx(0.001089171000887684238, 0.11618391324823181718)},
      {3.0, cplx(6.091545971110048637e-06, 0.00064979663255655145)}};
  for (const auto& [t, v] : ref) {
    CHECK(rel(sf.eisenstein(t), v) < 1e-10);
    CHECK(rel(sf.phi(t), phi0(g, cplx(0.0, 40.0), t)) < 1e-8);
  }
  SphericalFunctions half(g, 1.5);
  CHECK_FALSE(half.uses_series());
}

TEST_CASE("no prefactor poles on the imaginary axis") {
  // rho - 1 - m in {0, 2}: the numerator pole at 0 is cancelled by Gamma(lambda).
  for (const auto& g : {geom(0, 2, 0, 0), geom(0, 6, 0, 0)}) {
    const cplx at0 = eisenstein_prefactor(g, 0.0);
    CHECK(std::isfinite(std::abs(at0)));
    CHECK(rel(eisenstein_prefactor(g, cplx(0.0, 1e-5)), at0) < 1e-4);
  }
  for (const auto& m : kPresets) {
    const SpaceGeometry g(m);
    double mx = 0.0;
    for (double nu = -50.0; nu <= 50.0; nu += 0.25) mx = std::max(mx, std::abs(eisenstein_prefactor(g, cplx(0.0, nu))));
    CHECK(std::isfinite(mx));
  }
}

TEST_CASE("large |lambda| near t = 0") {
  // Gamma factors of the 2F1 connection formulas over- and underflow separately here.
  const auto g = geom(0, 8, 0, 0, 2);
  for (double nu : {500.0, 1000.0}) {
    const cplx l(-2.0, nu);
    SphericalFunctions sf(g, l);
    for (double t : {0.001, 0.005}) CHECK(std::isfinite(std::abs(sf.phi(t))));
    // Both routes are accurate just above the switch at t = 8 / |lambda|.
    const double t = 12.0 / nu;
    HCSeries s(g, l);
    CHECK(rel(phi0(g, l, t), s.phi(t)) < 1e-7);
    CHECK(rel(sf.phi(t), s.phi(t)) < 1e-12);
  }
}
