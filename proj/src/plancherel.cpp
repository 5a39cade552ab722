#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "rank1sft/errors.hpp"
#include "rank1sft/transform.hpp"

namespace rank1sft::transform {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

std::vector<int> all_indices(const SpaceGeometry& g) {
  std::vector<int> ks;
  for (std::size_t k = 0; k < spaces::pole_set(g).size(); ++k) ks.push_back(int(k));
  return ks;
}

// (1/i) times the E°-form synthesis of F f on iR.
RadialFunction continuous_part(const SpaceGeometry& g, const RadialFunction& f, const FixedRuleSpec& spec) {
  auto plan = std::make_shared<const ForwardPlan>(g, f, spec.cutoff, spec);
  SpectralFunction phi(f.orbits(), [plan](cplx l) { return (*plan)(l); });
  phi.with_real_structure(f.real_valued());
  const LineSynthesis synth(g, phi, 0.0, LineSynthesis::Kernel::eisenstein, spec);
  return synth.as_radial().scaled(cplx(0.0, -1.0)).with_real_values(f.real_valued());
}

std::vector<WVector> residues_of(const SpaceGeometry& g, const RadialFunction& f) {
  std::vector<WVector> out;
  for (int k : all_indices(g)) out.push_back(residue_at(g, f, k).value);
  return out;
}

}  // namespace

Inversion invert_with(const SpaceGeometry& g, const RadialFunction& f, double r, double kappa,
                      const FixedRuleSpec& spec) {
  spaces::split_pole_set(spaces::pole_set(g), r);  // rejects singular r
  Inversion inv;
  inv.kappa = kappa > 0.0 ? kappa : 1.0;
  inv.continuous = continuous_part(g, f, spec);
  const auto ks = all_indices(g);
  std::vector<WVector> coeff;  // uncalibrated: -4 pi Res_k
  if (f.support_bound()) {
    inv.residues = residues_of(g, f);
    for (const auto& res : inv.residues) coeff.push_back(-kFourPi * res);
  } else {
    // kappa (-4 pi Res_k) equals the projection coefficient.
    inv.projection_path = true;
    for (const auto& a : discrete_coefficients(g, f)) {
      inv.residues.push_back((-1.0 / (kFourPi * inv.kappa)) * a);
      coeff.push_back((1.0 / inv.kappa) * a);
    }
  }
  inv.discrete = discrete_combination(g, ks, coeff);
  inv.reconstruction = (inv.continuous + inv.discrete).scaled(inv.kappa);
  return inv;
}

Inversion invert_detailed(const SpaceGeometry& g, const RadialFunction& f, double r, const FixedRuleSpec& spec) {
  return invert_with(g, f, r, calibrate_plancherel(g, spec), spec);
}

RadialFunction invert(const SpaceGeometry& g, const RadialFunction& f, double r, const FixedRuleSpec& spec) {
  return invert_detailed(g, f, r, spec).reconstruction;
}

Decomposition decompose_HB(const SpaceGeometry& g, const RadialFunction& f, double r, const FixedRuleSpec& spec) {
  const auto split = spaces::split_pole_set(spaces::pole_set(g), r);
  Decomposition d;
  d.indices = split.outside_index;
  if (!d.indices.empty()) {
    if (f.support_bound()) {
      const double kappa = calibrate_plancherel(g, spec);
      for (int k : d.indices) d.coefficients.push_back((-kFourPi * kappa) * residue_at(g, f, k).value);
    } else {
      const auto a = discrete_coefficients(g, f);
      for (int k : d.indices) d.coefficients.push_back(a[std::size_t(k)]);
    }
  }
  d.f_B = discrete_combination(g, d.indices, d.coefficients);
  d.f_H = f - d.f_B;
  return d;
}

Calibration calibrate_plancherel_with(const SpaceGeometry& g, const RadialFunction& f, const FixedRuleSpec& spec) {
  if (!f.support_bound()) throw DomainError("calibrate_plancherel: reference function needs compact support");
  const Inversion inv = invert_with(g, f, 2.0, 1.0, spec);
  Calibration c;
  for (int i = 0; i <= 50; ++i) c.samples.push_back(0.5 + 2.5 * i / 50.0);
  double fu = 0.0, uu = 0.0, ff = 0.0;
  std::vector<std::pair<cplx, cplx>> pairs;
  for (double t : c.samples) {
    const WVector u = inv.continuous(t) + inv.discrete(t);
    const WVector v = f(t);
    for (int w = 0; w < f.orbits(); ++w) {
      fu += (std::conj(u[w]) * v[w]).real();
      uu += std::norm(u[w]);
      ff += std::norm(v[w]);
      pairs.emplace_back(u[w], v[w]);
    }
  }
  if (!(uu > 0.0) || !(ff > 0.0)) throw ConvergenceError("calibrate_plancherel: degenerate reference samples");
  c.kappa = fu / uu;
  double res = 0.0;
  for (const auto& [u, v] : pairs) res += std::norm(v - c.kappa * u);
  c.residual = std::sqrt(res / ff);
  if (!(c.kappa > 0.0) || c.residual > 1e-3)
    throw ConvergenceError("calibrate_plancherel: ill-conditioned fit (kappa = " + std::to_string(c.kappa) +
                           ", relative misfit = " + std::to_string(c.residual) + ")");
  return c;
}

double calibrate_plancherel(const SpaceGeometry& g, const FixedRuleSpec& spec) {
  using Key = std::tuple<int, int, int, int, int, double, double, int, double>;
  static std::mutex mutex;
  static std::map<Key, double> cache;
  const auto& m = g.multiplicities();
  const Key key{m.m1p, m.m1m, m.m2p, m.m2m, m.orbits, spec.cutoff, spec.nu_panel, spec.order, spec.t_panel};
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const double kappa = calibrate_plancherel_with(g, bump(g.orbits(), 2.0, 1.0), spec).kappa;
  std::lock_guard<std::mutex> lock(mutex);
  return cache.emplace(key, kappa).first->second;
}

}  // namespace rank1sft::transform
