#pragma once

#include <string>
#include <vector>

#include "rank1sft/spaces.hpp"

namespace rank1sft::bounds {

using spaces::SpaceGeometry;

// Empirical growth bounds. Each suite fits the smallest constant that makes
// the bound hold on a training grid, then checks a disjoint validation grid
// against constant * margin.
struct BoundReport {
  std::string name;
  double constant = 0.0;  // fitted M, M_delta or A
  double exponent = 0.0;  // fitted chi (coefficient suite only)
  std::size_t train_points = 0;
  std::size_t validation_points = 0;
  double worst_ratio = 0.0;  // max over validation of value / (constant * bound shape)
  std::size_t violations = 0;
  double margin = 1.05;
  bool pass = false;
  std::string detail;
};

struct BoundOptions {
  double R = 3.0;
  double margin = 1.05;
  double nu_max = 20.0;
  int train_m_max = 200;     // coefficient suite: Gamma_m for m <= this (even m)
  int validate_m_max = 400;
  double delta = 0.5;        // series suite: t >= delta
  double t_max = 15.0;
  int t_points = 800;        // derivative suite; resolves E° oscillation up to |Im lambda| = nu_max
};

// sup_lambda |q_R Gamma_m| / (1+|lambda|)^{deg q_R} <= M (1+m)^chi; chi from a
// log-log fit over m in [10, train_m_max], M the smallest constant on the training data.
// lambda ranges over Re lambda in [-4, R/2]: q_R only cancels the poles of
// Gamma_m up to R/2.
BoundReport coefficient_bound(const SpaceGeometry& g, const BoundOptions& o = {});

// |q_R Phi_lambda(t)| <= M_delta (1+|lambda|)^{deg q_R} e^{(|Re lambda| - rho) t}, t >= delta,
// on the same lambda range.
BoundReport series_bound(const SpaceGeometry& g, const BoundOptions& o = {});

// |d^m/dt^m p_R E°(lambda, 1)(t)| <= A (1+t)(1+|lambda|)^{deg p_R + m} e^{(|Re lambda| - rho) t}
// for Re lambda in [-R, R], t in [delta, t_max]; validation on a finer grid.
BoundReport derivative_bound(const SpaceGeometry& g, int m, const BoundOptions& o = {});

std::vector<BoundReport> run_all(const SpaceGeometry& g, const BoundOptions& o = {});

}  // namespace rank1sft::bounds
