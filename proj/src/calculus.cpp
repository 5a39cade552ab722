#include <array>
#include <cmath>
#include <numbers>

#include "rank1sft/errors.hpp"
#include "rank1sft/numerics.hpp"

namespace rank1sft::numerics {

namespace {

cplx trapezoid_circle(const ComplexIntegrand& h, cplx center, double radius, int n) {
  cplx sum = 0.0;
  for (int j = 0; j < n; ++j) {
    const cplx e = std::polar(1.0, 2.0 * std::numbers::pi * j / n);
    sum += h(center + radius * e) * e;
  }
  return sum * radius / double(n);
}

struct Stencil {
  int radius;
  std::array<double, 7> coef;  // offsets -3..3
  double scale;                // divide by scale * h^order
};

const Stencil& stencil(int order) {
  static const std::array<Stencil, 4> table = {{
      {2, {0, 1, -8, 0, 8, -1, 0}, 12.0},
      {2, {0, -1, 16, -30, 16, -1, 0}, 12.0},
      {3, {1, -8, 13, 0, -13, 8, -1}, 8.0},
      {3, {-1, 12, -39, 56, -39, 12, -1}, 6.0},
  }};
  if (order < 1 || order > 4) throw DomainError("fd_derivative: order must be 1..4");
  return table[order - 1];
}

template <typename T, typename F>
T apply_stencil(const F& g, double t, int order, double h) {
  const Stencil& s = stencil(order);
  T acc{};
  for (int k = -3; k <= 3; ++k) {
    const double c = s.coef[k + 3];
    if (c != 0.0) acc += c * g(t + k * h);
  }
  return acc / (s.scale * std::pow(h, order));
}

}  // namespace

cplx contour_residue(const ComplexIntegrand& h, const ContourSpec& contour, double tol) {
  if (contour.node_count < 16) throw DomainError("contour_residue: node_count must be >= 16");
  if (!(contour.radius > 0.0)) throw DomainError("contour_residue: radius must be positive");
  const cplx coarse = trapezoid_circle(h, contour.center, contour.radius, contour.node_count);
  const cplx fine = trapezoid_circle(h, contour.center, contour.radius, 2 * contour.node_count);
  // The trapezoid value already carries the 1/(2 pi i) factor: d lambda = i r e dtheta.
  if (std::abs(fine - coarse) > tol * std::max(1.0, std::abs(fine))) {
    throw ConvergenceError("contour_residue: node doubling changed the value by " +
                           std::to_string(std::abs(fine - coarse)));
  }
  return fine;
}

std::vector<cplx> cauchy_derivatives(const ComplexIntegrand& h, cplx center, double radius,
                                     int max_order, int node_count) {
  std::vector<cplx> samples(node_count);
  std::vector<cplx> dirs(node_count);
  for (int j = 0; j < node_count; ++j) {
    dirs[j] = std::polar(1.0, 2.0 * std::numbers::pi * j / node_count);
    samples[j] = h(center + radius * dirs[j]);
  }
  std::vector<cplx> out(max_order + 1);
  double factorial = 1.0;
  for (int q = 0; q <= max_order; ++q) {
    if (q > 0) factorial *= q;
    cplx sum = 0.0;
    for (int j = 0; j < node_count; ++j) sum += samples[j] * std::pow(std::conj(dirs[j]), q);
    out[q] = sum * factorial / (double(node_count) * std::pow(radius, q));
  }
  return out;
}

double fd_derivative(const std::function<double(double)>& g, double t, int order, double h) {
  return apply_stencil<double>(g, t, order, h);
}

cplx fd_derivative(const std::function<cplx(double)>& g, double t, int order, double h) {
  return apply_stencil<cplx>(g, t, order, h);
}

int fd_stencil_radius(int order) { return stencil(order).radius; }

}  // namespace rank1sft::numerics
