#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>

#include "rank1sft/errors.hpp"
#include "rank1sft/numerics.hpp"

namespace rank1sft::numerics {

namespace {

// Kronrod 15-point nodes (nonnegative half) and weights; Gauss 7-point weights
// on the odd-indexed Kronrod nodes. Values from QUADPACK (qk15).
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  cplx value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const RealIntegrand& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const cplx fc = f(c);
  cplx kron = fc * kWgk[7];
  cplx gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const cplx s = f(c - dx) + f(c + dx);
    kron += kWgk[j] * s;
    if (j % 2 == 1) gauss += kWg[j / 2] * s;
  }
  kron *= h;
  gauss *= h;
  return {a, b, kron, std::abs(kron - gauss)};
}

QuadratureResult adaptive(const RealIntegrand& f, const std::vector<double>& breaks,
                          const QuadratureSpec& spec) {
  std::priority_queue<Segment> queue;
  cplx total = 0.0;
  double err = 0.0;
  long evals = 0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    Segment s = gk15(f, breaks[i], breaks[i + 1]);
    evals += 15;
    total += s.value;
    err += s.error;
    queue.push(s);
  }
  int splits = 0;
  while (err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
    if (splits >= spec.refinement_limit) {
      throw QuadratureError("adaptive quadrature: refinement limit reached", total, err);
    }
    Segment worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw QuadratureError("adaptive quadrature: interval collapsed", total, err);
    }
    Segment left = gk15(f, worst.a, mid);
    Segment right = gk15(f, mid, worst.b);
    evals += 30;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++splits;
  }
  // Resum to shed the drift of incremental updates.
  cplx sum = 0.0;
  double esum = 0.0;
  while (!queue.empty()) {
    sum += queue.top().value;
    esum += queue.top().error;
    queue.pop();
  }
  return {sum, esum, evals};
}

GaussRule make_gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
  return it->second;
}

void CompositeRule::append_panel(double a, double b, const GaussRule& rule) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    nodes.push_back(c + h * rule.nodes[i]);
    weights.push_back(h * rule.weights[i]);
  }
}

CompositeRule composite_gauss(const std::vector<double>& breakpoints, int order) {
  const GaussRule& rule = gauss_legendre(order);
  CompositeRule out;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
    out.append_panel(breakpoints[i], breakpoints[i + 1], rule);
  return out;
}

CompositeRule composite_gauss_uniform(double a, double b, int panels, int order) {
  std::vector<double> br(panels + 1);
  for (int i = 0; i <= panels; ++i) br[i] = a + (b - a) * i / panels;
  br.back() = b;
  return composite_gauss(br, order);
}

QuadratureResult integrate(const RealIntegrand& f, double a, double b, const QuadratureSpec& spec) {
  if (a == b) return {0.0, 0.0, 0};
  return adaptive(f, {a, b}, spec);
}

QuadratureResult integrate_partition(const RealIntegrand& f, const std::vector<double>& breaks,
                                     const QuadratureSpec& spec) {
  if (breaks.size() < 2) throw DomainError("integrate_partition: need at least two breakpoints");
  return adaptive(f, breaks, spec);
}

QuadratureResult integrate_halfline(const RealIntegrand& f, const QuadratureSpec& spec,
                                    double decay_rate) {
  if (!(decay_rate > 0.0)) throw DomainError("integrate_halfline: decay rate must be positive");
  auto partition = [](double T) {
    // Graded toward t = 0, unit panels further out.
    std::vector<double> breaks = {0.0};
    for (double x = 1.0 / 64.0; x < std::min(1.0, T); x *= 2.0) breaks.push_back(x);
    for (double x = 1.0; x < T; x += 1.0) breaks.push_back(x);
    breaks.push_back(T);
    return breaks;
  };
  double T = spec.truncation;
  QuadratureResult res = adaptive(f, partition(T), spec);
  double tail = std::abs(f(T)) / decay_rate;
  // The cutoff grows until the tail bound is below a tenth of the target.
  while (tail > std::max(spec.abs_tol, spec.rel_tol * std::abs(res.value)) / 10.0 && T < 1e4) {
    const double next = T * 1.5;
    const double tail_next = std::abs(f(next)) / decay_rate;
    if (!std::isfinite(tail_next)) break;
    T = next;
    tail = tail_next;
    res = adaptive(f, partition(T), spec);
  }
  res.error += tail;
  return res;
}

QuadratureResult integrate_vertical_line(const ComplexIntegrand& h, double x0,
                                         const QuadratureSpec& spec) {
  if (std::isinf(spec.truncation)) {
    // nu = s / (1 - s^2) maps (-1, 1) onto the real line.
    auto g = [&](double s) -> cplx {
      const double d = 1.0 - s * s;
      if (d <= 0.0) return 0.0;
      const double nu = s / d;
      const double jac = (1.0 + s * s) / (d * d);
      return h(cplx(x0, nu)) * jac;
    };
    std::vector<double> breaks;
    for (int i = 0; i <= 16; ++i) breaks.push_back(-1.0 + i / 8.0);
    return adaptive(g, breaks, spec);
  }
  const double L = spec.truncation;
  auto g = [&](double nu) -> cplx { return h(cplx(x0, nu)); };
  const int panels = std::max(2, int(std::ceil(2.0 * L / 4.0)));
  std::vector<double> breaks(panels + 1);
  for (int i = 0; i <= panels; ++i) breaks[i] = -L + 2.0 * L * i / panels;
  return adaptive(g, breaks, spec);
}

}  // namespace rank1sft::numerics
