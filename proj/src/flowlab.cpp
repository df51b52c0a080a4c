#include "polyplane/flowlab.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <utility>

#include "polyplane/halfplane.hpp"

namespace polyplane {

namespace {

using Kind = DiagonalFixingMap::Kind;

std::vector<double> normalized_weights(std::vector<double> w,
                                       const char* what) {
  if (w.empty())
    fail("DomainViolation", std::string(what) + " needs at least one weight");
  double total = 0;
  for (double a : w) {
    if (!std::isfinite(a) || a <= 0)
      fail("DomainViolation",
           std::string(what) + " weights must be positive and finite");
    total += a;
  }
  for (double& a : w) a /= total;
  return w;
}

std::complex<double> eval_impl(const DiagonalFixingMap& f, const FlowPoint& x) {
  switch (f.kind) {
    case Kind::Linear: {
      std::complex<double> s = 0;
      for (std::size_t j = 0; j < x.size(); ++j) s += f.weights[j] * x[j];
      return s;
    }
    case Kind::GeometricMean: {
      // Weighted principal logarithms: each argument lies in (0, pi), so the
      // weighted sum does too and the exponential lands back in H.
      std::complex<double> s = 0;
      for (std::size_t j = 0; j < x.size(); ++j)
        s += f.weights[j] * std::log(x[j]);
      return std::exp(s);
    }
    case Kind::MobiusConjugate: {
      MobiusParams inv = mobius_inverse(f.mobius);
      FlowPoint y(x.size());
      for (std::size_t j = 0; j < x.size(); ++j)
        y[j] = mobius_apply(inv, x[j]);
      return mobius_apply(f.mobius, eval_impl(*f.inner, y));
    }
    case Kind::FlowShift: {
      FlowPoint y(x.size());
      for (std::size_t j = 0; j < x.size(); ++j) y[j] = x[j] - f.shift;
      return eval_impl(*f.inner, y) + f.shift;
    }
  }
  fail("Internal", "unhandled map kind");
}

}  // namespace

std::complex<double> mobius_apply(const MobiusParams& m,
                                  std::complex<double> z) {
  return (m.a * z + m.b) / (m.c * z + m.d);
}

MobiusParams mobius_inverse(const MobiusParams& m) {
  return {m.d, -m.b, -m.c, m.a};
}

DiagonalFixingMap linear_map(std::vector<double> weights) {
  DiagonalFixingMap f;
  f.kind = Kind::Linear;
  f.weights = normalized_weights(std::move(weights), "linear_map");
  return f;
}

DiagonalFixingMap geometric_mean_map(std::vector<double> weights) {
  DiagonalFixingMap f;
  f.kind = Kind::GeometricMean;
  f.weights = normalized_weights(std::move(weights), "geometric_mean_map");
  return f;
}

DiagonalFixingMap mobius_conjugate_map(DiagonalFixingMap inner,
                                       const MobiusParams& m) {
  if (!(m.a * m.d - m.b * m.c > 0))
    fail("DomainViolation",
         "mobius_conjugate_map needs a positive-determinant Mobius map");
  DiagonalFixingMap f;
  f.kind = Kind::MobiusConjugate;
  f.inner = std::make_shared<DiagonalFixingMap>(std::move(inner));
  f.mobius = m;
  return f;
}

int arity(const DiagonalFixingMap& f) {
  const DiagonalFixingMap* node = &f;
  while (node->inner) node = node->inner.get();
  return static_cast<int>(node->weights.size());
}

std::complex<double> eval(const DiagonalFixingMap& f, const FlowPoint& lambda) {
  if (static_cast<int>(lambda.size()) != arity(f))
    fail("DomainViolation", "evaluation point has the wrong arity");
  for (const auto& z : lambda)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || z.imag() <= 0)
      fail("DomainViolation",
           "evaluation point must lie in the open upper half-plane");
  return eval_impl(f, lambda);
}

DiagonalFixingMap flow(const DiagonalFixingMap& f, double t) {
  if (t == 0) return f;
  // Convex-weight linear maps are exact fixed points of the flow.
  if (f.kind == Kind::Linear) return f;
  if (f.kind == Kind::FlowShift) {
    double merged = f.shift + t;
    if (merged == 0) return *f.inner;
    DiagonalFixingMap g = f;
    g.shift = merged;
    return g;
  }
  DiagonalFixingMap g;
  g.kind = Kind::FlowShift;
  g.inner = std::make_shared<DiagonalFixingMap>(f);
  g.shift = t;
  return g;
}

std::vector<double> linear_part(const DiagonalFixingMap& f) {
  const int k = arity(f);
  const double h = 1e-5;
  const std::complex<double> center(0, 1);
  FlowPoint base(k, center);
  std::vector<double> out(k);
  for (int j = 0; j < k; ++j) {
    auto central = [&](double step) {
      FlowPoint hi = base, lo = base;
      hi[j] += step;
      lo[j] -= step;
      return (eval_impl(f, hi) - eval_impl(f, lo)) / (2 * step);
    };
    std::complex<double> d1 = central(h);
    std::complex<double> d2 = central(h / 2);
    out[j] = ((4.0 * d2 - d1) / 3.0).real();  // Richardson extrapolation
  }
  return out;
}

CompactGrid default_grid(int arity, double radius) {
  if (arity < 1) fail("DomainViolation", "grid arity must be at least 1");
  if (!(radius > 1))
    fail("DomainViolation", "grid radius must exceed 1 (Im range is [1/R, R])");
  const std::complex<double> axis[5] = {
      {-radius, 1 / radius}, {radius, 1 / radius}, {0, 1},
      {-radius, radius},     {radius, radius}};
  CompactGrid grid;
  std::vector<int> odo(arity, 0);
  for (;;) {
    FlowPoint node(arity);
    for (int j = 0; j < arity; ++j) node[j] = axis[odo[j]];
    grid.nodes.push_back(std::move(node));
    grid.weights.push_back(1.0);
    int j = 0;
    while (j < arity && ++odo[j] == 5) odo[j++] = 0;
    if (j == arity) break;
  }
  return grid;
}

double grid_distance(const DiagonalFixingMap& f, const DiagonalFixingMap& g,
                     const CompactGrid& grid) {
  double sup = 0;
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    double d = poincare_distance(eval(f, grid.nodes[i]), eval(g, grid.nodes[i]));
    sup = std::max(sup, grid.weights[i] * d);
  }
  return sup;
}

std::vector<DensitySample> density_profile(const DiagonalFixingMap& f,
                                           double r, double t_step,
                                           const CompactGrid& grid) {
  if (!(r > 0) || !(t_step > 0))
    fail("DomainViolation", "window radius and step must be positive");
  DiagonalFixingMap target = linear_map(linear_part(f));
  long steps = static_cast<long>(std::floor(2 * r / t_step + 1e-9));
  std::vector<DensitySample> rows;
  rows.reserve(steps + 1);
  for (long i = 0; i <= steps; ++i) {
    double t = -r + i * t_step;
    rows.push_back({t, grid_distance(flow(f, t), target, grid)});
  }
  return rows;
}

double density_estimate(const DiagonalFixingMap& f, double eps, double r,
                        double t_step, const CompactGrid& grid) {
  if (!(eps > 0)) fail("DomainViolation", "eps must be positive");
  std::vector<DensitySample> rows = density_profile(f, r, t_step, grid);
  long close = 0;
  for (const DensitySample& row : rows)
    if (row.distance < eps) ++close;
  return static_cast<double>(close) / static_cast<double>(rows.size());
}

double schwarz_pick_check(const DiagonalFixingMap& f, int sample_count,
                          std::uint64_t seed) {
  const int k = arity(f);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> re(-3.0, 3.0);
  std::uniform_real_distribution<double> log_im(std::log(0.2), std::log(5.0));
  auto draw = [&] {
    FlowPoint x(k);
    for (int j = 0; j < k; ++j)
      x[j] = {re(rng), std::exp(log_im(rng))};
    return x;
  };
  double worst = -std::numeric_limits<double>::infinity();
  for (int n = 0; n < sample_count; ++n) {
    FlowPoint x = draw(), y = draw();
    double rhs = 0;
    for (int j = 0; j < k; ++j)
      rhs = std::max(rhs, poincare_distance(x[j], y[j]));
    double lhs = poincare_distance(eval_impl(f, x), eval_impl(f, y));
    worst = std::max(worst, lhs - rhs);
  }
  return sample_count > 0 ? worst : 0.0;
}

}  // namespace polyplane
