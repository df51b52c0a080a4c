#pragma once
// Numerical laboratory for holomorphic maps H^k -> H that fix the diagonal
// (f(l,...,l) = l). The library ships families whose membership is provable
// by hand - convex-weight linear maps, weighted geometric means, Mobius
// conjugates of those, and their translates under the flow
// f_t(l_1,...,l_k) = f(l_1 - t, ..., l_k - t) + t - together with the
// instruments used to watch an orbit approach its linear part: a compact
// evaluation grid, a compact-open pseudometric, and a density-of-approach
// estimator over a time window.

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "polyplane/errors.hpp"

namespace polyplane {

// A point of H^k: one complex coordinate per cylinder, all with Im > 0.
using FlowPoint = std::vector<std::complex<double>>;

// Real Mobius transformation z -> (a z + b) / (c z + d); preserves the upper
// half-plane when a d - b c > 0.
struct MobiusParams {
  double a = 1, b = 0, c = 0, d = 1;
};

std::complex<double> mobius_apply(const MobiusParams& m, std::complex<double> z);
MobiusParams mobius_inverse(const MobiusParams& m);

// Immutable expression tree for a diagonal-fixing map. Build through the
// factories below; they validate and normalize the ingredients.
struct DiagonalFixingMap {
  enum class Kind { Linear, GeometricMean, MobiusConjugate, FlowShift };
  Kind kind = Kind::Linear;
  // Linear / GeometricMean: positive weights, normalized to sum 1.
  std::vector<double> weights;
  // MobiusConjugate / FlowShift wrap another map.
  std::shared_ptr<const DiagonalFixingMap> inner;
  MobiusParams mobius;  // MobiusConjugate only
  double shift = 0;     // FlowShift only
};

// l -> sum_j a_j l_j. Weights must be positive; they are scaled to sum 1.
// Errors: DomainViolation.
DiagonalFixingMap linear_map(std::vector<double> weights);

// l -> prod_j l_j^{a_j} with principal logarithms; the weighted argument
// stays in (0, pi), so the value stays in H. Errors: DomainViolation.
DiagonalFixingMap geometric_mean_map(std::vector<double> weights);

// l -> M(inner(M^{-1} l_1, ..., M^{-1} l_k)) for a real Mobius map M with
// positive determinant. Fixes the diagonal because inner does.
// Errors: DomainViolation.
DiagonalFixingMap mobius_conjugate_map(DiagonalFixingMap inner,
                                       const MobiusParams& m);

// Number of upper-half-plane arguments the map consumes.
int arity(const DiagonalFixingMap& f);

// Evaluates f at a point of H^k. Errors: DomainViolation when the arity is
// wrong or a coordinate leaves the open upper half-plane.
std::complex<double> eval(const DiagonalFixingMap& f, const FlowPoint& lambda);

// Translation flow f_t(l) = f(l - t(1,...,1)) + t, at the representation
// level: shifts merge additively, t = 0 is the identity, and linear maps are
// exact fixed points.
DiagonalFixingMap flow(const DiagonalFixingMap& f, double t);

// Partial derivatives at the diagonal point (i,...,i), by Richardson-
// extrapolated central differences with base step 1e-5. For the built-in
// families these are the stored weights; they always sum to 1 because the
// diagonal condition forces d/dl f(l,...,l) = 1.
std::vector<double> linear_part(const DiagonalFixingMap& f);

// Finitely many H^k nodes with positive weights, all inside the compact
// polydisk { |Re l_j| <= R, 1/R <= Im l_j <= R }; enough to pin down the
// compact-open topology on the families we evaluate.
struct CompactGrid {
  std::vector<FlowPoint> nodes;
  std::vector<double> weights;
};

// The default grid: per axis the four corners of the polydisk rectangle plus
// the center i, so 5^arity nodes, uniform weight 1. Errors: DomainViolation
// when arity < 1 or radius <= 1.
CompactGrid default_grid(int arity, double radius = 2.0);

// Weighted sup over grid nodes of the Poincare distance between values; a
// pseudometric realizing the compact-open topology on the grid's polydisk.
double grid_distance(const DiagonalFixingMap& f, const DiagonalFixingMap& g,
                     const CompactGrid& grid);

// One row of a flow sweep: the time and the grid distance from flow(f, t) to
// the linear part of f.
struct DensitySample {
  double t = 0;
  double distance = 0;
};

// Samples t = -r, -r + t_step, ..., r. Errors: DomainViolation on
// non-positive r or t_step.
std::vector<DensitySample> density_profile(const DiagonalFixingMap& f,
                                           double r, double t_step,
                                           const CompactGrid& grid);

// Fraction of sampled t in [-r, r] whose flow image lies within eps of the
// linear part, in grid distance. Linear maps give exactly 1.0.
// Errors: DomainViolation on non-positive eps, r, or t_step.
double density_estimate(const DiagonalFixingMap& f, double eps, double r,
                        double t_step, const CompactGrid& grid);

// Draws sample_count random pairs x, y in H^k and returns the largest value
// of d_H(f(x), f(y)) - max_j d_H(x_j, y_j); non-positive up to rounding for
// every holomorphic f, since the Kobayashi metric of the polydisk is the max
// of the factor metrics.
double schwarz_pick_check(const DiagonalFixingMap& f, int sample_count,
                          std::uint64_t seed = 2026u);

}  // namespace polyplane
