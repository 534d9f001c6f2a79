#pragma once

#include "ladderops/numeric.hpp"
#include "ladderops/weights.hpp"

#include <utility>
#include <vector>

namespace lop {

// Gauss rule on a segment of the support. The algebraic factors at the segment
// ends are absorbed into the rule; `weights` already carry the remaining smooth
// part of w, so integrate() only multiplies by f and the per-segment constant.
struct QuadRule {
  std::vector<Real> nodes;
  std::vector<Real> weights;
  Real lo;
  Real hi;
  double left_exponent = 0;
  double right_exponent = 0;
  Real multiplier{1};  // step factor on this segment, times the sign of any shift divisor
};

using Rules = std::vector<QuadRule>;

struct QuadOptions {
  unsigned nodes = 200;    // per segment
  double truncation = 0;   // Laguerre X_max; 0 picks it from degree_hint
  int degree_hint = 64;    // largest polynomial degree the rules must resolve in the tail
  std::vector<double> extra_breakpoints;  // interior points to split at (e.g. near-support z)
};

// Integrate against w(x)/d(x) instead of w(x), d being the distance to the
// flagged points: x (Laguerre, shifted Jacobi left), 1+x (Jacobi left),
// 1-x (right end), x-t (FH point). The corresponding absorbed exponent drops by
// one and must stay above -1.
struct MeasureShift {
  bool left = false;
  bool right = false;
  bool fh = false;
  bool any() const { return left || right || fh; }
};

Rules build_rules(const WeightSpec& w, const QuadOptions& opts, MeasureShift shift = {});

// Truncation point chosen automatically for a Laguerre-type weight.
double laguerre_truncation(const WeightSpec& w, int degree_hint, unsigned bits);

struct GaussRule {
  std::vector<Real> x;
  std::vector<Real> w;
};

// Gauss rule for (1-u)^a (1+u)^b on [-1,1] via Golub-Welsch, polished by Newton.
GaussRule gauss_jacobi(unsigned m, const Real& a, const Real& b);

std::size_t node_count(const Rules& rules);

template <class F>
auto integrate(const Rules& rules, F&& f) {
  using T = decltype(f(std::declval<const Real&>()));
  T total(Real(0));
  for (const auto& r : rules) {
    T seg(Real(0));
    for (std::size_t i = 0; i < r.nodes.size(); ++i) seg += f(r.nodes[i]) * r.weights[i];
    total += seg * r.multiplier;
  }
  return total;
}

}  // namespace lop
