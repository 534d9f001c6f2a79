#pragma once

#include "ladderops/numeric.hpp"
#include "ladderops/quadrature.hpp"
#include "ladderops/weights.hpp"

#include <utility>
#include <vector>

namespace lop {

struct NumericOptions {
  unsigned precision_bits = 256;
  QuadOptions quad;
};

struct MomentVector {
  std::vector<Real> mu;
};

// alpha, beta, h hold indices 0..N-1; p1 holds 0..N.
struct RecurrenceTable {
  int N = 0;
  std::vector<Real> alpha;
  std::vector<Real> beta;
  std::vector<Real> h;
  std::vector<Real> p1;
  WeightSpec weight;
  unsigned precision_bits = 0;
};

MomentVector moments(const Rules& rules, int j_max);

RecurrenceTable recurrence_stieltjes(const WeightSpec& w, const Rules& rules, int N);

// Rules sized for degree N, Stieltjes, and one retry at doubled mantissa on
// PrecisionExhausted. Opens its own precision scope.
RecurrenceTable build_table(const WeightSpec& w, int N, const NumericOptions& opts);

QuadOptions quad_for_degree(QuadOptions base, int N);

// Hankel-determinant oracle; needs mu up to 2N-1.
RecurrenceTable recurrence_moment_oracle(const MomentVector& m, int N, const WeightSpec& w);

// Determinant by Gaussian elimination with partial pivoting.
Real determinant(std::vector<std::vector<Real>> a);

std::vector<Real> hankel_dets(const RecurrenceTable& tab);

void check_degree(const RecurrenceTable& tab, int n);

template <class T>
std::pair<T, T> eval_monic(const RecurrenceTable& tab, int n, const T& x) {
  check_degree(tab, n);
  T p0(Real(1)), d0(Real(0));
  if (n == 0) return {p0, d0};
  T p1 = x - tab.alpha[0], d1(Real(1));
  for (int j = 1; j < n; ++j) {
    T p2 = (x - tab.alpha[j]) * p1 - tab.beta[j] * p0;
    T d2 = p1 + (x - tab.alpha[j]) * d1 - tab.beta[j] * d0;
    p0 = std::move(p1);
    p1 = std::move(p2);
    d0 = std::move(d1);
    d1 = std::move(d2);
  }
  return {p1, d1};
}

// P_0..P_n and their derivatives at x.
template <class T>
void eval_monic_all(const RecurrenceTable& tab, int n, const T& x, std::vector<T>& P,
                    std::vector<T>& dP) {
  check_degree(tab, n);
  P.assign(n + 1, T(Real(0)));
  dP.assign(n + 1, T(Real(0)));
  P[0] = T(Real(1));
  if (n == 0) return;
  P[1] = x - tab.alpha[0];
  dP[1] = T(Real(1));
  for (int j = 1; j < n; ++j) {
    P[j + 1] = (x - tab.alpha[j]) * P[j] - tab.beta[j] * P[j - 1];
    dP[j + 1] = P[j] + (x - tab.alpha[j]) * dP[j] - tab.beta[j] * dP[j - 1];
  }
}

template <class T>
struct CdValue {
  T sum;
  T closed;
};

template <class T>
CdValue<T> cd_kernel(const RecurrenceTable& tab, int n, const T& x, const T& y) {
  if (n < 1) throw Error(ErrorCode::DegreeOutOfRange, "Christoffel-Darboux needs n >= 1");
  std::vector<T> Px, Py, dx, dy;
  eval_monic_all(tab, n, x, Px, dx);
  eval_monic_all(tab, n, y, Py, dy);
  T sum(Real(0));
  for (int j = 0; j < n; ++j) sum += Px[j] * Py[j] / tab.h[j];
  T closed = (Px[n] * Py[n - 1] - Px[n - 1] * Py[n]) / (tab.h[n - 1] * (x - y));
  return {sum, closed};
}

// max_{i<j<=N-1} |<P_i,P_j>| / sqrt(h_i h_j) over the given rules.
Real orthogonality_residual(const RecurrenceTable& tab, const Rules& rules);

// Rules flattened to node/weight arrays with P_j(x_i) tabulated, shared by the
// ladder and RHP evaluations.
struct NodeSet {
  std::vector<Real> x;
  std::vector<Real> W;               // rule weight times segment multiplier
  std::vector<std::vector<Real>> P;  // P[j][i]
};

NodeSet make_node_set(const Rules& rules, const RecurrenceTable& tab, int n_max);

struct Workspace {
  WeightSpec weight;
  RecurrenceTable table;
  QuadOptions quad;
  NodeSet nodes;
  NodeSet fh_nodes;  // measure w/(x-t); empty unless the weight has an FH factor
};

// Tabulates P_0..P_N on the rules; the table is used as given (it may be
// deliberately perturbed).
Workspace make_workspace(const WeightSpec& w, const RecurrenceTable& tab, const QuadOptions& q);

template <class T, class F>
T node_sum(const NodeSet& s, F&& f) {
  T acc(Real(0));
  for (std::size_t i = 0; i < s.x.size(); ++i) acc += f(i) * s.W[i];
  return acc;
}

}  // namespace lop
