#include "ladderops/opcore.hpp"

#include <algorithm>

namespace lop {

using boost::multiprecision::abs;
using boost::multiprecision::sqrt;

void check_degree(const RecurrenceTable& tab, int n) {
  if (n < 0 || n > tab.N)
    throw Error(ErrorCode::DegreeOutOfRange,
                "degree " + std::to_string(n) + " outside 0.." + std::to_string(tab.N));
}

MomentVector moments(const Rules& rules, int j_max) {
  if (j_max < 0) throw Error(ErrorCode::DegreeOutOfRange, "j_max must be >= 0");
  MomentVector m;
  m.mu.assign(j_max + 1, Real(0));
  for (const auto& r : rules) {
    std::vector<Real> seg(j_max + 1, Real(0));
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      Real p = r.weights[i];
      for (int j = 0; j <= j_max; ++j) {
        seg[j] += p;
        p *= r.nodes[i];
      }
    }
    for (int j = 0; j <= j_max; ++j) m.mu[j] += seg[j] * r.multiplier;
  }
  for (const auto& v : m.mu)
    if (boost::multiprecision::isnan(v) || boost::multiprecision::isinf(v))
      throw Error(ErrorCode::EvaluationFailure, "non-finite moment");
  return m;
}

QuadOptions quad_for_degree(QuadOptions base, int N) {
  base.degree_hint = std::max(base.degree_hint, 2 * N + 8);
  return base;
}

RecurrenceTable recurrence_stieltjes(const WeightSpec& w, const Rules& rules, int N) {
  if (N < 1) throw Error(ErrorCode::DegreeOutOfRange, "N must be >= 1");
  for (const auto& r : rules)
    if (r.nodes.size() < static_cast<std::size_t>(2 * N + 8) && rules.size() == 1)
      throw Error(ErrorCode::BadNodeCount, "need at least 2N+8 nodes per segment");

  std::vector<Real> x, W;
  for (const auto& r : rules)
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      x.push_back(r.nodes[i]);
      W.push_back(r.weights[i] * r.multiplier);
    }
  const std::size_t M = x.size();

  RecurrenceTable tab;
  tab.N = N;
  tab.weight = w;
  tab.precision_bits = current_precision_bits();
  tab.alpha.assign(N, Real(0));
  tab.beta.assign(N, Real(0));
  tab.h.assign(N, Real(0));
  tab.p1.assign(N + 1, Real(0));

  std::vector<Real> prev(M, Real(0)), cur(M, Real(1)), next(M);
  for (int j = 0; j < N; ++j) {
    Real h(0), xh(0);
    for (std::size_t i = 0; i < M; ++i) {
      const Real t = W[i] * cur[i] * cur[i];
      h += t;
      xh += t * x[i];
    }
    if (!(h > 0))
      throw Error(ErrorCode::PrecisionExhausted, "h_" + std::to_string(j) + " <= 0");
    tab.h[j] = h;
    tab.alpha[j] = xh / h;
    if (j > 0) {
      tab.beta[j] = h / tab.h[j - 1];
      if (!(tab.beta[j] > 0))
        throw Error(ErrorCode::PrecisionExhausted, "beta_" + std::to_string(j) + " <= 0");
    }
    tab.p1[j + 1] = tab.p1[j] - tab.alpha[j];
    for (std::size_t i = 0; i < M; ++i)
      next[i] = (x[i] - tab.alpha[j]) * cur[i] - tab.beta[j] * prev[i];
    std::swap(prev, cur);
    std::swap(cur, next);
  }
  return tab;
}

RecurrenceTable build_table(const WeightSpec& w, int N, const NumericOptions& opts) {
  const QuadOptions q = quad_for_degree(opts.quad, N);
  for (int attempt = 0;; ++attempt) {
    const unsigned bits = opts.precision_bits << attempt;
    PrecisionScope scope(bits);
    try {
      return recurrence_stieltjes(w, build_rules(w, q), N);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::PrecisionExhausted || attempt > 0) throw;
    }
  }
}

Real determinant(std::vector<std::vector<Real>> a) {
  const std::size_t n = a.size();
  Real det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (abs(a[r][c]) > abs(a[piv][c])) piv = r;
    if (a[piv][c] == 0) return Real(0);
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const Real f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

RecurrenceTable recurrence_moment_oracle(const MomentVector& m, int N, const WeightSpec& w) {
  if (N < 1) throw Error(ErrorCode::DegreeOutOfRange, "N must be >= 1");
  if (static_cast<int>(m.mu.size()) < 2 * N)
    throw Error(ErrorCode::DegreeOutOfRange, "moment oracle needs mu_0..mu_{2N-1}");
  const auto& mu = m.mu;
  auto hankel = [&](int n, bool bordered) {
    std::vector<std::vector<Real>> a(n, std::vector<Real>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const int col = (bordered && j == n - 1) ? n : j;
        a[i][j] = mu[i + col];
      }
    return determinant(std::move(a));
  };

  std::vector<Real> D(N + 1), Dt(N + 1);
  D[0] = Real(1);
  for (int n = 1; n <= N; ++n) {
    D[n] = hankel(n, false);
    if (!(D[n] > 0)) throw Error(ErrorCode::PrecisionExhausted, "Hankel determinant lost positivity");
    Dt[n] = hankel(n, true);
  }

  RecurrenceTable tab;
  tab.N = N;
  tab.weight = w;
  tab.precision_bits = current_precision_bits();
  tab.alpha.assign(N, Real(0));
  tab.beta.assign(N, Real(0));
  tab.h.assign(N, Real(0));
  tab.p1.assign(N + 1, Real(0));
  for (int n = 1; n <= N; ++n) tab.p1[n] = -Dt[n] / D[n];
  for (int n = 0; n < N; ++n) {
    tab.h[n] = D[n + 1] / D[n];
    tab.alpha[n] = tab.p1[n] - tab.p1[n + 1];
    if (n > 0) tab.beta[n] = tab.h[n] / tab.h[n - 1];
  }
  return tab;
}

std::vector<Real> hankel_dets(const RecurrenceTable& tab) {
  std::vector<Real> D(tab.N);
  Real acc(1);
  for (int n = 0; n < tab.N; ++n) {
    acc *= tab.h[n];
    D[n] = acc;
  }
  return D;
}

NodeSet make_node_set(const Rules& rules, const RecurrenceTable& tab, int n_max) {
  check_degree(tab, n_max);
  NodeSet s;
  for (const auto& r : rules)
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      s.x.push_back(r.nodes[i]);
      s.W.push_back(r.weights[i] * r.multiplier);
    }
  const std::size_t M = s.x.size();
  s.P.assign(n_max + 1, std::vector<Real>(M));
  for (std::size_t i = 0; i < M; ++i) {
    s.P[0][i] = Real(1);
    if (n_max >= 1) s.P[1][i] = s.x[i] - tab.alpha[0];
    for (int j = 1; j < n_max; ++j)
      s.P[j + 1][i] = (s.x[i] - tab.alpha[j]) * s.P[j][i] - tab.beta[j] * s.P[j - 1][i];
  }
  return s;
}

Real orthogonality_residual(const RecurrenceTable& tab, const Rules& rules) {
  const int n = tab.N - 1;
  const NodeSet s = make_node_set(rules, tab, n);
  Real worst(0);
  for (int i = 0; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      Real ip(0);
      for (std::size_t k = 0; k < s.x.size(); ++k) ip += s.W[k] * s.P[i][k] * s.P[j][k];
      worst = std::max(worst, Real(abs(ip) / sqrt(tab.h[i] * tab.h[j])));
    }
  return worst;
}

Workspace make_workspace(const WeightSpec& w, const RecurrenceTable& tab, const QuadOptions& q) {
  PrecisionScope scope(tab.precision_bits);
  Workspace ws;
  ws.weight = w;
  ws.table = tab;
  ws.quad = quad_for_degree(q, tab.N);
  ws.nodes = make_node_set(build_rules(w, ws.quad), tab, tab.N);
  if (w.fh) {
    MeasureShift s;
    s.fh = true;
    ws.fh_nodes = make_node_set(build_rules(w, ws.quad, s), tab, tab.N);
  }
  return ws;
}

}  // namespace lop
