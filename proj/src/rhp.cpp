#include "ladderops/rhp.hpp"

#include <algorithm>

namespace lop {

using boost::multiprecision::abs;

namespace {

void require_off_support(const WeightSpec& w, const Complex& z) {
  if (on_closed_support(w, z)) throw Error(ErrorCode::ZOnSupport, "z lies on the support");
}

// Monomial coefficients of P_0..P_n (ascending), built from the table.
std::vector<std::vector<Real>> monomial_coefficients(const RecurrenceTable& tab, int n) {
  check_degree(tab, n);
  std::vector<std::vector<Real>> c(n + 1);
  c[0] = {Real(1)};
  if (n >= 1) c[1] = {-tab.alpha[0], Real(1)};
  for (int j = 1; j < n; ++j) {
    std::vector<Real> next(j + 2, Real(0));
    for (int k = 0; k <= j; ++k) {
      next[k + 1] += c[j][k];
      next[k] -= tab.alpha[j] * c[j][k];
    }
    for (int k = 0; k < j; ++k) next[k] -= tab.beta[j] * c[j - 1][k];
    c[j + 1] = std::move(next);
  }
  return c;
}

std::pair<Complex, Complex> horner(const std::vector<Real>& c, const Complex& z) {
  Complex p, d;
  for (std::size_t k = c.size(); k-- > 0;) {
    d = d * z + p;
    p = p * z + c[k];
  }
  return {p, d};
}

Real rel(const Complex& a, const Complex& b) {
  const Real m = std::max(abs(a), abs(b));
  const Real d = abs(a - b);
  return m > 0 ? Real(d / m) : d;
}

Complex cauchy_on(const NodeSet& s, int k, const Complex& z, int power) {
  Complex acc;
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    Complex d = s.x[i] - z;
    if (power == 2) d = d * d;
    acc += (s.P[k][i] * s.W[i]) / d;
  }
  return acc;
}

Complex counting_A(Family f, int n) {
  return f == Family::Laguerre ? Complex(0) : Complex(Real(2 * n + 1));
}

Complex counting_B(Family f, int n, const Real& p, const Complex& z) {
  const Real nn(n);
  switch (f) {
    case Family::Laguerre: return Complex(-nn);
    case Family::Jacobi: return nn * z - p;
    case Family::ShiftedJacobi: return nn * (z - Real(1)) - p;
  }
  return Complex(0);
}

}  // namespace

Complex cauchy(const Workspace& ws, int k, const Complex& z, int power) {
  require_off_support(ws.weight, z);
  check_degree(ws.table, k);
  if (power != 1 && power != 2) throw Error(ErrorCode::BadConfig, "Cauchy power must be 1 or 2");
  return cauchy_on(ws.nodes, k, z, power);
}

RhpFrame y_frame(const Workspace& ws, int n, const Complex& z) {
  const RecurrenceTable& tab = ws.table;
  require_off_support(ws.weight, z);
  if (n < 1 || n > tab.N - 1)
    throw Error(ErrorCode::DegreeOutOfRange, "Y needs 1 <= n <= N-1");
  const auto coef = monomial_coefficients(tab, n);
  const auto [pn, dpn] = horner(coef[n], z);
  const auto [pm, dpm] = horner(coef[n - 1], z);
  const Real& hm = tab.h[n - 1];
  const Complex tpi = two_pi_i();

  Complex Cn, Cm, dCn, dCm;
  const NodeSet& s = ws.nodes;
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    const Complex d = s.W[i] / (s.x[i] - z);
    const Complex d2 = d / (s.x[i] - z);
    Cn += d * s.P[n][i];
    Cm += d * s.P[n - 1][i];
    dCn += d2 * s.P[n][i];
    dCm += d2 * s.P[n - 1][i];
  }

  RhpFrame f;
  f.z = z;
  f.n = n;
  f.Y[0][0] = pn;
  f.Y[0][1] = Cn / tpi;
  f.Y[1][0] = -(tpi / hm) * pm;
  f.Y[1][1] = -Cm / hm;
  f.Yprime[0][0] = dpn;
  f.Yprime[0][1] = dCn / tpi;
  f.Yprime[1][0] = -(tpi / hm) * dpm;
  f.Yprime[1][1] = -dCm / hm;
  f.dety = f.Y[0][0] * f.Y[1][1] - f.Y[0][1] * f.Y[1][0];

  Mat2 inv;
  inv[0][0] = f.Y[1][1];
  inv[0][1] = -f.Y[0][1];
  inv[1][0] = -f.Y[1][0];
  inv[1][1] = f.Y[0][0];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) f.R[i][j] = f.Yprime[i][0] * inv[0][j] + f.Yprime[i][1] * inv[1][j];
  return f;
}

Real det_residual(const RhpFrame& f) { return abs(f.dety - Complex(1)); }

Real trace_residual(const RhpFrame& f) {
  const Real m = std::max(abs(f.R[0][0]), abs(f.R[1][1]));
  const Real t = abs(f.R[0][0] + f.R[1][1]);
  return m > 0 ? Real(t / m) : t;
}

Real cauchy_commutes_residual(const Workspace& ws, int m, int n, const Complex& z, CommuteKind q) {
  require_off_support(ws.weight, z);
  check_degree(ws.table, n);
  check_degree(ws.table, m);
  if (m < 0) throw Error(ErrorCode::DegreeOutOfRange, "m must be >= 0");
  const NodeSet& s = ws.nodes;
  Complex qz;
  if (q == CommuteKind::Orthogonal) {
    qz = eval_monic(ws.table, m, z).first;
  } else {
    qz = Complex(1);
    for (int i = 0; i < m; ++i) qz = qz * z;
  }
  Complex rhs;
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    Real qx;
    if (q == CommuteKind::Orthogonal) {
      qx = s.P[m][i];
    } else {
      qx = Real(1);
      for (int j = 0; j < m; ++j) qx *= s.x[i];
    }
    rhs += (qx * s.P[n][i] * s.W[i]) / (s.x[i] - z);
  }
  const Complex lhs = qz * cauchy_on(s, n, z, 1);
  return rel(lhs, rhs);
}

Real cauchy_commutes_worst(const Workspace& ws, int n, const Complex& z) {
  require_off_support(ws.weight, z);
  check_degree(ws.table, n);
  const NodeSet& s = ws.nodes;
  const std::size_t K = s.x.size();
  std::vector<Complex> t(K);
  Complex cn;
  for (std::size_t i = 0; i < K; ++i) {
    t[i] = (s.P[n][i] * s.W[i]) / (s.x[i] - z);
    cn += t[i];
  }
  std::vector<Real> xm(K, Real(1));
  std::vector<Complex> P, dP;
  eval_monic_all(ws.table, n, z, P, dP);
  Complex zm(1);
  Real worst(0);
  for (int m = 0; m <= n; ++m) {
    Complex ro, rm;
    for (std::size_t i = 0; i < K; ++i) {
      ro += t[i] * s.P[m][i];
      rm += t[i] * xm[i];
      xm[i] *= s.x[i];
    }
    worst = std::max({worst, rel(P[m] * cn, ro), rel(zm * cn, rm)});
    zm = zm * z;
  }
  return worst;
}

Mat2 r_closed(const Workspace& ws, int n, const Complex& z) {
  const WeightSpec& w = ws.weight;
  const RecurrenceTable& tab = ws.table;
  if (!is_smooth(w))
    throw Error(ErrorCode::FamilyMismatch, "closed R formulas cover weights without jumps or FH");
  require_off_support(w, z);
  if (n < 1 || n > tab.N - 1) throw Error(ErrorCode::DegreeOutOfRange, "R needs 1 <= n <= N-1");
  const NodeSet& s = ws.nodes;
  Complex Inm, Inn, Imm;
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    const Real& x = s.x[i];
    const Complex k = (family_g(w.family, x) * eval_vprime_unchecked(w, x) * s.W[i]) / (x - z);
    Inm += k * (s.P[n][i] * s.P[n - 1][i]);
    Inn += k * (s.P[n][i] * s.P[n][i]);
    Imm += k * (s.P[n - 1][i] * s.P[n - 1][i]);
  }
  const Complex pref = Real(1) / family_g(w.family, z);
  const Complex tpi = two_pi_i();
  const Real& hn = tab.h[n];
  const Real& hm = tab.h[n - 1];
  Mat2 R;
  R[0][0] = -(pref * (Inm / hm + counting_B(w.family, n, tab.p1[n], z)));
  R[1][1] = -R[0][0];
  R[0][1] = -(pref * (Inn + counting_A(w.family, n) * hn)) / tpi;
  R[1][0] = tpi / (hm * hm) * pref * (Imm + counting_A(w.family, n - 1) * hm);
  return R;
}

std::array<std::array<Real, 2>, 2> r_elements_residual(const Workspace& ws, int n, const Complex& z) {
  return r_elements_residual(y_frame(ws, n, z), r_closed(ws, n, z));
}

std::array<std::array<Real, 2>, 2> r_elements_residual(const RhpFrame& f, const Mat2& c) {
  std::array<std::array<Real, 2>, 2> r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = rel(f.R[i][j], c[i][j]);
  return r;
}

Real ladder_from_r_residual(const Workspace& ws, int n, const Complex& z) {
  return ladder_from_r_residual(ws, r_closed(ws, n, z), n, z);
}

Real ladder_from_r_residual(const Workspace& ws, const Mat2& R, int n, const Complex& z) {
  const RecurrenceTable& tab = ws.table;
  std::vector<Complex> P, dP;
  eval_monic_all(tab, n, z, P, dP);
  const Complex tpi = two_pi_i();
  const Real& hm = tab.h[n - 1];

  const Complex a1 = R[0][0] * P[n], a2 = (tpi / hm) * R[0][1] * P[n - 1];
  const Complex b1 = (hm / tpi) * R[1][0] * P[n], b2 = R[1][1] * P[n - 1];
  auto norm3 = [](const Complex& lhs, const Complex& t1, const Complex& t2, const Complex& sum) {
    const Real m = std::max({abs(lhs), abs(t1), abs(t2)});
    const Real d = abs(lhs - sum);
    return m > 0 ? Real(d / m) : d;
  };
  return std::max(norm3(dP[n], a1, a2, a1 - a2), norm3(dP[n - 1], b1, b2, b2 - b1));
}

Real plemelj_residual(const WeightSpec& w, const RecurrenceTable& tab, const QuadOptions& q, int n,
                      double x, double eps) {
  if (!(x > support_lo(w)) || (bounded_support(w) && !(x < support_hi(w))))
    throw Error(ErrorCode::OutOfSupport, "jump check point must be inside the support");
  if (n < 1 || n > tab.N - 1) throw Error(ErrorCode::DegreeOutOfRange, "Y needs 1 <= n <= N-1");
  QuadOptions g = quad_for_degree(q, tab.N);
  g.extra_breakpoints.push_back(x);
  for (double d = eps; d < 0.25; d *= 2) {
    g.extra_breakpoints.push_back(x - d);
    g.extra_breakpoints.push_back(x + d);
  }
  const NodeSet s = make_node_set(build_rules(w, g), tab, n);
  const Real hm = tab.h[n - 1];
  const Complex tpi = two_pi_i();
  const Real xr(x);
  const Real wx = eval_weight(w, xr);

  auto frame = [&](const Complex& z) {
    Mat2 Y;
    Y[0][0] = eval_monic(tab, n, z).first;
    Y[1][0] = -(tpi / hm) * eval_monic(tab, n - 1, z).first;
    Y[0][1] = cauchy_on(s, n, z, 1) / tpi;
    Y[1][1] = -cauchy_on(s, n - 1, z, 1) / hm;
    return Y;
  };
  const Mat2 up = frame(Complex(xr, Real(eps)));
  const Mat2 dn = frame(Complex(xr, Real(-eps)));
  Real worst(0);
  for (int i = 0; i < 2; ++i) {
    const Complex expect0 = dn[i][0];
    const Complex expect1 = dn[i][0] * wx + dn[i][1];
    const Real scale = std::max({abs(dn[i][0]), abs(dn[i][0] * wx), abs(dn[i][1])});
    worst = std::max(worst, Real(abs(up[i][0] - expect0) / scale));
    worst = std::max(worst, Real(abs(up[i][1] - expect1) / scale));
  }
  return worst;
}

}  // namespace lop
