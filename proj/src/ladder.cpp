#include "ladderops/ladder.hpp"

#include <algorithm>
#include <cmath>

namespace lop {

using boost::multiprecision::abs;
using boost::multiprecision::log;
using boost::multiprecision::sqrt;

Complex LadderParts::total() const {
  Complex s = smooth_integral + counting_term + fh_term;
  for (const auto& r : jump_residues) s += r;
  return s;
}

Complex family_prefactor(Family f, const Complex& z) {
  return Real(1) / family_g(f, z);
}

void check_ladder_point(const WeightSpec& w, const Complex& z) {
  if (on_closed_support(w, z)) throw Error(ErrorCode::ZOnSupport, "z lies on the support");
  auto hits = [&](double p) { return z.im == 0 && z.re == Real(p); };
  for (double p : pole_points(w))
    if (hits(p)) throw Error(ErrorCode::SingularPoint, "z at a prefactor, jump, FH or atom pole");
}

namespace {

int max_degree(const Workspace& ws) { return ws.table.N - 1; }

void check_sequence_degree(const Workspace& ws, int n_max) {
  if (n_max < 0 || n_max > max_degree(ws))
    throw Error(ErrorCode::DegreeOutOfRange,
                "n=" + std::to_string(n_max) + " needs a table with N >= n+1 (N=" +
                    std::to_string(ws.table.N) + ")");
}

Complex counting_A(Family f, int n) {
  if (f == Family::Laguerre) return Complex(0);
  return Complex(Real(2 * n + 1));
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

// Residue term of one jump point at t with strength s (= omega w(t) P P / h).
Complex jump_term(Family f, const Complex& z, const Complex& pref, const Real& t, const Real& s) {
  switch (f) {
    case Family::Laguerre:
      return -s / z + s / (z - t);
    case Family::Jacobi:
      return pref * s * (z + t) + s / (z - t);
    case Family::ShiftedJacobi:
      return pref * ((t - t * t) * s) / (z - t);
  }
  return Complex(0);
}

Real normalized(const Complex& sum, std::initializer_list<Real> scales) {
  Real m(0);
  for (const auto& s : scales) m = std::max(m, s);
  const Real a = abs(sum);
  return m > 0 ? Real(a / m) : a;
}

}  // namespace

std::vector<LadderPair> ladder_sequence(const Workspace& ws, const Complex& z, int n_max) {
  const WeightSpec& w = ws.weight;
  const RecurrenceTable& tab = ws.table;
  check_sequence_degree(ws, n_max);
  check_ladder_point(w, z);

  const Complex pref = family_prefactor(w.family, z);
  const Complex fz = family_g(w.family, z) * eval_vprime(w, z);
  const NodeSet& s = ws.nodes;
  const std::size_t M = s.x.size();
  std::vector<Complex> KW(M);
  for (std::size_t i = 0; i < M; ++i) KW[i] = kernel_divdiff_fast(w, z, fz, s.x[i]) * s.W[i];

  // FH integrand pieces on the w/(x-t) measure.
  std::vector<Complex> fhW;
  Real gamma(0);
  if (w.fh) {
    gamma = Real(w.fh->gamma);
    const NodeSet& f = ws.fh_nodes;
    fhW.resize(f.x.size());
    for (std::size_t i = 0; i < f.x.size(); ++i) {
      if (w.family == Family::Laguerre)
        fhW[i] = Complex(f.W[i]);  // split below
      else
        fhW[i] = (family_g(w.family, f.x[i]) * f.W[i]) / (z - f.x[i]);
    }
  }

  // Jump points: polynomial values at t_k.
  struct JumpEval {
    Real t;
    Real strength;  // omega_k w(t_k), zero when the residue drops out
    std::vector<Real> P;
  };
  std::vector<JumpEval> jumps;
  for (const auto& jp : w.jumps.points) {
    JumpEval je;
    je.t = Real(jp.t);
    if (jp.omega == 0 || family_g(w.family, je.t) == 0) {
      je.strength = Real(0);
    } else {
      je.strength = Real(jp.omega) * eval_weight_no_step(w, je.t);
      std::vector<Real> dP;
      eval_monic_all(tab, n_max, je.t, je.P, dP);
    }
    jumps.push_back(std::move(je));
  }

  std::vector<LadderPair> out;
  out.reserve(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    LadderPair lp;
    lp.z = z;
    lp.n = n;
    const Real& hn = tab.h[n];
    Complex SA, SB;
    for (std::size_t i = 0; i < M; ++i) {
      SA += KW[i] * (s.P[n][i] * s.P[n][i]);
      if (n > 0) SB += KW[i] * (s.P[n][i] * s.P[n - 1][i]);
    }
    lp.a_parts.smooth_integral = pref * (SA / hn);
    lp.a_parts.counting_term = pref * counting_A(w.family, n);
    for (const auto& je : jumps) {
      if (je.strength == 0) {
        lp.a_parts.jump_residues.push_back(Complex(0));
        continue;
      }
      lp.a_parts.jump_residues.push_back(
          jump_term(w.family, z, pref, je.t, je.strength * je.P[n] * je.P[n] / hn));
    }
    if (w.fh) {
      const NodeSet& f = ws.fh_nodes;
      if (w.family == Family::Laguerre) {
        Real I1(0);
        Complex I2;
        for (std::size_t i = 0; i < f.x.size(); ++i) {
          const Real pp = f.P[n][i] * f.P[n][i] * f.W[i];
          I1 += pp;
          I2 += pp / (z - f.x[i]);
        }
        lp.a_parts.fh_term = -(gamma * I1 / hn) / z + I2 * (gamma / hn);
      } else {
        Complex I;
        for (std::size_t i = 0; i < f.x.size(); ++i) I += fhW[i] * (f.P[n][i] * f.P[n][i]);
        lp.a_parts.fh_term = pref * I * (gamma / hn);
      }
    }
    lp.A = lp.a_parts.total();

    if (n > 0) {
      const Real& hm = tab.h[n - 1];
      lp.b_parts.smooth_integral = pref * (SB / hm);
      lp.b_parts.counting_term = pref * counting_B(w.family, n, tab.p1[n], z);
      for (const auto& je : jumps) {
        if (je.strength == 0) {
          lp.b_parts.jump_residues.push_back(Complex(0));
          continue;
        }
        lp.b_parts.jump_residues.push_back(
            jump_term(w.family, z, pref, je.t, je.strength * je.P[n] * je.P[n - 1] / hm));
      }
      if (w.fh) {
        const NodeSet& f = ws.fh_nodes;
        if (w.family == Family::Laguerre) {
          Real I1(0);
          Complex I2;
          for (std::size_t i = 0; i < f.x.size(); ++i) {
            const Real pp = f.P[n][i] * f.P[n - 1][i] * f.W[i];
            I1 += pp;
            I2 += pp / (z - f.x[i]);
          }
          lp.b_parts.fh_term = -(gamma * I1 / hm) / z + I2 * (gamma / hm);
        } else {
          Complex I;
          for (std::size_t i = 0; i < f.x.size(); ++i)
            I += fhW[i] * (f.P[n][i] * f.P[n - 1][i]);
          lp.b_parts.fh_term = pref * I * (gamma / hm);
        }
      }
      lp.B = lp.b_parts.total();
    }
    out.push_back(std::move(lp));
  }
  return out;
}

LadderPair ladder_pair(const Workspace& ws, int n, const Complex& z) {
  if (n < 0) throw Error(ErrorCode::DegreeOutOfRange, "n must be >= 0");
  return ladder_sequence(ws, z, n).back();
}

LadderResiduals ladder_residuals(const Workspace& ws, const std::vector<LadderPair>& seq,
                                 const Complex& z, int n_max) {
  if (static_cast<int>(seq.size()) < n_max + 1)
    throw Error(ErrorCode::DegreeOutOfRange, "ladder sequence too short");
  const RecurrenceTable& tab = ws.table;
  std::vector<Complex> P, dP;
  eval_monic_all(tab, n_max, z, P, dP);
  const Complex vp = eval_vprime(ws.weight, z);

  LadderResiduals r;
  r.lowering.assign(n_max + 1, Real(0));
  r.raising.assign(n_max + 1, Real(0));
  r.lowering[0] = abs(dP[0]);
  for (int n = 1; n <= n_max; ++n) {
    const Complex t1 = dP[n];
    const Complex t2 = seq[n].B * P[n];
    const Complex t3 = tab.beta[n] * seq[n].A * P[n - 1];
    r.lowering[n] = normalized(t1 + t2 - t3, {abs(t1), abs(t2), abs(t3)});

    const Complex u1 = dP[n - 1];
    const Complex u2 = (seq[n].B + vp) * P[n - 1];
    const Complex u3 = seq[n - 1].A * P[n];
    r.raising[n] = normalized(u1 - u2 + u3, {abs(u1), abs(u2), abs(u3)});
  }
  return r;
}

Real lowering_residual(const Workspace& ws, int n, const Complex& z) {
  const auto seq = ladder_sequence(ws, z, n);
  return ladder_residuals(ws, seq, z, n).lowering[n];
}

Real raising_residual(const Workspace& ws, int n, const Complex& z) {
  if (n < 1) throw Error(ErrorCode::DegreeOutOfRange, "raising relation needs n >= 1");
  const auto seq = ladder_sequence(ws, z, n);
  return ladder_residuals(ws, seq, z, n).raising[n];
}

CompatResiduals compat_from_sequence(const Workspace& ws, const std::vector<LadderPair>& seq,
                                     const Complex& z, int n) {
  if (n < 0 || static_cast<int>(seq.size()) < n + 2)
    throw Error(ErrorCode::DegreeOutOfRange, "compatibility at n needs A, B up to n+1");
  const RecurrenceTable& tab = ws.table;
  const Complex vp = eval_vprime(ws.weight, z);
  const Complex zA = z - tab.alpha[n];
  const Complex& Bn = seq[n].B;
  const Complex& Bn1 = seq[n + 1].B;
  const Complex& An = seq[n].A;
  const Complex Am1 = n > 0 ? seq[n - 1].A : Complex(0);

  CompatResiduals c;
  {
    const Complex t3 = zA * An;
    c.s1 = normalized(Bn1 + Bn - t3 + vp, {abs(Bn1), abs(Bn), abs(t3), abs(vp)});
  }
  {
    const Complex t2 = zA * Bn1, t3 = zA * Bn;
    const Complex t4 = tab.beta[n + 1] * seq[n + 1].A;
    const Complex t5 = tab.beta[n] * Am1;
    c.s2 = normalized(Complex(1) + t2 - t3 - t4 + t5,
                      {Real(1), abs(t2), abs(t3), abs(t4), abs(t5)});
  }
  c.s2p = Real(0);
  if (n >= 1) {
    const Complex t1 = Bn * Bn, t2 = vp * Bn;
    const Complex t4 = tab.beta[n] * An * Am1;
    Complex sum;
    Real m = std::max({abs(t1), abs(t2), abs(t4)});
    for (int j = 0; j < n; ++j) {
      sum += seq[j].A;
      m = std::max(m, abs(seq[j].A));
    }
    const Real a = abs(t1 + t2 + sum - t4);
    c.s2p = m > 0 ? Real(a / m) : a;
  }
  return c;
}

CompatResiduals compat_residuals(const Workspace& ws, int n, const Complex& z) {
  const auto seq = ladder_sequence(ws, z, n + 1);
  return compat_from_sequence(ws, seq, z, n);
}

// ---- forms integrating (v'(z) - v'(x))/(z - x) ----

namespace {

struct EndpointPiece {
  bool left;
  Real exponent;
  Complex coef;  // multiplies (1/h) int P P w / d
};

std::vector<EndpointPiece> endpoint_pieces(const WeightSpec& w, const Complex& z) {
  const Real one(1);
  switch (w.family) {
    case Family::Laguerre:
      return {{true, Real(w.lambda), Real(w.lambda) / z}};
    case Family::Jacobi:
      return {{false, Real(w.alpha), Real(w.alpha) / (one - z)},
              {true, Real(w.beta), Real(w.beta) / (one + z)}};
    case Family::ShiftedJacobi:
      return {{true, Real(w.alpha), Real(w.alpha) / z},
              {false, Real(w.beta), Real(w.beta) / (one - z)}};
  }
  return {};
}

}  // namespace

std::vector<AltPair> alt_ladder_sequence(const Workspace& ws, const Complex& z, int n_max) {
  const WeightSpec& w = ws.weight;
  const RecurrenceTable& tab = ws.table;
  if (has_jumps(w)) throw Error(ErrorCode::FamilyMismatch, "direct-kernel forms cover jump-free weights");
  check_sequence_degree(ws, n_max);
  check_ladder_point(w, z);

  std::vector<AltPair> out(n_max + 1);
  std::vector<Complex> IA(n_max + 1), IB(n_max + 1);
  bool convergent = true;

  // Atom part of the kernel on the ordinary nodes.
  {
    const Complex vz = eval_atoms_vprime(w, z);
    const NodeSet& s = ws.nodes;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const Complex k = (vz - eval_atoms_vprime(w, s.x[i])) / (z - s.x[i]) * s.W[i];
      for (int n = 0; n <= n_max; ++n) {
        IA[n] += k * (s.P[n][i] * s.P[n][i]);
        if (n > 0) IB[n] += k * (s.P[n][i] * s.P[n - 1][i]);
      }
    }
  }

  for (const auto& piece : endpoint_pieces(w, z)) {
    if (piece.exponent == 0) continue;
    std::vector<Real> EA(n_max + 1, Real(0)), EB(n_max + 1, Real(0));
    if (piece.exponent > 0) {
      MeasureShift sh;
      (piece.left ? sh.left : sh.right) = true;
      const NodeSet s = make_node_set(build_rules(w, ws.quad, sh), tab, n_max);
      for (std::size_t i = 0; i < s.x.size(); ++i)
        for (int n = 0; n <= n_max; ++n) {
          EA[n] += s.W[i] * s.P[n][i] * s.P[n][i];
          if (n > 0) EB[n] += s.W[i] * s.P[n][i] * s.P[n - 1][i];
        }
    } else {
      // Divergent: the plain rule gives a finite but meaningless number.
      convergent = false;
      const NodeSet& s = ws.nodes;
      const Real lo(support_lo(w));
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        const Real d = piece.left ? Real(s.x[i] - lo) : Real(Real(support_hi(w)) - s.x[i]);
        const Real q = s.W[i] / d;
        for (int n = 0; n <= n_max; ++n) {
          EA[n] += q * s.P[n][i] * s.P[n][i];
          if (n > 0) EB[n] += q * s.P[n][i] * s.P[n - 1][i];
        }
      }
    }
    for (int n = 0; n <= n_max; ++n) {
      IA[n] += piece.coef * EA[n];
      IB[n] += piece.coef * EB[n];
    }
  }

  if (w.fh) {
    const NodeSet& f = ws.fh_nodes;
    for (std::size_t i = 0; i < f.x.size(); ++i) {
      const Complex k = Real(w.fh->gamma) * f.W[i] / (z - f.x[i]);
      for (int n = 0; n <= n_max; ++n) {
        IA[n] += k * (f.P[n][i] * f.P[n][i]);
        if (n > 0) IB[n] += k * (f.P[n][i] * f.P[n - 1][i]);
      }
    }
  }

  for (int n = 0; n <= n_max; ++n) {
    out[n].n = n;
    out[n].A = IA[n] / tab.h[n];
    out[n].B = n > 0 ? IB[n] / tab.h[n - 1] : Complex(0);
    out[n].convergent = convergent;
  }
  return out;
}

// ---- auxiliary quantities ----

Real sub_sub_leading(const RecurrenceTable& tab, int n) {
  check_degree(tab, n);
  Real c2(0);
  for (int j = 1; j < n; ++j) c2 = c2 - tab.alpha[j] * tab.p1[j] - tab.beta[j];
  return c2;
}

namespace {

const DeformationAtom& atom_of(const WeightSpec& w, AtomKind k) {
  for (const auto& a : w.atoms)
    if (a.kind == k) return a;
  throw Error(ErrorCode::FamilyMismatch, std::string("weight lacks atom ") + atom_name(k));
}

// (1/h_n) sum W P_n^2 f and (1/h_{n-1}) sum W P_n P_{n-1} f over a node set.
template <class F>
std::pair<Real, Real> moments_nn(const NodeSet& s, const RecurrenceTable& tab, int n, F&& f) {
  Real a(0), b(0);
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    const Real q = s.W[i] * f(s.x[i]);
    a += q * s.P[n][i] * s.P[n][i];
    if (n > 0) b += q * s.P[n][i] * s.P[n - 1][i];
  }
  return {a / tab.h[n], n > 0 ? Real(b / tab.h[n - 1]) : Real(0)};
}

template <class F>
std::pair<Complex, Complex> cmoments_nn(const NodeSet& s, const RecurrenceTable& tab, int n, F&& f) {
  Complex a, b;
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    const Complex q = f(s.x[i]) * s.W[i];
    a += q * (s.P[n][i] * s.P[n][i]);
    if (n > 0) b += q * (s.P[n][i] * s.P[n - 1][i]);
  }
  return {a / tab.h[n], n > 0 ? b / tab.h[n - 1] : Complex(0)};
}

void jump_strengths(const Workspace& ws, int n, AuxiliaryQuantities& q) {
  const auto& w = ws.weight;
  for (const auto& jp : w.jumps.points) {
    const Real t(jp.t);
    if (jp.omega == 0 || family_g(w.family, t) == 0) {
      q.Rnk.push_back(Complex(0));
      q.rnk.push_back(Complex(0));
      continue;
    }
    std::vector<Real> P, dP;
    eval_monic_all(ws.table, n, t, P, dP);
    const Real s = Real(jp.omega) * eval_weight_no_step(w, t);
    q.Rnk.push_back(Complex(s * P[n] * P[n] / ws.table.h[n]));
    q.rnk.push_back(n > 0 ? Complex(s * P[n] * P[n - 1] / ws.table.h[n - 1]) : Complex(0));
  }
}

}  // namespace

AuxiliaryQuantities aux_quantities(const Workspace& ws, int n, Example e, const Complex& z) {
  const WeightSpec& w = ws.weight;
  const RecurrenceTable& tab = ws.table;
  const auto detected = detect_example(w);
  if (!detected || *detected != e)
    throw Error(ErrorCode::FamilyMismatch,
                std::string("weight does not have the shape of ") + example_label(e));
  check_sequence_degree(ws, n);

  AuxiliaryQuantities q;
  q.example = e;
  q.n = n;
  auto& v = q.values;
  const Real nn(n);
  const Real a(w.alpha), b(w.beta);
  const Real one(1);

  switch (e) {
    case Example::LaguerreClassical:
    case Example::JacobiClassical:
    case Example::ShiftedJacobiClassical:
      break;
    case Example::ChenMcKay: {
      const auto& at = atom_of(w, AtomKind::PowerShift);
      const Real t(at.a), g(at.gamma);
      const auto [R, r] = moments_nn(ws.nodes, tab, n, [&](const Real& x) { return g / (x + t); });
      v["Rn"] = R;
      v["rn"] = r;
      break;
    }
    case Example::ChenIts: {
      const auto [R, r] = moments_nn(ws.nodes, tab, n, [](const Real& x) { return 1 / x; });
      v["Rn"] = R;
      v["rn"] = r;
      break;
    }
    case Example::LaguerreJump:
    case Example::JacobiJump:
    case Example::ShiftedJacobiJump:
      jump_strengths(ws, n, q);
      break;
    case Example::LaguerreFH:
    case Example::ShiftedJacobiFH: {
      check_ladder_point(w, z);
      const Real g(w.fh->gamma);
      const auto [U, V] = moments_nn(ws.fh_nodes, tab, n, [](const Real&) { return Real(1); });
      const auto [cA, cB] =
          cmoments_nn(ws.fh_nodes, tab, n, [&](const Real& x) { return Real(1) / (z - x); });
      const bool lag = e == Example::LaguerreFH;
      v[lag ? "Rn" : "un"] = g * U;
      v[lag ? "rn" : "vn"] = g * V;
      v["an"] = g * cA;
      v["bn"] = g * cB;
      break;
    }
    case Example::JacobiExp: {
      const Real t(atom_of(w, AtomKind::ExpLinear).a);
      v["Rn"] = (2 * nn + 1 + a + b - t * tab.alpha[n] - t) / 2;
      v["rn"] = (nn - t * tab.beta[n] - tab.p1[n]) / 2;
      break;
    }
    case Example::SymmetricExpQuad: {
      if (n + 1 > tab.N - 1)
        throw Error(ErrorCode::DegreeOutOfRange, "R_n needs beta_{n+1}");
      const Real t(atom_of(w, AtomKind::ExpQuad).a);
      v["Rn"] = 2 * nn + 1 + 2 * a - 2 * t * (tab.beta[n + 1] + tab.beta[n]);
      v["rn"] = nn - 2 * t * tab.beta[n];
      v["qn"] = sub_sub_leading(tab, n);
      break;
    }
    case Example::JacobiK2: {
      const auto& at = atom_of(w, AtomKind::PowerOneMinusK2X2);
      const Real ik = 1 / sqrt(Real(at.a)), g(at.gamma);
      const auto [R, r] = moments_nn(ws.nodes, tab, n, [&](const Real& x) { return g / (x + ik); });
      v["Rn_star"] = R;
      v["rn_star"] = r;
      break;
    }
    case Example::JacobiInvX2: {
      const auto [m2, unused2] = moments_nn(ws.nodes, tab, n, [](const Real& x) { return 1 / (x * x); });
      const auto [unused3, M3] =
          moments_nn(ws.nodes, tab, n, [](const Real& x) { return 1 / (x * x * x); });
      const auto [unused1, M1] = moments_nn(ws.nodes, tab, n, [](const Real& x) { return 1 / x; });
      v["Rn"] = m2;
      v["rn"] = M3;
      v["parity"] = M1;
      break;
    }
    case Example::JacobiInvOneMinusX2: {
      const auto [R, unusedR] =
          moments_nn(ws.nodes, tab, n, [](const Real& x) { return 1 / (1 - x * x); });
      const auto [unusedr, r] =
          moments_nn(ws.nodes, tab, n, [](const Real& x) { return x / (1 - x * x); });
      v["Rn"] = R;
      v["rn"] = r;
      break;
    }
    case Example::PollaczekJacobi: {
      const Real t(atom_of(w, AtomKind::ExpInvX).a);
      const auto [R, r] = moments_nn(ws.nodes, tab, n, [&](const Real& x) { return t / x; });
      v["Rn_star"] = R;
      v["rn_star"] = r;
      break;
    }
    case Example::ShiftedJacobiPower: {
      const auto& at = atom_of(w, AtomKind::PowerShiftNeg);
      const Real t(at.a), g(at.gamma);
      const auto [A, B] = moments_nn(ws.nodes, tab, n, [&](const Real& x) { return g / (x - t); });
      v["an"] = A;
      v["bn"] = B;
      break;
    }
  }
  (void)one;
  return q;
}

std::pair<Complex, Complex> aux_reconstruct(const Workspace& ws, const AuxiliaryQuantities& q,
                                            const Complex& z) {
  const WeightSpec& w = ws.weight;
  const RecurrenceTable& tab = ws.table;
  const int n = q.n;
  const Real nn(n);
  const Real a(w.alpha), b(w.beta);
  const Real one(1);
  const Real p = tab.p1[n];
  auto val = [&](const char* k) -> Complex {
    auto it = q.values.find(k);
    if (it == q.values.end()) throw Error(ErrorCode::FamilyMismatch, std::string("missing ") + k);
    return it->second;
  };
  const Complex pref = family_prefactor(w.family, z);
  Complex A, B;

  switch (q.example) {
    case Example::LaguerreClassical:
      A = one / z;
      B = -nn / z;
      break;
    case Example::ChenMcKay: {
      const Real t(atom_of(w, AtomKind::PowerShift).a);
      const Complex R = val("Rn"), r = val("rn");
      A = (Complex(one) - R) / z + R / (z + t);
      B = -(r + nn) / z + r / (z + t);
      break;
    }
    case Example::ChenIts: {
      const Real s(atom_of(w, AtomKind::ExpInvX).a);
      A = one / z + s * val("Rn") / (z * z);
      B = -nn / z + s * val("rn") / (z * z);
      break;
    }
    case Example::LaguerreJump: {
      Complex sR, sr;
      A = Complex(0);
      B = Complex(0);
      for (std::size_t k = 0; k < q.Rnk.size(); ++k) {
        const Real t(w.jumps.points[k].t);
        if (t == 0) continue;
        sR += q.Rnk[k];
        sr += q.rnk[k];
        A += q.Rnk[k] / (z - t);
        B += q.rnk[k] / (z - t);
      }
      A += (Complex(one) - sR) / z;
      B += -(sr + nn) / z;
      break;
    }
    case Example::LaguerreFH:
      A = (Complex(one) - val("Rn")) / z + val("an");
      B = -(val("rn") + nn) / z + val("bn");
      break;
    case Example::JacobiClassical:
      A = pref * (2 * nn + 1 + a + b);
      B = pref * (nn * z - p);
      break;
    case Example::JacobiExp: {
      const Real t(atom_of(w, AtomKind::ExpLinear).a);
      const Complex R = val("Rn"), r = val("rn");
      A = R / (one - z) + (R + t) / (one + z);
      B = r / (one - z) + (r - nn) / (one + z);
      break;
    }
    case Example::SymmetricExpQuad: {
      const Real t(atom_of(w, AtomKind::ExpQuad).a);
      A = Complex(2 * t) + val("Rn") / (one - z * z);
      B = z * val("rn") / (one - z * z);
      break;
    }
    case Example::JacobiK2: {
      const Real k = sqrt(Real(atom_of(w, AtomKind::PowerOneMinusK2X2).a));
      const Real g(atom_of(w, AtomKind::PowerOneMinusK2X2).gamma);
      const Complex R = val("Rn_star"), r = val("rn_star");
      const Complex d = z * z - one / (k * k);
      A = (Complex(2 * (nn + a + g) + 1) - (2 / k) * R) / (one - z * z) - (2 / k) * R / d;
      B = z * (nn + Real(2) * r) / (one - z * z) + Real(2) * z * r / d;
      break;
    }
    case Example::JacobiInvX2: {
      const Real t(atom_of(w, AtomKind::ExpInvX2).a);
      const Complex z2 = z * z, z3 = z2 * z;
      A = pref * (Complex(2 * a + 2 * nn + 1) + 2 * t * val("Rn") / z2);
      B = pref * (2 * t * (val("rn") / z + (one / z3 - one / z) * val("parity")) + nn * z);
      break;
    }
    case Example::JacobiInvOneMinusX2: {
      const Real t(atom_of(w, AtomKind::ExpInvOneMinusX2).a);
      A = pref * (Complex(2 * a + 2 * nn + 1) + 2 * t * val("Rn") / (one - z * z));
      B = pref * (2 * t * z * val("rn") / (one - z * z) + nn * z);
      break;
    }
    case Example::JacobiJump: {
      Complex inA(2 * nn + 1 + a + b), inB = nn * z - p;
      Complex outA, outB;
      for (std::size_t k = 0; k < q.Rnk.size(); ++k) {
        const Real t(w.jumps.points[k].t);
        if (t == 1 || t == -1) continue;
        inA += q.Rnk[k] * (z + t);
        inB += q.rnk[k] * (z + t);
        outA += q.Rnk[k] / (z - t);
        outB += q.rnk[k] / (z - t);
      }
      A = pref * inA + outA;
      B = pref * inB + outB;
      break;
    }
    case Example::ShiftedJacobiClassical:
      A = pref * (2 * nn + 1 + a + b);
      B = pref * (nn * (z - one) - p);
      break;
    case Example::PollaczekJacobi: {
      const Complex R = val("Rn_star"), r = val("rn_star");
      A = R / (z * z) + (R + (2 * nn + 1 + a + b)) / (z * (one - z));
      B = r / (z * z) + (r - p - nn) / z + (r - p) / (one - z);
      break;
    }
    case Example::ShiftedJacobiPower: {
      const auto& at = atom_of(w, AtomKind::PowerShiftNeg);
      const Real t(at.a), g(at.gamma);
      const Real c = t * (1 - t);
      A = pref * (Complex(2 * nn + 1 + a + b + g) + c * val("an") / (z - t));
      B = pref * (nn * (z - one) - p + c * val("bn") / (z - t));
      break;
    }
    case Example::ShiftedJacobiJump: {
      Complex inA(2 * nn + 1 + a + b), inB = nn * (z - one) - p;
      for (std::size_t k = 0; k < q.Rnk.size(); ++k) {
        const Real t(w.jumps.points[k].t);
        inA += (t - t * t) * q.Rnk[k] / (z - t);
        inB += (t - t * t) * q.rnk[k] / (z - t);
      }
      A = pref * inA;
      B = pref * inB;
      break;
    }
    case Example::ShiftedJacobiFH: {
      const Real t(w.fh->t), g(w.fh->gamma);
      const Real kappa = 2 * nn + 1 + a + b + g;
      const Complex u = val("un"), v = val("vn");
      A = (kappa + t * u) / (one - z) + (kappa + (t - 1) * u) / z + val("an");
      B = (Complex(-nn - p) + (t - 1) * v) / z + (Complex(-p) + t * v) / (one - z) + val("bn");
      break;
    }
  }
  if (n == 0) B = Complex(0);
  return {A, B};
}

// ---- differential identities ----

double parameter_t(const WeightSpec& w, Example e) {
  switch (e) {
    case Example::SymmetricExpQuad: return atom_of(w, AtomKind::ExpQuad).a;
    case Example::ShiftedJacobiPower: return atom_of(w, AtomKind::PowerShiftNeg).a;
    case Example::ShiftedJacobiFH:
      if (!w.fh) break;
      return w.fh->t;
    default: break;
  }
  throw Error(ErrorCode::FamilyMismatch,
              std::string("no differential identity for ") + example_label(e));
}

WeightSpec with_parameter_t(const WeightSpec& w, Example e, double t) {
  WeightSpec c = w;
  switch (e) {
    case Example::SymmetricExpQuad:
    case Example::ShiftedJacobiPower: {
      const AtomKind k = e == Example::SymmetricExpQuad ? AtomKind::ExpQuad : AtomKind::PowerShiftNeg;
      for (auto& a : c.atoms)
        if (a.kind == k) a.a = t;
      break;
    }
    case Example::ShiftedJacobiFH:
      c.fh->t = t;
      break;
    default:
      throw Error(ErrorCode::FamilyMismatch,
                  std::string("no differential identity for ") + example_label(e));
  }
  return make_weight(c);
}

namespace {

struct TSnapshot {
  std::vector<Real> log_h;
  std::vector<Real> p1;
  std::vector<Real> q;
};

TSnapshot snapshot(const WeightSpec& w, int N, const NumericOptions& o) {
  const RecurrenceTable tab = build_table(w, N, o);
  TSnapshot s;
  for (int n = 0; n < N; ++n) {
    s.log_h.push_back(log(tab.h[n]));
    s.p1.push_back(tab.p1[n]);
    s.q.push_back(sub_sub_leading(tab, n));
  }
  return s;
}

}  // namespace

std::vector<DiffResult> diff_identity_residuals(const WeightSpec& w, int n_max, const DiffOptions& o) {
  const auto e = detect_example(w);
  if (!e) throw Error(ErrorCode::FamilyMismatch, "weight is not a catalogued t-family");
  const double t = parameter_t(w, *e);
  if (!(o.step > 0)) throw Error(ErrorCode::BadConfig, "step must be positive");
  if (n_max < 1) throw Error(ErrorCode::DegreeOutOfRange, "n_max must be >= 1");

  PrecisionScope scope(o.numeric.precision_bits);
  const int N = n_max + 2;
  const RecurrenceTable tab = build_table(w, N, o.numeric);
  const Workspace ws = make_workspace(w, tab, o.numeric.quad);

  // t +- h is rounded to double; divide by the spacing actually used.
  const double tp1 = t + o.step, tm1 = t - o.step, tp2 = t + o.step / 2, tm2 = t - o.step / 2;
  const TSnapshot p1 = snapshot(with_parameter_t(w, *e, tp1), N, o.numeric);
  const TSnapshot m1 = snapshot(with_parameter_t(w, *e, tm1), N, o.numeric);
  const TSnapshot p2 = snapshot(with_parameter_t(w, *e, tp2), N, o.numeric);
  const TSnapshot m2 = snapshot(with_parameter_t(w, *e, tm2), N, o.numeric);

  auto deriv = [&](auto field, int n) {
    const Real d1 = ((p1.*field)[n] - (m1.*field)[n]) / (Real(tp1) - Real(tm1));
    const Real d2 = ((p2.*field)[n] - (m2.*field)[n]) / (Real(tp2) - Real(tm2));
    const Real scale = std::max(Real(1), Real(abs(d2)));
    if (abs(d1 - d2) > Real(1e-6) * scale)
      throw Error(ErrorCode::StepTooLarge,
                  "difference quotients at step and step/2 disagree; reduce the step");
    return d2;
  };

  std::vector<DiffResult> out;
  auto push = [&](const char* name, int n, const Real& lhs, const Real& rhs) {
    DiffResult r;
    r.name = name;
    r.n = n;
    r.lhs = lhs;
    r.rhs = rhs;
    const Real scale = std::max({Real(1), Real(abs(lhs)), Real(abs(rhs))});
    r.residual = abs(lhs - rhs) / scale;
    out.push_back(std::move(r));
  };

  const Complex z_unused(Real(3), Real(1));
  for (int n = 1; n <= n_max; ++n) {
    switch (*e) {
      case Example::SymmetricExpQuad: {
        const Real tt(t), a(w.alpha);
        const auto q = aux_quantities(ws, n, *e, z_unused);
        push("log_h", n, 2 * tt * deriv(&TSnapshot::log_h, n),
             q.values.at("Rn").re - 2 * n - 1 - 2 * a);
        push("q", n, 2 * tt * deriv(&TSnapshot::q, n),
             2 * tt * tab.beta[n] * tab.beta[n - 1]);
        break;
      }
      case Example::ShiftedJacobiPower: {
        const auto q = aux_quantities(ws, n, *e, z_unused);
        push("log_h", n, deriv(&TSnapshot::log_h, n), -q.values.at("an").re);
        push("p", n, deriv(&TSnapshot::p1, n), q.values.at("bn").re);
        break;
      }
      case Example::ShiftedJacobiFH: {
        const auto q = aux_quantities(ws, n, *e, z_unused);
        push("log_h", n, deriv(&TSnapshot::log_h, n), -q.values.at("un").re);
        push("p", n, deriv(&TSnapshot::p1, n), q.values.at("vn").re);
        break;
      }
      default:
        break;
    }
  }
  return out;
}

}  // namespace lop
