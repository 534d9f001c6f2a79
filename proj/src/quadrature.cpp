#include "ladderops/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace lop {

namespace {

using boost::multiprecision::abs;
using boost::multiprecision::hypot;
using boost::multiprecision::pow;
using boost::multiprecision::sqrt;
using boost::multiprecision::tgamma;

// Recurrence coefficients of the monic polynomials for (1-u)^a (1+u)^b.
void reference_recurrence(unsigned m, const Real& a, const Real& b, std::vector<Real>& al,
                          std::vector<Real>& be) {
  al.assign(m, Real(0));
  be.assign(m, Real(0));
  const Real ab = a + b;
  al[0] = (b - a) / (ab + 2);
  for (unsigned k = 1; k < m; ++k) {
    const Real s = 2 * Real(k) + ab;
    al[k] = (b * b - a * a) / (s * (s + 2));
  }
  if (m > 1) be[1] = 4 * (1 + a) * (1 + b) / ((2 + ab) * (2 + ab) * (3 + ab));
  for (unsigned k = 2; k < m; ++k) {
    const Real kk(k);
    const Real s = 2 * kk + ab;
    be[k] = 4 * kk * (kk + a) * (kk + b) * (kk + ab) / (s * s * (s + 1) * (s - 1));
  }
}

// Eigenvalues of the symmetric tridiagonal matrix (implicit QL).
std::vector<Real> tridiagonal_eigenvalues(std::vector<Real> d, std::vector<Real> e) {
  const int n = static_cast<int>(d.size());
  e.push_back(Real(0));
  const Real eps = eps_work();
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const Real dd = abs(d[m]) + abs(d[m + 1]);
        if (abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (++iter > 200) throw Error(ErrorCode::EvaluationFailure, "QL iteration did not converge");
        Real g = (d[l + 1] - d[l]) / (2 * e[l]);
        Real r = hypot(g, Real(1));
        g = d[m] - d[l] + e[l] / (g + (g >= 0 ? abs(r) : -abs(r)));
        Real s(1), c(1), p(0);
        int i;
        bool underflow = false;
        for (i = m - 1; i >= l; --i) {
          Real f = s * e[i];
          const Real bb = c * e[i];
          r = hypot(f, g);
          e[i + 1] = r;
          if (r == 0) {
            d[i + 1] -= p;
            e[m] = 0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2 * c * bb;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - bb;
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0;
      }
    } while (m != l);
  }
  std::sort(d.begin(), d.end());
  return d;
}

struct Anchor {
  double p;
  double exponent;
};

struct ShiftPoint {
  double p;
  int orientation;  // divisor = orientation * (x - p)
};

}  // namespace

std::size_t node_count(const Rules& rules) {
  std::size_t n = 0;
  for (const auto& r : rules) n += r.nodes.size();
  return n;
}

GaussRule gauss_jacobi(unsigned m, const Real& a, const Real& b) {
  if (m < 2) throw Error(ErrorCode::BadNodeCount, "need at least 2 nodes per segment");
  std::vector<Real> al, be;
  reference_recurrence(m + 1, a, b, al, be);
  std::vector<Real> diag(al.begin(), al.begin() + m);
  std::vector<Real> off(m - 1);
  for (unsigned k = 1; k < m; ++k) off[k - 1] = sqrt(be[k]);
  GaussRule rule;
  rule.x = tridiagonal_eigenvalues(diag, off);

  const Real mu0 = pow(Real(2), a + b + 1) * tgamma(a + 1) * tgamma(b + 1) / tgamma(a + b + 2);
  std::vector<Real> h(m);
  h[0] = mu0;
  for (unsigned k = 1; k < m; ++k) h[k] = h[k - 1] * be[k];

  rule.w.resize(m);
  for (unsigned i = 0; i < m; ++i) {
    Real& x = rule.x[i];
    for (int it = 0; it < 3; ++it) {
      Real p0(1), p1 = x - al[0], d0(0), d1(1);
      for (unsigned k = 1; k < m; ++k) {
        Real p2 = (x - al[k]) * p1 - be[k] * p0;
        Real d2 = p1 + (x - al[k]) * d1 - be[k] * d0;
        p0 = std::move(p1);
        p1 = std::move(p2);
        d0 = std::move(d1);
        d1 = std::move(d2);
      }
      x -= p1 / d1;
    }
    Real s = 1 / h[0];
    Real p0(1), p1 = x - al[0];
    for (unsigned k = 1; k < m; ++k) {
      s += p1 * p1 / h[k];
      Real p2 = (x - al[k]) * p1 - be[k] * p0;
      p0 = std::move(p1);
      p1 = std::move(p2);
    }
    rule.w[i] = 1 / s;
  }
  return rule;
}

double laguerre_truncation(const WeightSpec& w, int degree_hint, unsigned bits) {
  double c = 0, q = 0, growth = degree_hint + std::max(w.lambda, 0.0) + 2;
  for (const auto& a : w.atoms) {
    if (a.kind == AtomKind::ExpLinear) c += a.a;
    if (a.kind == AtomKind::ExpQuad) q += a.a;
    if (a.kind == AtomKind::PowerShift || a.kind == AtomKind::PowerShiftNeg)
      growth += std::max(a.gamma, 0.0);
  }
  if (w.fh) growth += w.fh->gamma;
  const double target = bits * std::log(2.0) + 40;
  double X = 64;
  while (c * X + q * X * X - growth * std::log(X) < target) X += 8;
  return X;
}

Rules build_rules(const WeightSpec& w, const QuadOptions& opts, MeasureShift shift) {
  if (opts.nodes < 2) throw Error(ErrorCode::BadNodeCount, "need at least 2 nodes per segment");
  const unsigned bits = current_precision_bits();
  const double lo = support_lo(w);
  double hi = support_hi(w);

  if (!bounded_support(w)) {
    double total = w.jumps.omega0;
    for (const auto& p : w.jumps.points) total += p.omega;
    if (total == 0 && !w.jumps.points.empty()) {
      hi = w.jumps.points.back().t;
    } else {
      hi = opts.truncation > 0 ? opts.truncation
                               : laguerre_truncation(w, opts.degree_hint, bits);
      if (!w.jumps.points.empty()) hi = std::max(hi, w.jumps.points.back().t + 64);
    }
  }

  std::vector<Anchor> anchors{{lo, left_exponent(w)}};
  if (bounded_support(w)) anchors.push_back({hi, right_exponent(w)});
  if (w.fh) {
    anchors.push_back({w.fh->t, w.fh->gamma});
  }
  // Summed in working precision: double sums such as lambda + gamma - 1 would
  // perturb the absorbed factor at the 1e-17 level.
  auto exponent_at = [&](double p) {
    Real e(0);
    for (const auto& a : anchors)
      if (a.p == p) e += Real(a.exponent);
    return e;
  };

  std::vector<ShiftPoint> shifts;
  if (shift.left) shifts.push_back({lo, 1});
  if (shift.right) {
    if (!bounded_support(w)) throw Error(ErrorCode::FamilyMismatch, "no right endpoint on [0,inf)");
    shifts.push_back({hi, -1});
  }
  if (shift.fh) {
    if (!w.fh) throw Error(ErrorCode::FamilyMismatch, "weight has no FH factor");
    shifts.push_back({w.fh->t, 1});
  }

  std::vector<double> bps{lo, hi};
  for (const auto& p : w.jumps.points)
    if (p.t > lo && p.t < hi) bps.push_back(p.t);
  if (w.fh && w.fh->t > lo && w.fh->t < hi) bps.push_back(w.fh->t);
  if (!bounded_support(w)) {
    for (double x = 1; x < hi && x <= 64; x *= 2) bps.push_back(x);
    for (double x = 128; x < hi; x += 64) bps.push_back(x);
  }

  // Geometric grading toward points where an atom vanishes faster than any power.
  const double ln2bits = (bits + 40) * std::log(2.0);
  auto grade = [&](double p, double floor_dist, int dir) {
    for (double d = 0.5; ; d *= 0.5) {
      const double x = p + dir * d;
      if (x > lo && x < hi) bps.push_back(x);
      if (d < floor_dist) break;
    }
  };
  for (const auto& a : w.atoms) {
    if (a.a <= 0) continue;
    switch (a.kind) {
      case AtomKind::ExpInvX:
        grade(0, a.a / ln2bits, 1);
        break;
      case AtomKind::ExpInvX2:
        grade(0, std::sqrt(a.a / ln2bits), 1);
        if (w.family == Family::Jacobi) grade(0, std::sqrt(a.a / ln2bits), -1);
        break;
      case AtomKind::ExpInvOneMinusX2:
        grade(1, a.a / (2 * ln2bits), -1);
        if (w.family == Family::Jacobi) grade(-1, a.a / (2 * ln2bits), 1);
        break;
      default:
        break;
    }
  }
  for (double x : opts.extra_breakpoints)
    if (x > lo && x < hi) bps.push_back(x);
  if (w.family == Family::Jacobi) {
    for (const auto& a : w.atoms)
      if (a.kind == AtomKind::ExpInvX2 && a.a > 0) bps.push_back(0.0);
  }

  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

  std::map<std::pair<Real, Real>, GaussRule> cache;
  Rules rules;
  for (std::size_t s = 0; s + 1 < bps.size(); ++s) {
    const double a = bps[s], b = bps[s + 1];
    const Real mid = (Real(a) + Real(b)) / 2;
    Real step = eval_step(w, mid);
    if (step == 0) continue;
    if (w.fh) {
      const double side = mid >= Real(w.fh->t) ? w.fh->A + w.fh->B : w.fh->A;
      if (side == 0) continue;
    }
    const Real eL_full = exponent_at(a), eR_full = exponent_at(b);
    Real eL = eL_full, eR = eR_full;
    Real multiplier = step;
    std::vector<double> free_shifts;
    for (const auto& sp : shifts) {
      const int sign = sp.orientation * (mid > Real(sp.p) ? 1 : -1);
      if (sign < 0) multiplier = -multiplier;
      if (sp.p == a) {
        eL -= 1;
      } else if (sp.p == b) {
        eR -= 1;
      } else {
        free_shifts.push_back(sp.p);
      }
    }
    if (eL <= -1 || eR <= -1)
      throw Error(ErrorCode::ExponentOutOfRange,
                  "shifted measure leaves a non-integrable endpoint exponent");

    auto key = std::make_pair(eR, eL);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, gauss_jacobi(opts.nodes, eR, eL)).first;
    const GaussRule& ref = it->second;

    QuadRule r;
    r.lo = Real(a);
    r.hi = Real(b);
    r.left_exponent = static_cast<double>(eL);
    r.right_exponent = static_cast<double>(eR);
    r.multiplier = multiplier;
    const Real half = (r.hi - r.lo) / 2;
    const Real scale = pow(half, 1 + eL + eR);
    r.nodes.resize(ref.x.size());
    r.weights.resize(ref.x.size());
    for (std::size_t i = 0; i < ref.x.size(); ++i) {
      const Real dl = half * (1 + ref.x[i]);
      const Real dr = half * (1 - ref.x[i]);
      const Real x = r.lo + dl;
      Real rem = eval_weight_no_step(w, x);
      if (eL_full != 0) rem /= pow(dl, eL_full);
      if (eR_full != 0) rem /= pow(dr, eR_full);
      for (double p : free_shifts) rem /= abs(x - Real(p));
      r.nodes[i] = x;
      r.weights[i] = ref.w[i] * scale * rem;
    }
    rules.push_back(std::move(r));
  }
  if (rules.empty()) throw Error(ErrorCode::NegativeWeight, "weight vanishes on every segment");
  return rules;
}

}  // namespace lop
