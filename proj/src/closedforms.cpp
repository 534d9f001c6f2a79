#include "ladderops/closedforms.hpp"

#include <array>

namespace lop {

using boost::multiprecision::abs;
using boost::multiprecision::pow;
using boost::multiprecision::sqrt;
using boost::multiprecision::tgamma;

ClassicalValues laguerre_classical(int n, const Real& lambda) {
  if (!(lambda > -1)) throw Error(ErrorCode::ExponentOutOfRange, "lambda must exceed -1");
  if (n < 0) throw Error(ErrorCode::DegreeOutOfRange, "n must be >= 0");
  const Real nn(n);
  ClassicalValues v;
  v.n = n;
  v.alpha = 2 * nn + lambda + 1;
  v.beta = nn * (nn + lambda);
  v.h = tgamma(nn + 1) * tgamma(nn + lambda + 1);
  v.p = -nn * (nn + lambda);
  return v;
}

ClassicalValues jacobi_classical(int n, const Real& a, const Real& b) {
  if (!(a > -1) || !(b > -1)) throw Error(ErrorCode::ExponentOutOfRange, "alpha, beta must exceed -1");
  if (n < 0) throw Error(ErrorCode::DegreeOutOfRange, "n must be >= 0");
  const Real ab = a + b;
  auto beta_at = [&](int k) -> Real {
    if (k == 0) return Real(0);
    const Real kk(k);
    if (k == 1) return 4 * (1 + a) * (1 + b) / ((2 + ab) * (2 + ab) * (3 + ab));
    const Real s = 2 * kk + ab;
    return 4 * kk * (kk + a) * (kk + b) * (kk + ab) / (s * s * (s + 1) * (s - 1));
  };
  ClassicalValues v;
  v.n = n;
  const Real nn(n);
  if (n == 0) {
    v.alpha = (b - a) / (ab + 2);
    v.p = Real(0);
  } else {
    v.alpha = (b * b - a * a) / ((2 * nn + ab) * (2 * nn + 2 + ab));
    v.p = nn * (a - b) / (2 * nn + ab);
  }
  v.beta = beta_at(n);
  Real h = pow(Real(2), ab + 1) * tgamma(a + 1) * tgamma(b + 1) / tgamma(ab + 2);
  for (int k = 1; k <= n; ++k) h *= beta_at(k);
  v.h = h;
  return v;
}

Real barnes_g_hankel(int n, const Real& lambda) {
  Real d(1);
  for (int j = 0; j < n; ++j) d *= tgamma(Real(j + 1)) * tgamma(Real(j) + lambda + 1);
  return d;
}

std::pair<Real, Real> jacobi_factorization_residuals(int n, const Real& a, const Real& b) {
  const auto v = jacobi_classical(n, a, b);
  const Real nn(n);
  const Real mid = (2 * nn - 1 + a + b) * (2 * nn + 1 + a + b) * v.beta;
  const Real left = (nn + 2 * a - v.p) * (nn - v.p);
  const Real right = (nn + 2 * b + v.p) * (nn + v.p);
  const Real scale = std::max(abs(mid), Real(1));
  return {abs(left - mid) / scale, abs(right - mid) / scale};
}

std::vector<Real> laguerre_expansion(int n, const Real& l) {
  switch (n) {
    case 0: return {Real(1)};
    case 1: return {-(l + 1), Real(1)};
    case 2: return {(l + 1) * (l + 2), -2 * (l + 2), Real(1)};
    case 3:
      return {-(l + 1) * (l + 2) * (l + 3), 3 * (l + 2) * (l + 3), -3 * (l + 3), Real(1)};
    case 4:
      return {(l + 1) * (l + 2) * (l + 3) * (l + 4), -4 * (l + 2) * (l + 3) * (l + 4),
              6 * (l + 3) * (l + 4), -4 * (l + 4), Real(1)};
    default:
      throw Error(ErrorCode::DegreeOutOfRange, "expansions are tabulated for n <= 4");
  }
}

namespace {

struct LabelEntry {
  Example e;
  const char* label;
};

const std::array<LabelEntry, 17> kLabels{{
    {Example::LaguerreClassical, "laguerre_classical"},
    {Example::ChenMcKay, "chen_mckay"},
    {Example::ChenIts, "chen_its"},
    {Example::LaguerreJump, "laguerre_jump"},
    {Example::LaguerreFH, "laguerre_fh"},
    {Example::JacobiClassical, "jacobi_classical"},
    {Example::JacobiExp, "jacobi_exp"},
    {Example::SymmetricExpQuad, "symmetric_exp_quad"},
    {Example::JacobiK2, "jacobi_k2"},
    {Example::JacobiInvX2, "jacobi_inv_x2"},
    {Example::JacobiInvOneMinusX2, "jacobi_inv_one_minus_x2"},
    {Example::JacobiJump, "jacobi_jump"},
    {Example::ShiftedJacobiClassical, "shifted_jacobi_classical"},
    {Example::PollaczekJacobi, "pollaczek_jacobi"},
    {Example::ShiftedJacobiPower, "shifted_jacobi_power"},
    {Example::ShiftedJacobiJump, "shifted_jacobi_jump"},
    {Example::ShiftedJacobiFH, "shifted_jacobi_fh"},
}};

bool only(const WeightSpec& w, std::initializer_list<AtomKind> kinds) {
  if (w.atoms.size() != kinds.size()) return false;
  std::vector<bool> used(w.atoms.size(), false);
  for (AtomKind k : kinds) {
    bool found = false;
    for (std::size_t i = 0; i < w.atoms.size(); ++i)
      if (!used[i] && w.atoms[i].kind == k) {
        used[i] = found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

const DeformationAtom& find_atom(const WeightSpec& w, AtomKind k) {
  for (const auto& a : w.atoms)
    if (a.kind == k) return a;
  throw Error(ErrorCode::FamilyMismatch, std::string("weight lacks atom ") + atom_name(k));
}

bool unit_exp(const WeightSpec& w) {
  for (const auto& a : w.atoms)
    if (a.kind == AtomKind::ExpLinear && a.a != 1) return false;
  return true;
}

}  // namespace

const char* example_label(Example e) {
  for (const auto& l : kLabels)
    if (l.e == e) return l.label;
  return "?";
}

std::optional<Example> example_from_label(const std::string& label) {
  for (const auto& l : kLabels)
    if (label == l.label) return l.e;
  return std::nullopt;
}

std::optional<Example> detect_example(const WeightSpec& w) {
  const bool jumps = has_jumps(w), fh = has_fh(w);
  if (jumps && fh) return std::nullopt;
  switch (w.family) {
    case Family::Laguerre:
      if (!unit_exp(w)) return std::nullopt;
      if (only(w, {AtomKind::ExpLinear})) {
        if (jumps) return Example::LaguerreJump;
        if (fh) return Example::LaguerreFH;
        return Example::LaguerreClassical;
      }
      if (jumps || fh) return std::nullopt;
      if (only(w, {AtomKind::ExpLinear, AtomKind::PowerShift})) return Example::ChenMcKay;
      if (only(w, {AtomKind::ExpLinear, AtomKind::ExpInvX})) return Example::ChenIts;
      return std::nullopt;
    case Family::Jacobi:
      if (w.atoms.empty()) {
        if (jumps) return Example::JacobiJump;
        if (fh) return std::nullopt;
        return Example::JacobiClassical;
      }
      if (jumps || fh) return std::nullopt;
      if (only(w, {AtomKind::ExpLinear})) return Example::JacobiExp;
      if (w.alpha != w.beta) return std::nullopt;
      if (only(w, {AtomKind::ExpQuad})) return Example::SymmetricExpQuad;
      if (only(w, {AtomKind::PowerOneMinusK2X2})) return Example::JacobiK2;
      if (only(w, {AtomKind::ExpInvX2})) return Example::JacobiInvX2;
      if (only(w, {AtomKind::ExpInvOneMinusX2})) return Example::JacobiInvOneMinusX2;
      return std::nullopt;
    case Family::ShiftedJacobi:
      if (w.atoms.empty()) {
        if (jumps) return Example::ShiftedJacobiJump;
        if (fh) return Example::ShiftedJacobiFH;
        return Example::ShiftedJacobiClassical;
      }
      if (jumps || fh) return std::nullopt;
      if (only(w, {AtomKind::ExpInvX})) return Example::PollaczekJacobi;
      if (only(w, {AtomKind::PowerShiftNeg})) return Example::ShiftedJacobiPower;
      return std::nullopt;
  }
  return std::nullopt;
}

Complex named_kernel(Example e, const WeightSpec& w, const Complex& z, const Real& x) {
  const auto detected = detect_example(w);
  if (!detected || *detected != e)
    throw Error(ErrorCode::FamilyMismatch,
                std::string("weight does not have the shape of ") + example_label(e));
  const Real a(w.alpha), b(w.beta);
  switch (e) {
    case Example::LaguerreClassical:
    case Example::LaguerreJump:
    case Example::LaguerreFH:
      return Complex(1);
    case Example::ChenMcKay: {
      const auto& at = find_atom(w, AtomKind::PowerShift);
      const Real t(at.a), g(at.gamma);
      return Real(1) - g * t / ((x + t) * (z + t));
    }
    case Example::ChenIts: {
      const Real s(find_atom(w, AtomKind::ExpInvX).a);
      return Real(1) + s / (z * x);
    }
    case Example::JacobiClassical:
    case Example::JacobiJump:
    case Example::ShiftedJacobiClassical:
    case Example::ShiftedJacobiJump:
      return Complex(a + b);
    case Example::JacobiExp: {
      const Real t(find_atom(w, AtomKind::ExpLinear).a);
      return -t * (z + x) + (a + b);
    }
    case Example::SymmetricExpQuad: {
      const Real t(find_atom(w, AtomKind::ExpQuad).a);
      return Real(-2) * t * (z * z + z * x + x * x - Real(1)) + 2 * a;
    }
    case Example::JacobiK2: {
      const auto& at = find_atom(w, AtomKind::PowerOneMinusK2X2);
      const Real k = sqrt(Real(at.a)), g(at.gamma);
      const Real ik = 1 / k;
      return 2 * (a + g) +
             g * (1 - 1 / Real(at.a)) *
                 (Real(1) / ((z - ik) * (x - ik)) + Real(1) / ((z + ik) * (x + ik)));
    }
    case Example::JacobiInvX2: {
      const Real t(find_atom(w, AtomKind::ExpInvX2).a);
      const Complex z2 = z * z, z3 = z2 * z;
      return 2 * a + 2 * t * (Real(1) / (z * (x * x * x)) + Real(1) / (z2 * (x * x)) +
                              (Real(1) / z3 - Real(1) / z) / x);
    }
    case Example::JacobiInvOneMinusX2: {
      const Real t(find_atom(w, AtomKind::ExpInvOneMinusX2).a);
      return 2 * a + 2 * t * (Real(1) + z * x) / ((Real(1) - z * z) * (1 - x * x));
    }
    case Example::PollaczekJacobi: {
      const Real t(find_atom(w, AtomKind::ExpInvX).a);
      return t / (x * z) + (a + b);
    }
    case Example::ShiftedJacobiPower: {
      const auto& at = find_atom(w, AtomKind::PowerShiftNeg);
      const Real t(at.a), g(at.gamma);
      return (a + b + g) + g * t * (1 - t) / ((z - t) * (x - t));
    }
    case Example::ShiftedJacobiFH:
      return Complex(a + b);
  }
  return Complex(0);
}

}  // namespace lop
