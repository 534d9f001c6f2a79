#pragma once

#include "ladderops/error.hpp"
#include "ladderops/numeric.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lop {

enum class Family { Laguerre, Jacobi, ShiftedJacobi };

enum class AtomKind {
  ExpLinear,          // e^{-c x}
  PowerShift,         // (x + c)^gamma
  ExpInvX,            // e^{-s / x}
  ExpQuad,            // e^{-t x^2}
  ExpInvX2,           // e^{-t / x^2}
  ExpInvOneMinusX2,   // e^{-t / (1 - x^2)}
  PowerOneMinusK2X2,  // (1 - k2 x^2)^gamma
  PowerShiftNeg,      // (x - t)^gamma, t below the support
};

struct DeformationAtom {
  AtomKind kind = AtomKind::ExpLinear;
  // First parameter is c, s, t or k2 depending on kind; second is gamma when present.
  double a = 0;
  double gamma = 0;

  static DeformationAtom exp_linear(double c) { return {AtomKind::ExpLinear, c, 0}; }
  static DeformationAtom power_shift(double c, double g) { return {AtomKind::PowerShift, c, g}; }
  static DeformationAtom exp_inv_x(double s) { return {AtomKind::ExpInvX, s, 0}; }
  static DeformationAtom exp_quad(double t) { return {AtomKind::ExpQuad, t, 0}; }
  static DeformationAtom exp_inv_x2(double t) { return {AtomKind::ExpInvX2, t, 0}; }
  static DeformationAtom exp_inv_one_minus_x2(double t) {
    return {AtomKind::ExpInvOneMinusX2, t, 0};
  }
  static DeformationAtom power_one_minus_k2x2(double k2, double g) {
    return {AtomKind::PowerOneMinusK2X2, k2, g};
  }
  static DeformationAtom power_shift_neg(double t, double g) {
    return {AtomKind::PowerShiftNeg, t, g};
  }

  bool operator==(const DeformationAtom&) const = default;
};

struct JumpPoint {
  double t = 0;
  double omega = 0;
  bool operator==(const JumpPoint&) const = default;
};

// Step factor omega0 + sum_k omega_k theta(x - t_k).
struct Jumps {
  double omega0 = 1;
  std::vector<JumpPoint> points;
  bool operator==(const Jumps&) const = default;
};

// |x - t|^gamma (A + B theta(x - t)).
struct FisherHartwig {
  double t = 0;
  double gamma = 1;
  double A = 1;
  double B = 0;
  bool operator==(const FisherHartwig&) const = default;
};

// Parameters are held as doubles so a spec is independent of the working
// precision; every evaluation converts them exactly.
struct WeightSpec {
  Family family = Family::Laguerre;
  double lambda = 0;  // Laguerre
  double alpha = 0;   // Jacobi: (1-x)^alpha, shifted Jacobi: x^alpha
  double beta = 0;    // Jacobi: (1+x)^beta, shifted Jacobi: (1-x)^beta
  std::vector<DeformationAtom> atoms;
  Jumps jumps;
  std::optional<FisherHartwig> fh;

  bool operator==(const WeightSpec&) const = default;
};

// Validates and returns the spec; throws Error on violated invariants.
WeightSpec make_weight(WeightSpec raw);

WeightSpec laguerre(double lambda, std::vector<DeformationAtom> extra = {});
WeightSpec jacobi(double alpha, double beta, std::vector<DeformationAtom> atoms = {});
WeightSpec shifted_jacobi(double alpha, double beta, std::vector<DeformationAtom> atoms = {});

bool has_jumps(const WeightSpec& w);
bool has_fh(const WeightSpec& w);
// No jumps and no FH factor.
bool is_smooth(const WeightSpec& w);

double support_lo(const WeightSpec& w);
// +infinity for Laguerre.
double support_hi(const WeightSpec& w);
bool bounded_support(const WeightSpec& w);

// Exponent of the algebraic factor at the left/right end of the support.
double left_exponent(const WeightSpec& w);
double right_exponent(const WeightSpec& w);

// Points where Theorem prefactors, jumps, FH or atoms have poles; used to keep
// sample points away.
std::vector<double> pole_points(const WeightSpec& w);

// Full weight including step and FH factors. Right limit at jump points.
Real eval_weight(const WeightSpec& w, const Real& x);
// Weight without the step factor (FH factor kept).
Real eval_weight_no_step(const WeightSpec& w, const Real& x);
// Step factor value at x.
Real eval_step(const WeightSpec& w, const Real& x);
// Product of deformation atoms only.
Real eval_atoms(const WeightSpec& w, const Real& x);

// Log-derivative of the endpoint factors and atoms (jumps and FH excluded).
// The complex overload is the analytic continuation and does no support checks.
Real eval_vprime(const WeightSpec& w, const Real& x);
Complex eval_vprime(const WeightSpec& w, const Complex& z);
// Same sum without support checks, for node loops.
Real eval_vprime_unchecked(const WeightSpec& w, const Real& x);
// Atoms only (endpoint factors excluded).
Real eval_atoms_vprime(const WeightSpec& w, const Real& x);
Complex eval_atoms_vprime(const WeightSpec& w, const Complex& z);

// g(y) in F(y) = g(y) v'(y): y, 1-y^2, y-y^2.
Complex family_g(Family f, const Complex& y);
Real family_g(Family f, const Real& y);

// (F(z) - F(x)) / (z - x) with F(y) = g(y) v'(y).
Complex kernel_divdiff(const WeightSpec& w, const Complex& z, const Real& x);
// Same, with F(z) supplied by the caller and no checks on x.
Complex kernel_divdiff_fast(const WeightSpec& w, const Complex& z, const Complex& fz, const Real& x);

bool on_closed_support(const WeightSpec& w, const Complex& z);

WeightSpec weight_from_json(const std::string& text);
std::string weight_to_json(const WeightSpec& w);

const char* family_name(Family f);
const char* atom_name(AtomKind k);

}  // namespace lop
