#pragma once

#include "ladderops/closedforms.hpp"
#include "ladderops/opcore.hpp"

#include <map>
#include <string>
#include <vector>

namespace lop {

// Each part is already multiplied by the family prefactor, so the coefficient
// is exactly the sum of its parts.
struct LadderParts {
  Complex smooth_integral;
  Complex counting_term;
  std::vector<Complex> jump_residues;
  Complex fh_term;

  Complex total() const;
};

struct LadderPair {
  Complex z;
  int n = 0;
  Complex A;
  Complex B;
  LadderParts a_parts;
  LadderParts b_parts;
};

// 1/z, 1/(1-z^2), 1/(z-z^2).
Complex family_prefactor(Family f, const Complex& z);

// Throws ZOnSupport if z is on the closed support, SingularPoint if z hits a
// prefactor pole, a jump point, the FH point or a pole of an atom's v'.
void check_ladder_point(const WeightSpec& w, const Complex& z);

// A_n, B_n for n = 0..n_max (n_max <= N-1) at one z, sharing the kernel
// evaluation across degrees.
std::vector<LadderPair> ladder_sequence(const Workspace& ws, const Complex& z, int n_max);
LadderPair ladder_pair(const Workspace& ws, int n, const Complex& z);

// Residual normalized by the largest magnitude among the terms of the identity.
struct Residual {
  Real value;
  Real scale;
};

// Lowering and raising relations for 1 <= n <= n_max (entry n-1), using a
// precomputed ladder sequence at z of length >= n_max + 1.
struct LadderResiduals {
  std::vector<Real> lowering;  // index n, n = 0..n_max (n=0 reduces to P_0' = 0)
  std::vector<Real> raising;   // index n, n = 1..n_max; entry 0 unused
};

LadderResiduals ladder_residuals(const Workspace& ws, const std::vector<LadderPair>& seq,
                                 const Complex& z, int n_max);

Real lowering_residual(const Workspace& ws, int n, const Complex& z);
Real raising_residual(const Workspace& ws, int n, const Complex& z);

struct CompatResiduals {
  Real s1;
  Real s2;
  Real s2p;  // zero and unused at n = 0
};

// (S1), (S2) for n >= 0 and (S2') for n >= 1; needs the sequence up to n+1.
CompatResiduals compat_from_sequence(const Workspace& ws, const std::vector<LadderPair>& seq,
                                     const Complex& z, int n);
CompatResiduals compat_residuals(const Workspace& ws, int n, const Complex& z);

// Forms that integrate (v'(z) - v'(x))/(z - x) directly, valid when the
// endpoint exponents are positive. For an FH weight the extra
// gamma/h int P^2 w / ((z-x)(x-t)) term is added and the FH factor stays out of v.
// When an endpoint exponent is <= 0 the endpoint integral diverges; it is then
// summed naively over the ordinary nodes and `convergent` is false.
struct AltPair {
  int n = 0;
  Complex A;
  Complex B;
  bool convergent = true;
};

std::vector<AltPair> alt_ladder_sequence(const Workspace& ws, const Complex& z, int n_max);

// Auxiliary scalars of the catalogued examples. Values that depend on z (the
// FH integrals a_n, b_n) are evaluated at the given z.
struct AuxiliaryQuantities {
  Example example = Example::LaguerreClassical;
  int n = 0;
  std::map<std::string, Complex> values;
  std::vector<Complex> Rnk;
  std::vector<Complex> rnk;
};

AuxiliaryQuantities aux_quantities(const Workspace& ws, int n, Example e, const Complex& z);

// A_n, B_n rebuilt from the auxiliary quantities through the partial-fraction
// shapes of the examples.
std::pair<Complex, Complex> aux_reconstruct(const Workspace& ws, const AuxiliaryQuantities& q,
                                            const Complex& z);

// Coefficient of x^{n-2} in P_n from the table.
Real sub_sub_leading(const RecurrenceTable& tab, int n);

// Differential identities in the deformation parameter t, by central
// differences of tables built at t +- step. Reported per identity name.
struct DiffOptions {
  double step = 0x1p-40;
  NumericOptions numeric;
};

struct DiffResult {
  std::string name;
  int n = 0;
  Real lhs;
  Real rhs;
  Real residual;
};

// Examples carrying a t: symmetric_exp_quad, shifted_jacobi_power,
// shifted_jacobi_fh. Throws FamilyMismatch otherwise, StepTooLarge when the
// difference quotient at step and step/2 disagree beyond the asymptotic regime.
std::vector<DiffResult> diff_identity_residuals(const WeightSpec& w, int n_max, const DiffOptions& o);

// The weight with its t parameter replaced.
WeightSpec with_parameter_t(const WeightSpec& w, Example e, double t);
double parameter_t(const WeightSpec& w, Example e);

}  // namespace lop
