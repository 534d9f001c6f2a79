#pragma once

#include "ladderops/numeric.hpp"
#include "ladderops/weights.hpp"

#include <optional>
#include <string>

namespace lop {

struct ClassicalValues {
  int n = 0;
  Real alpha;
  Real beta;
  Real h;
  Real p;
};

ClassicalValues laguerre_classical(int n, const Real& lambda);
ClassicalValues jacobi_classical(int n, const Real& a, const Real& b);

// prod_{j<n} j! Gamma(j + lambda + 1)
Real barnes_g_hankel(int n, const Real& lambda);

// Residuals of the two factorizations of (2n-1+a+b)(2n+1+a+b) beta_n for
// classical Jacobi, each normalized by the magnitude of that product.
std::pair<Real, Real> jacobi_factorization_residuals(int n, const Real& a, const Real& b);

// Coefficients of P_n in ascending powers for classical Laguerre, n <= 4,
// as printed expansions.
std::vector<Real> laguerre_expansion(int n, const Real& lambda);

enum class Example {
  LaguerreClassical,
  ChenMcKay,        // x^l e^{-x} (x+t)^g
  ChenIts,          // x^l e^{-x-s/x}
  LaguerreJump,     // classical Laguerre with a step factor
  LaguerreFH,       // classical Laguerre with an FH factor
  JacobiClassical,
  JacobiExp,        // e^{-tx}
  SymmetricExpQuad, // (1-x^2)^a e^{-tx^2}
  JacobiK2,         // (1-x^2)^a (1-k^2x^2)^g
  JacobiInvX2,      // (1-x^2)^a e^{-t/x^2}
  JacobiInvOneMinusX2,  // (1-x^2)^a e^{-t/(1-x^2)}
  JacobiJump,
  ShiftedJacobiClassical,
  PollaczekJacobi,  // x^a (1-x)^b e^{-t/x}
  ShiftedJacobiPower,  // x^a (1-x)^b (x-t)^g
  ShiftedJacobiJump,
  ShiftedJacobiFH,
};

std::optional<Example> detect_example(const WeightSpec& w);
const char* example_label(Example e);
std::optional<Example> example_from_label(const std::string& label);

// Closed-form divided-difference kernel of a catalogued example. Throws
// FamilyMismatch if w does not have that shape.
Complex named_kernel(Example e, const WeightSpec& w, const Complex& z, const Real& x);

}  // namespace lop
