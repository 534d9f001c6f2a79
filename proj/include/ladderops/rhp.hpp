#pragma once

#include "ladderops/opcore.hpp"

#include <array>

namespace lop {

using Mat2 = std::array<std::array<Complex, 2>, 2>;

// int P_k(x) w(x) / (x - z)^power dx, power 1 or 2.
Complex cauchy(const Workspace& ws, int k, const Complex& z, int power = 1);

struct RhpFrame {
  Complex z;
  int n = 0;
  Mat2 Y;
  Mat2 Yprime;
  Mat2 R;  // Y' times the unit-determinant adjugate of Y
  Complex dety;
};

// Y_11 and Y_21 come from an expansion of P_n in powers of z built from the
// table, independently of the recurrence used by the ladder code.
RhpFrame y_frame(const Workspace& ws, int n, const Complex& z);

Real det_residual(const RhpFrame& f);
Real trace_residual(const RhpFrame& f);

enum class CommuteKind { Orthogonal, Monomial };

// |Q_m(z) C(P_n w) - C(Q_m P_n w)| / max of the two, Q_m = P_m or x^m.
Real cauchy_commutes_residual(const Workspace& ws, int m, int n, const Complex& z, CommuteKind q);

// Largest of the above over 0 <= m <= n and both kinds of Q_m, sharing 1/(x-z).
Real cauchy_commutes_worst(const Workspace& ws, int n, const Complex& z);

// Element-wise normalized difference between R from y_frame and the family's
// closed integral formulas. Smooth weights only.
std::array<std::array<Real, 2>, 2> r_elements_residual(const Workspace& ws, int n, const Complex& z);
std::array<std::array<Real, 2>, 2> r_elements_residual(const RhpFrame& f, const Mat2& closed);

// R from the closed integral formulas (smooth weights).
Mat2 r_closed(const Workspace& ws, int n, const Complex& z);

// P_n' and P_{n-1}' rebuilt from closed-form R, against the recurrence
// derivatives; returns the larger normalized residual.
Real ladder_from_r_residual(const Workspace& ws, int n, const Complex& z);
Real ladder_from_r_residual(const Workspace& ws, const Mat2& R, int n, const Complex& z);

// Boundary values at x +- i eps against Y_+ = Y_- [[1, w], [0, 1]]; the
// largest element residual relative to the size of the row.
Real plemelj_residual(const WeightSpec& w, const RecurrenceTable& tab, const QuadOptions& q, int n,
                      double x, double eps);

}  // namespace lop
