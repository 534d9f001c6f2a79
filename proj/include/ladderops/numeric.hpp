#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <string>

namespace lop {

using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

// Sets the default mantissa of newly created Reals on this thread for the
// lifetime of the object. Table builders, make_workspace, campaigns and the C
// API open one; evaluations on a finished workspace run at the caller's precision.
class PrecisionScope {
public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

  unsigned bits() const { return bits_; }

private:
  unsigned bits_;
  unsigned saved_digits10_;
};

unsigned current_precision_bits();

// 2^(1-bits) for the current thread precision.
Real eps_work();

Real pi();

// Scientific notation carrying enough digits to round-trip at the current precision.
std::string to_string(const Real& x);

struct Complex {
  Real re;
  Real im;

  Complex() : re(0), im(0) {}
  Complex(const Real& r) : re(r), im(0) {}
  Complex(const Real& r, const Real& i) : re(r), im(i) {}
  Complex(int r) : re(r), im(0) {}
  Complex(double r) : re(r), im(0) {}
  Complex(double r, double i) : re(r), im(i) {}

  Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
  Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
  Complex& operator*=(const Complex& o) {
    Real r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  Complex& operator*=(const Real& s) { re *= s; im *= s; return *this; }
  Complex& operator/=(const Real& s) { re /= s; im /= s; return *this; }
  Complex& operator/=(const Complex& o);
};

inline Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
inline Complex operator+(Complex a, const Complex& b) { return a += b; }
inline Complex operator-(Complex a, const Complex& b) { return a -= b; }
inline Complex operator*(Complex a, const Complex& b) { return a *= b; }
inline Complex operator*(Complex a, const Real& s) { return a *= s; }
inline Complex operator*(const Real& s, Complex a) { return a *= s; }
inline Complex operator/(Complex a, const Complex& b) { return a /= b; }
inline Complex operator/(Complex a, const Real& s) { return a /= s; }
inline Complex operator+(Complex a, const Real& s) { a.re += s; return a; }
inline Complex operator+(const Real& s, Complex a) { a.re += s; return a; }
inline Complex operator-(Complex a, const Real& s) { a.re -= s; return a; }
inline Complex operator-(const Real& s, const Complex& a) { return {s - a.re, -a.im}; }
inline Complex operator/(const Real& s, const Complex& a) { return Complex(s) / a; }

inline Complex conj(const Complex& a) { return {a.re, -a.im}; }
inline Real norm(const Complex& a) { return a.re * a.re + a.im * a.im; }
Real abs(const Complex& a);

// Magnitude helper shared by Real and Complex code paths.
inline Real magnitude(const Real& x) { return boost::multiprecision::abs(x); }
inline Real magnitude(const Complex& x) { return abs(x); }

inline Complex two_pi_i() { return {Real(0), 2 * pi()}; }

}  // namespace lop
