#include "ladderops/numeric.hpp"

#include <cmath>
#include <ios>

namespace lop {

namespace {

unsigned digits10_for_bits(unsigned bits) {
  // Smallest digits10 whose backend mantissa covers the requested bits.
  unsigned d = static_cast<unsigned>(std::floor(bits * 0.30102999566398119521)) ;
  if (d < 2) d = 2;
  while (true) {
    Real::default_precision(d);
    Real probe;
    if (mpfr_get_prec(probe.backend().data()) >= static_cast<mpfr_prec_t>(bits)) return d;
    ++d;
  }
}

}  // namespace

PrecisionScope::PrecisionScope(unsigned bits)
    : bits_(bits), saved_digits10_(Real::default_precision()) {
  digits10_for_bits(bits);
}

PrecisionScope::~PrecisionScope() { Real::default_precision(saved_digits10_); }

unsigned current_precision_bits() {
  Real probe;
  return static_cast<unsigned>(mpfr_get_prec(probe.backend().data()));
}

Real eps_work() {
  Real e(1);
  return ldexp(e, 1 - static_cast<int>(current_precision_bits()));
}

Real pi() {
  Real r;
  mpfr_const_pi(r.backend().data(), MPFR_RNDN);
  return r;
}

std::string to_string(const Real& x) {
  const auto digits = static_cast<std::streamsize>(
      std::ceil(current_precision_bits() * 0.30102999566398119521) + 1);
  return x.str(digits, std::ios_base::scientific);
}

Complex& Complex::operator/=(const Complex& o) {
  // Smith's algorithm keeps intermediate magnitudes bounded.
  if (boost::multiprecision::abs(o.re) >= boost::multiprecision::abs(o.im)) {
    Real r = o.im / o.re;
    Real d = o.re + o.im * r;
    Real nr = (re + im * r) / d;
    im = (im - re * r) / d;
    re = std::move(nr);
  } else {
    Real r = o.re / o.im;
    Real d = o.re * r + o.im;
    Real nr = (re * r + im) / d;
    im = (im * r - re) / d;
    re = std::move(nr);
  }
  return *this;
}

Real abs(const Complex& a) { return boost::multiprecision::hypot(a.re, a.im); }

}  // namespace lop
