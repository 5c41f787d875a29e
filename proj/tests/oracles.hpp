#pragma once

// Independent reference computations for the tests. Everything here uses
// Boost.Multiprecision (MPFR backend) or exact rationals and none of the
// library's own arithmetic, so agreement is a genuine cross-check.

#include <cmath>
#include <complex>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace oracle {

using Big = boost::multiprecision::mpfr_float;

/// Sets the working precision (decimal digits) for the enclosing scope.
class Precision {
 public:
  explicit Precision(unsigned digits10) : saved_(Big::default_precision()) {
    Big::default_precision(digits10);
  }
  ~Precision() { Big::default_precision(saved_); }
  Precision(const Precision&) = delete;
  Precision& operator=(const Precision&) = delete;

 private:
  unsigned saved_;
};

inline Big pi() { return boost::math::constants::pi<Big>(); }
inline Big lambda_of(long K) { return Big(K) * pi(); }

/// Minimal complex type over Big (std::complex is unspecified for it).
struct BigC {
  Big re, im;
  BigC() : re(0), im(0) {}
  BigC(Big r, Big i) : re(std::move(r)), im(std::move(i)) {}
  explicit BigC(std::complex<double> z) : re(z.real()), im(z.imag()) {}
  std::complex<double> to_double() const {
    return {static_cast<double>(re), static_cast<double>(im)};
  }
};
inline BigC operator+(const BigC& a, const BigC& b) { return {a.re + b.re, a.im + b.im}; }
inline BigC operator-(const BigC& a, const BigC& b) { return {a.re - b.re, a.im - b.im}; }
inline BigC operator*(const BigC& a, const BigC& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline BigC operator/(const BigC& a, const BigC& b) {
  const Big d = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
inline Big abs(const BigC& a) { return sqrt(a.re * a.re + a.im * a.im); }

inline BigC sinh(const BigC& z) {
  return {sinh(z.re) * cos(z.im), cosh(z.re) * sin(z.im)};
}
inline BigC cosh(const BigC& z) {
  return {cosh(z.re) * cos(z.im), sinh(z.re) * sin(z.im)};
}

/// a_n = acosh(floor(K cosh(n pi)) / K), with enough digits that the floor
/// is exact for n <= 500.
inline Big anchor(long n, long K) {
  Precision p(900);
  const Big c = boost::multiprecision::cosh(Big(n) * pi());
  const Big fl = floor(Big(K) * c);
  return acosh(fl / Big(K));
}

/// cosh(lambda sinh z).
inline BigC prototype(const BigC& z, const Big& lambda) {
  const BigC s = sinh(z);
  return cosh(BigC(lambda * s.re, lambda * s.im));
}

/// d/dz cosh(lambda sinh z) = lambda cosh(z) sinh(lambda sinh z).
inline BigC prototype_derivative(const BigC& z, const Big& lambda) {
  const BigC s = sinh(z);
  const BigC inner = sinh(BigC(lambda * s.re, lambda * s.im));
  const BigC c = cosh(z);
  return BigC(lambda, 0) * c * inner;
}

}  // namespace oracle
