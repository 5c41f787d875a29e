#include "wanderlab/interval.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace wanderlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMax = std::numeric_limits<double>::max();
// Below this magnitude FMA residuals may lose exactness to underflow.
constexpr double kTiny = 1e-290;

double down(double x) { return std::nextafter(x, -kInf); }
double up(double x) { return std::nextafter(x, kInf); }

double add_down(double a, double b) {
  const double s = a + b;
  if (std::isnan(s)) return -kInf;
  if (std::isinf(s)) return (std::isinf(a) || std::isinf(b)) ? s : (s > 0 ? kMax : s);
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return err < 0 ? down(s) : s;
}

double add_up(double a, double b) {
  const double s = a + b;
  if (std::isnan(s)) return kInf;
  if (std::isinf(s)) return (std::isinf(a) || std::isinf(b)) ? s : (s < 0 ? -kMax : s);
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return err > 0 ? up(s) : s;
}

double mul_down(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  const double p = a * b;
  if (std::isinf(p)) {
    if (std::isinf(a) || std::isinf(b)) return p;
    return p > 0 ? kMax : p;
  }
  if (std::fabs(p) < kTiny) return down(p);
  const double e = std::fma(a, b, -p);
  return e < 0 ? down(p) : p;
}

double mul_up(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  const double p = a * b;
  if (std::isinf(p)) {
    if (std::isinf(a) || std::isinf(b)) return p;
    return p < 0 ? -kMax : p;
  }
  if (std::fabs(p) < kTiny) return up(p);
  const double e = std::fma(a, b, -p);
  return e > 0 ? up(p) : p;
}

double div_down(double a, double b) {
  const double q = a / b;
  if (std::isnan(q)) return -kInf;
  if (std::isinf(q)) {
    if (std::isinf(a) || b == 0.0) return q;
    return q > 0 ? kMax : q;
  }
  if (q == 0.0 || std::fabs(q) < kTiny || std::isinf(b)) return down(q);
  const double r = std::fma(-q, b, a);  // a - q*b, exact
  const double sign = (r > 0) == (b > 0) ? 1.0 : -1.0;
  return (r != 0.0 && sign < 0) ? down(q) : q;
}

double div_up(double a, double b) {
  const double q = a / b;
  if (std::isnan(q)) return kInf;
  if (std::isinf(q)) {
    if (std::isinf(a) || b == 0.0) return q;
    return q < 0 ? -kMax : q;
  }
  if (q == 0.0 || std::fabs(q) < kTiny || std::isinf(b)) return up(q);
  const double r = std::fma(-q, b, a);
  const double sign = (r > 0) == (b > 0) ? 1.0 : -1.0;
  return (r != 0.0 && sign > 0) ? up(q) : q;
}

// Scratch MPFR registers at double precision, one set per thread.
struct Scratch {
  mpfr_t x;
  mpfr_t y;
  Scratch() {
    mpfr_init2(x, 53);
    mpfr_init2(y, 53);
  }
  ~Scratch() {
    mpfr_clear(x);
    mpfr_clear(y);
  }
};

Scratch& scratch() {
  thread_local Scratch s;
  return s;
}

using MpfrUnary = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);

double directed(MpfrUnary fn, double v, mpfr_rnd_t rnd) {
  if (std::isnan(v)) return rnd == MPFR_RNDD ? -kInf : kInf;
  auto& s = scratch();
  mpfr_set_d(s.x, v, MPFR_RNDN);  // exact at 53 bits
  fn(s.y, s.x, rnd);
  if (mpfr_nan_p(s.y)) return rnd == MPFR_RNDD ? -kInf : kInf;
  return mpfr_get_d(s.y, rnd);
}

Interval monotone_up(MpfrUnary fn, const Interval& x) {
  return {directed(fn, x.lo(), MPFR_RNDD), directed(fn, x.hi(), MPFR_RNDU)};
}

// Conservative test for an integer k with k*pi + offset*pi inside [a, b].
// Returns the parity of such integers found: bit 0 set for even k, bit 1 for odd.
int critical_parities(double a, double b, double offset) {
  mpfr_t pi, t;
  mpfr_init2(pi, 128);
  mpfr_init2(t, 128);
  int result = 0;
  // Lower index bound: ceil(a/pi - offset), computed with a downward bias.
  mpfr_const_pi(pi, MPFR_RNDU);
  mpfr_set_d(t, a, MPFR_RNDN);
  mpfr_div(t, t, pi, a >= 0 ? MPFR_RNDD : MPFR_RNDU);
  mpfr_sub_d(t, t, offset, MPFR_RNDD);
  mpfr_floor(t, t);
  const double k_lo = mpfr_get_d(t, MPFR_RNDD);
  mpfr_const_pi(pi, MPFR_RNDD);
  mpfr_set_d(t, b, MPFR_RNDN);
  mpfr_div(t, t, pi, b >= 0 ? MPFR_RNDU : MPFR_RNDD);
  mpfr_sub_d(t, t, offset, MPFR_RNDU);
  mpfr_ceil(t, t);
  const double k_hi = mpfr_get_d(t, MPFR_RNDU);
  mpfr_clear(pi);
  mpfr_clear(t);
  // The window [k_lo, k_hi] over-approximates the integers whose critical
  // point could lie in [a, b]; boundary candidates are tested exactly below.
  for (double k = k_lo; k <= k_hi && result != 3; k += 1.0) {
    mpfr_t c, lo, hi;
    mpfr_inits2(160, c, lo, hi, static_cast<mpfr_ptr>(nullptr));
    mpfr_const_pi(c, MPFR_RNDN);
    mpfr_mul_d(c, c, k + offset, MPFR_RNDN);
    mpfr_set_d(lo, a, MPFR_RNDN);
    mpfr_set_d(hi, b, MPFR_RNDN);
    // 160-bit pi is accurate far beyond double spacing near any k we see.
    const bool inside = mpfr_cmp(c, lo) >= 0 && mpfr_cmp(c, hi) <= 0;
    mpfr_clears(c, lo, hi, static_cast<mpfr_ptr>(nullptr));
    if (inside) {
      const long long ki = static_cast<long long>(k);
      result |= (ki % 2 == 0) ? 1 : 2;
    }
    if (k_hi - k_lo > 8) {  // wide argument: treat as covering both parities
      result = 3;
    }
  }
  return result;
}

}  // namespace

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (std::isnan(lo) || std::isnan(hi) || lo > hi) {
    throw std::invalid_argument("Interval: invalid endpoints");
  }
}

Interval Interval::hull(double a, double b) {
  return {std::min(a, b), std::max(a, b)};
}

Interval Interval::entire() { return {-kInf, kInf}; }

double Interval::mid() const {
  if (std::isinf(lo_) || std::isinf(hi_)) {
    if (std::isinf(lo_) && std::isinf(hi_)) return 0.0;
    return std::isinf(lo_) ? -kMax : kMax;
  }
  return lo_ + 0.5 * (hi_ - lo_);
}

double Interval::width() const { return add_up(hi_, -lo_); }

double Interval::mag() const { return std::max(std::fabs(lo_), std::fabs(hi_)); }

double Interval::mig() const {
  if (lo_ <= 0.0 && hi_ >= 0.0) return 0.0;
  return std::min(std::fabs(lo_), std::fabs(hi_));
}

bool Interval::is_finite() const {
  return std::isfinite(lo_) && std::isfinite(hi_);
}

Interval& Interval::operator+=(const Interval& rhs) {
  *this = Interval(add_down(lo_, rhs.lo_), add_up(hi_, rhs.hi_));
  return *this;
}

Interval& Interval::operator-=(const Interval& rhs) {
  *this = Interval(add_down(lo_, -rhs.hi_), add_up(hi_, -rhs.lo_));
  return *this;
}

Interval& Interval::operator*=(const Interval& rhs) {
  const double a = lo_, b = hi_, c = rhs.lo_, d = rhs.hi_;
  const double lo = std::min({mul_down(a, c), mul_down(a, d), mul_down(b, c),
                              mul_down(b, d)});
  const double hi =
      std::max({mul_up(a, c), mul_up(a, d), mul_up(b, c), mul_up(b, d)});
  *this = Interval(lo, hi);
  return *this;
}

Interval& Interval::operator/=(const Interval& rhs) {
  if (rhs.contains(0.0)) {
    *this = entire();
    return *this;
  }
  const double a = lo_, b = hi_, c = rhs.lo_, d = rhs.hi_;
  const double lo = std::min({div_down(a, c), div_down(a, d), div_down(b, c),
                              div_down(b, d)});
  const double hi =
      std::max({div_up(a, c), div_up(a, d), div_up(b, c), div_up(b, d)});
  *this = Interval(lo, hi);
  return *this;
}

Interval Interval::join(const Interval& other) const {
  return {std::min(lo_, other.lo_), std::max(hi_, other.hi_)};
}

Interval Interval::inflate_ulps(int ulps) const {
  double lo = lo_, hi = hi_;
  for (int i = 0; i < ulps; ++i) {
    lo = down(lo);
    hi = up(hi);
  }
  return {lo, hi};
}

std::string Interval::str() const {
  std::ostringstream os;
  os << *this;
  return os.str();
}

Interval operator+(Interval a, const Interval& b) { return a += b; }
Interval operator-(Interval a, const Interval& b) { return a -= b; }
Interval operator*(Interval a, const Interval& b) { return a *= b; }
Interval operator/(Interval a, const Interval& b) { return a /= b; }

bool operator==(const Interval& a, const Interval& b) {
  return a.lo() == b.lo() && a.hi() == b.hi();
}

std::ostream& operator<<(std::ostream& os, const Interval& x) {
  const auto old = os.precision(17);
  os << '[' << x.lo() << ", " << x.hi() << ']';
  os.precision(old);
  return os;
}

Interval sqr(const Interval& x) {
  if (x.contains(0.0)) {
    const double m = x.mag();
    return {0.0, mul_up(m, m)};
  }
  const double a = x.mig(), b = x.mag();
  return {mul_down(a, a), mul_up(b, b)};
}

Interval sqrt(const Interval& x) {
  const double lo = x.lo() <= 0.0 ? 0.0 : directed(mpfr_sqrt, x.lo(), MPFR_RNDD);
  if (x.hi() < 0.0) throw std::domain_error("sqrt of negative interval");
  return {lo, directed(mpfr_sqrt, x.hi(), MPFR_RNDU)};
}

Interval abs(const Interval& x) { return {x.mig(), x.mag()}; }

Interval exp(const Interval& x) {
  Interval r = monotone_up(mpfr_exp, x);
  return {std::max(0.0, r.lo()), r.hi()};
}

Interval expm1(const Interval& x) { return monotone_up(mpfr_expm1, x); }

Interval log(const Interval& x) {
  if (x.hi() <= 0.0) throw std::domain_error("log of non-positive interval");
  const double lo = x.lo() <= 0.0 ? -kInf : directed(mpfr_log, x.lo(), MPFR_RNDD);
  return {lo, directed(mpfr_log, x.hi(), MPFR_RNDU)};
}

Interval log1p(const Interval& x) {
  if (x.hi() <= -1.0) throw std::domain_error("log1p below -1");
  const double lo =
      x.lo() <= -1.0 ? -kInf : directed(mpfr_log1p, x.lo(), MPFR_RNDD);
  return {lo, directed(mpfr_log1p, x.hi(), MPFR_RNDU)};
}

Interval sinh(const Interval& x) { return monotone_up(mpfr_sinh, x); }

Interval cosh(const Interval& x) {
  if (x.contains(0.0)) {
    return {1.0, directed(mpfr_cosh, x.mag(), MPFR_RNDU)};
  }
  return {directed(mpfr_cosh, x.mig(), MPFR_RNDD),
          directed(mpfr_cosh, x.mag(), MPFR_RNDU)};
}

Interval asinh(const Interval& x) { return monotone_up(mpfr_asinh, x); }

Interval acosh(const Interval& x) {
  if (x.hi() < 1.0) throw std::domain_error("acosh below 1");
  const double lo = x.lo() <= 1.0 ? 0.0 : directed(mpfr_acosh, x.lo(), MPFR_RNDD);
  return {lo, directed(mpfr_acosh, x.hi(), MPFR_RNDU)};
}

Interval asin(const Interval& x) {
  if (x.lo() < -1.0 || x.hi() > 1.0) throw std::domain_error("asin outside [-1,1]");
  return monotone_up(mpfr_asin, x);
}

Interval sin(const Interval& x) {
  if (!x.is_finite()) return {-1.0, 1.0};
  const double a = directed(mpfr_sin, x.lo(), MPFR_RNDD);
  const double a_up = directed(mpfr_sin, x.lo(), MPFR_RNDU);
  const double b = directed(mpfr_sin, x.hi(), MPFR_RNDD);
  const double b_up = directed(mpfr_sin, x.hi(), MPFR_RNDU);
  double lo = std::min(a, b), hi = std::max(a_up, b_up);
  // Extrema of sin at (k + 1/2) pi: maxima for even k, minima for odd k.
  const int parities = critical_parities(x.lo(), x.hi(), 0.5);
  if (parities & 1) hi = 1.0;
  if (parities & 2) lo = -1.0;
  return {std::max(lo, -1.0), std::min(hi, 1.0)};
}

Interval cos(const Interval& x) {
  if (!x.is_finite()) return {-1.0, 1.0};
  const double a = directed(mpfr_cos, x.lo(), MPFR_RNDD);
  const double a_up = directed(mpfr_cos, x.lo(), MPFR_RNDU);
  const double b = directed(mpfr_cos, x.hi(), MPFR_RNDD);
  const double b_up = directed(mpfr_cos, x.hi(), MPFR_RNDU);
  double lo = std::min(a, b), hi = std::max(a_up, b_up);
  // Extrema of cos at k pi: maxima for even k, minima for odd k.
  const int parities = critical_parities(x.lo(), x.hi(), 0.0);
  if (parities & 1) hi = 1.0;
  if (parities & 2) lo = -1.0;
  return {std::max(lo, -1.0), std::min(hi, 1.0)};
}

Interval max(const Interval& a, const Interval& b) {
  return {std::max(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
}

Interval min(const Interval& a, const Interval& b) {
  return {std::min(a.lo(), b.lo()), std::min(a.hi(), b.hi())};
}

Interval pi_interval() {
  mpfr_t p;
  mpfr_init2(p, 53);
  mpfr_const_pi(p, MPFR_RNDD);
  const double lo = mpfr_get_d(p, MPFR_RNDD);
  mpfr_const_pi(p, MPFR_RNDU);
  const double hi = mpfr_get_d(p, MPFR_RNDU);
  mpfr_clear(p);
  return {lo, hi};
}

Interval ln2_interval() {
  mpfr_t p;
  mpfr_init2(p, 53);
  mpfr_const_log2(p, MPFR_RNDD);
  const double lo = mpfr_get_d(p, MPFR_RNDD);
  mpfr_const_log2(p, MPFR_RNDU);
  const double hi = mpfr_get_d(p, MPFR_RNDU);
  mpfr_clear(p);
  return {lo, hi};
}

double exp_down(double x) { return std::max(0.0, directed(mpfr_exp, x, MPFR_RNDD)); }
double exp_up(double x) { return directed(mpfr_exp, x, MPFR_RNDU); }
double log_down(double x) { return directed(mpfr_log, x, MPFR_RNDD); }
double log_up(double x) { return directed(mpfr_log, x, MPFR_RNDU); }

Interval CInterval::modulus() const { return sqrt(sqr(re) + sqr(im)); }

CInterval operator+(const CInterval& a, const CInterval& b) {
  return {a.re + b.re, a.im + b.im};
}

CInterval operator-(const CInterval& a, const CInterval& b) {
  return {a.re - b.re, a.im - b.im};
}

CInterval operator*(const CInterval& a, const CInterval& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

CInterval operator*(const Interval& a, const CInterval& b) {
  return {a * b.re, a * b.im};
}

CInterval sinh(const CInterval& z) {
  return {sinh(z.re) * cos(z.im), cosh(z.re) * sin(z.im)};
}

CInterval cosh(const CInterval& z) {
  return {cosh(z.re) * cos(z.im), sinh(z.re) * sin(z.im)};
}

}  // namespace wanderlab
