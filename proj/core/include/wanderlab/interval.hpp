#pragma once

// Certified interval arithmetic over doubles.
//
// Basic operations use error-free transformations (TwoSum, FMA residuals)
// to detect inexact results and step outward by one ulp only when needed.
// Transcendental endpoints are evaluated by MPFR at 53 bits with directed
// rounding, so every enclosure is rigorous, not ulp-padded guesswork.

#include <complex>
#include <iosfwd>
#include <string>

namespace wanderlab {

class Interval {
 public:
  constexpr Interval() = default;
  constexpr Interval(double point) : lo_(point), hi_(point) {}  // NOLINT
  Interval(double lo, double hi);

  static Interval hull(double a, double b);
  static Interval entire();

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double mid() const;
  double width() const;  // rounded up
  double mag() const;    // max |x|
  double mig() const;    // min |x|

  bool contains(double x) const { return lo_ <= x && x <= hi_; }
  bool contains(const Interval& other) const {
    return lo_ <= other.lo_ && other.hi_ <= hi_;
  }
  bool is_point() const { return lo_ == hi_; }
  bool is_finite() const;
  bool certainly_positive() const { return lo_ > 0.0; }
  bool certainly_negative() const { return hi_ < 0.0; }
  bool certainly_less(const Interval& other) const { return hi_ < other.lo_; }
  bool certainly_greater(const Interval& other) const {
    return lo_ > other.hi_;
  }
  bool overlaps(const Interval& other) const {
    return !(hi_ < other.lo_ || other.hi_ < lo_);
  }

  Interval operator-() const { return {-hi_, -lo_}; }
  Interval& operator+=(const Interval& rhs);
  Interval& operator-=(const Interval& rhs);
  Interval& operator*=(const Interval& rhs);
  Interval& operator/=(const Interval& rhs);

  /// Union hull with another enclosure.
  Interval join(const Interval& other) const;
  /// Widen by `ulps` units in the last place on each side.
  Interval inflate_ulps(int ulps) const;

  std::string str() const;

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
};

Interval operator+(Interval a, const Interval& b);
Interval operator-(Interval a, const Interval& b);
Interval operator*(Interval a, const Interval& b);
Interval operator/(Interval a, const Interval& b);
bool operator==(const Interval& a, const Interval& b);
std::ostream& operator<<(std::ostream& os, const Interval& x);

Interval sqr(const Interval& x);
Interval sqrt(const Interval& x);
Interval abs(const Interval& x);
Interval exp(const Interval& x);
Interval expm1(const Interval& x);
Interval log(const Interval& x);
Interval log1p(const Interval& x);
Interval sinh(const Interval& x);
Interval cosh(const Interval& x);
Interval asinh(const Interval& x);
Interval acosh(const Interval& x);
Interval sin(const Interval& x);
Interval cos(const Interval& x);
Interval asin(const Interval& x);
Interval max(const Interval& a, const Interval& b);
Interval min(const Interval& a, const Interval& b);

/// Enclosures of mathematical constants.
Interval pi_interval();
Interval ln2_interval();

/// Directed-rounding scalar helpers (MPFR backed).
double exp_down(double x);
double exp_up(double x);
double log_down(double x);
double log_up(double x);

/// Rectangular complex interval.
struct CInterval {
  Interval re;
  Interval im;

  CInterval() = default;
  CInterval(Interval r, Interval i) : re(r), im(i) {}
  explicit CInterval(std::complex<double> z) : re(z.real()), im(z.imag()) {}

  bool contains(std::complex<double> z) const {
    return re.contains(z.real()) && im.contains(z.imag());
  }
  /// Enclosure of |z|.
  Interval modulus() const;
  std::complex<double> mid() const { return {re.mid(), im.mid()}; }
};

CInterval operator+(const CInterval& a, const CInterval& b);
CInterval operator-(const CInterval& a, const CInterval& b);
CInterval operator*(const CInterval& a, const CInterval& b);
CInterval operator*(const Interval& a, const CInterval& b);
CInterval sinh(const CInterval& z);
CInterval cosh(const CInterval& z);

}  // namespace wanderlab
