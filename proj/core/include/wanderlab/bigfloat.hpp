#pragma once

// RAII handle over an MPFR number. Used where doubles cannot hold the
// intermediate (cosh(n*pi) for n up to 500) or where a result must be
// rounded in a chosen direction.

#include <mpfr.h>

#include <string>

namespace wanderlab {

class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t precision = 53);
  BigFloat(double value, mpfr_prec_t precision);
  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }

  double to_double(mpfr_rnd_t rounding = MPFR_RNDN) const;
  std::string to_string(int digits = 20) const;

 private:
  mpfr_t value_;
};

/// Number of bits needed to hold cosh(x) with `extra` guard bits of fraction.
mpfr_prec_t precision_for_magnitude(double log2_magnitude, int extra = 96);

}  // namespace wanderlab
