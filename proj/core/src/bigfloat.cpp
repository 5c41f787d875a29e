#include "wanderlab/bigfloat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <utility>

namespace wanderlab {

BigFloat::BigFloat(mpfr_prec_t precision) {
  mpfr_init2(value_, precision);
  mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(double value, mpfr_prec_t precision) {
  mpfr_init2(value_, precision);
  mpfr_set_d(value_, value, MPFR_RNDN);
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  // mpfr_t is an array type; swapping the limbs transfers ownership.
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  if (this != &other) mpfr_swap(value_, other.value_);
  return *this;
}

BigFloat::~BigFloat() {
  mpfr_clear(value_);
}

double BigFloat::to_double(mpfr_rnd_t rounding) const {
  return mpfr_get_d(value_, rounding);
}

std::string BigFloat::to_string(int digits) const {
  char* raw = nullptr;
  mpfr_asprintf(&raw, "%.*Rg", digits, value_);
  std::string out = raw ? raw : "";
  mpfr_free_str(raw);
  return out;
}

mpfr_prec_t precision_for_magnitude(double log2_magnitude, int extra) {
  const double bits = std::max(0.0, std::ceil(log2_magnitude)) + extra;
  return static_cast<mpfr_prec_t>(std::max(bits, 64.0));
}

}  // namespace wanderlab
