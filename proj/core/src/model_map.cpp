#include "wanderlab/model_map.hpp"

#include <mpfr.h>

#include <cmath>
#include <limits>
#include <memory>

#include "wanderlab/bigfloat.hpp"
#include "wanderlab/errors.hpp"

namespace wanderlab {
namespace {

constexpr double kHalfPi = M_PI / 2.0;
constexpr double kClosureSlack = 1e-12;

// One evaluation attempt at a fixed precision. Returns false when the floor
// of K cosh(n pi) is not resolved by the enclosure.
bool anchor_attempt(long n, long k, mpfr_prec_t prec, AnchorData& out) {
  BigFloat pi_lo(prec), pi_hi(prec), t_lo(prec), t_hi(prec);
  mpfr_const_pi(pi_lo.get(), MPFR_RNDD);
  mpfr_const_pi(pi_hi.get(), MPFR_RNDU);
  mpfr_mul_si(t_lo.get(), pi_lo.get(), n, MPFR_RNDD);
  mpfr_mul_si(t_hi.get(), pi_hi.get(), n, MPFR_RNDU);
  mpfr_cosh(t_lo.get(), t_lo.get(), MPFR_RNDD);
  mpfr_cosh(t_hi.get(), t_hi.get(), MPFR_RNDU);
  mpfr_mul_si(t_lo.get(), t_lo.get(), k, MPFR_RNDD);
  mpfr_mul_si(t_hi.get(), t_hi.get(), k, MPFR_RNDU);
  mpfr_floor(t_lo.get(), t_lo.get());
  mpfr_floor(t_hi.get(), t_hi.get());
  if (mpfr_cmp(t_lo.get(), t_hi.get()) != 0) return false;

  // K_n is now an exact integer held in t_lo.
  BigFloat half(prec);
  mpfr_div_2ui(half.get(), t_lo.get(), 1, MPFR_RNDN);
  out.floor_even = mpfr_integer_p(half.get()) != 0;
  out.floor_value = t_lo.to_double(MPFR_RNDN);

  BigFloat c_lo(prec), c_hi(prec), c(prec), a(prec), a_lo(prec), a_hi(prec);
  mpfr_div_si(c_lo.get(), t_lo.get(), k, MPFR_RNDD);
  mpfr_div_si(c_hi.get(), t_lo.get(), k, MPFR_RNDU);
  mpfr_div_si(c.get(), t_lo.get(), k, MPFR_RNDN);
  mpfr_acosh(a_lo.get(), c_lo.get(), MPFR_RNDD);
  mpfr_acosh(a_hi.get(), c_hi.get(), MPFR_RNDU);
  mpfr_acosh(a.get(), c.get(), MPFR_RNDN);

  BigFloat g_lo(prec), g_hi(prec);
  mpfr_mul_si(g_lo.get(), pi_lo.get(), n, MPFR_RNDD);
  mpfr_sub(g_lo.get(), g_lo.get(), a_hi.get(), MPFR_RNDD);
  mpfr_mul_si(g_hi.get(), pi_hi.get(), n, MPFR_RNDU);
  mpfr_sub(g_hi.get(), g_hi.get(), a_lo.get(), MPFR_RNDU);

  out.a = a.to_double(MPFR_RNDN);
  out.a_enclosure = Interval(a_lo.to_double(MPFR_RNDD), a_hi.to_double(MPFR_RNDU));
  out.gap = Interval(g_lo.to_double(MPFR_RNDD), g_hi.to_double(MPFR_RNDU));
  out.cosh_a = c.to_double(MPFR_RNDN);
  BigFloat log_c(prec);
  mpfr_log(log_c.get(), c.get(), MPFR_RNDN);
  out.log_cosh_a = log_c.to_double(MPFR_RNDN);
  out.precision_bits = static_cast<long>(prec);
  return true;
}

Complex finite_or_throw(Complex v) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw RangeError("value not representable in doubles; use the tower regime");
  }
  return v;
}

// Central-difference Beltrami coefficient of a map g at z.
template <typename Map>
Complex beltrami_fd(const Map& g, Complex z, double h) {
  const Complex gx = (g(z + Complex(h, 0)) - g(z - Complex(h, 0))) / (2.0 * h);
  const Complex gy = (g(z + Complex(0, h)) - g(z - Complex(0, h))) / (2.0 * h);
  const Complex dz = 0.5 * (gx - Complex(0, 1) * gy);
  const Complex dzbar = 0.5 * (gx + Complex(0, 1) * gy);
  if (std::abs(dz) == 0.0) {
    return {std::numeric_limits<double>::infinity(), 0.0};
  }
  return dzbar / dz;
}

}  // namespace

AnchorData compute_anchor(long n, long lambda_over_pi) {
  if (lambda_over_pi < 1) {
    throw PreconditionError("lambda must be a positive integer multiple of pi");
  }
  if (n < 1) throw DomainError("disk index must be >= 1");
  if (n > kMaxAnchorIndex) {
    throw RangeError("disk index " + std::to_string(n) +
                     " exceeds the supported anchor range");
  }
  AnchorData out;
  out.n = n;
  out.lambda_over_pi = lambda_over_pi;
  const double log2_mag =
      static_cast<double>(n) * M_PI / M_LN2 + std::log2(static_cast<double>(lambda_over_pi)) + 2.0;
  mpfr_prec_t prec = precision_for_magnitude(log2_mag);
  // Floor resolution: retry at doubled precision when the enclosure of
  // K cosh(n pi) straddles an integer.
  for (int attempt = 0; attempt < 8; ++attempt, prec *= 2) {
    if (anchor_attempt(n, lambda_over_pi, prec, out)) return out;
  }
  throw CertificationError("floor of K cosh(n pi) unresolved", static_cast<int>(n));
}

double compute_a(long n, long lambda_over_pi) {
  return compute_anchor(n, lambda_over_pi).a;
}

double compute_a(long n, double lambda) {
  const double k = std::round(lambda / M_PI);
  if (!(k >= 1.0) || std::fabs(lambda - k * M_PI) > 1e-9 * lambda) {
    throw PreconditionError("lambda must be a positive integer multiple of pi");
  }
  return compute_a(n, static_cast<long>(k));
}

AnchorTable::AnchorTable(long lambda_over_pi, long prefetch)
    : lambda_over_pi_(lambda_over_pi) {
  for (long n = 1; n <= prefetch; ++n) get(n);
}

const AnchorData& AnchorTable::get(long n) const {
  if (n < 1 || n > kMaxAnchorIndex) {
    throw RangeError("disk index out of anchor range: " + std::to_string(n));
  }
  std::lock_guard<std::mutex> lock(mutex_);
  if (cache_.size() <= static_cast<size_t>(n)) cache_.resize(n + 1);
  auto& slot = cache_[n];
  if (!slot) slot = std::make_unique<AnchorData>(compute_anchor(n, lambda_over_pi_));
  return *slot;
}

DiskSpec make_disk(long n, const AnchorTable& anchors) {
  DiskSpec d;
  d.n = n;
  d.a = anchors.a(n);
  d.center = Complex(d.a, M_PI);
  return d;
}

DiskSpec make_disk(long n, const ParameterSet& params) {
  DiskSpec d;
  d.n = n;
  d.a = compute_a(n, params.lambda_over_pi);
  d.center = Complex(d.a, M_PI);
  return d;
}

Complex strip_map(Complex z, const ParameterSet& params) {
  if (z.real() < -kClosureSlack || std::fabs(z.imag()) > kHalfPi + kClosureSlack) {
    throw DomainError("strip_map: point outside the closed half-strip");
  }
  const Complex s = params.lambda() * std::sinh(z);
  if (std::fabs(s.real()) > 700.0) {
    throw RangeError("strip_map overflow; use the tower regime");
  }
  return finite_or_throw(std::cosh(s));
}

Complex rho(Complex zeta, Complex w, double delta) {
  const double r = std::abs(zeta);
  if (r > 1.0 + kClosureSlack) throw DomainError("rho: |zeta| > 1");
  const Complex affine = delta * zeta + w;
  if (r <= 0.75) return affine;
  return zeta * (4.0 * r - 3.0) + affine * (4.0 - 4.0 * r);
}

Complex disk_map(Complex z, const DiskSpec& disk, const ParameterSet& params) {
  const Complex u = z - disk.center;
  const double r = std::abs(u);
  if (r > disk.radius + kClosureSlack) {
    throw DomainError("disk_map: point outside the closed disk");
  }
  const double d = params.d(disk.n);
  if (!std::isfinite(d)) throw RangeError("disk degree exceeds double range");
  Complex power;
  if (r == 0.0) {
    power = 0.0;
  } else {
    // Polar form keeps |u|^d exact to rounding and reduces the angle mod 2 pi.
    const double mod = std::exp(d * std::log(r));
    const double angle = std::remainder(d * std::arg(u), 2.0 * M_PI);
    power = std::polar(std::min(mod, 1.0), angle);
  }
  return rho(power, params.w(disk.n), params.delta());
}

BeltramiEstimate rho_beltrami(Complex zeta, Complex w, double delta, double h,
                              double margin) {
  const double r = std::abs(zeta);
  BeltramiEstimate est;
  if (r <= 0.75 - 10.0 * h) return est;  // affine region: conformal
  if (std::fabs(r - 0.75) < 10.0 * h || r > 1.0 - 10.0 * h) {
    throw DomainError("rho_beltrami: point within the seam margin");
  }
  auto g = [&](Complex q) { return rho(q, w, delta); };
  const Complex mu_h = beltrami_fd(g, zeta, h);
  const Complex mu_h2 = beltrami_fd(g, zeta, h / 2.0);
  est.mu = mu_h2;
  est.error = std::abs(mu_h - mu_h2);
  est.degenerate = !(std::abs(mu_h2) < 1.0 - margin);
  return est;
}

BeltramiEstimate disk_map_beltrami(Complex z, const DiskSpec& disk,
                                   const ParameterSet& params, double h) {
  auto g = [&](Complex q) { return disk_map(q, disk, params); };
  BeltramiEstimate est;
  const Complex mu_h = beltrami_fd(g, z, h);
  const Complex mu_h2 = beltrami_fd(g, z, h / 2.0);
  est.mu = mu_h2;
  est.error = std::abs(mu_h - mu_h2);
  est.degenerate = !(std::abs(mu_h2) < 1.0);
  return est;
}

SymmetryImage symmetry_extend(Complex z, const AnchorTable& anchors) {
  SymmetryImage out;
  out.representative = Complex(std::fabs(z.real()), std::fabs(z.imag()));
  const double x = out.representative.real();
  const double y = out.representative.imag();
  if (y <= kHalfPi) {
    out.tag = DomainTag::strip;
    return out;
  }
  if (y >= M_PI - 1.0 && y <= M_PI + 1.0) {
    const long guess = std::lround(x / M_PI);
    for (long n = std::max(1L, guess - 1); n <= guess + 1; ++n) {
      if (n > kMaxAnchorIndex) break;
      const double a = anchors.a(n);
      if (std::abs(out.representative - Complex(a, M_PI)) <= 1.0) {
        out.tag = DomainTag::disk;
        out.disk_index = n;
        return out;
      }
    }
  }
  out.tag = DomainTag::outside;
  return out;
}

const char* to_string(DomainTag tag) {
  switch (tag) {
    case DomainTag::strip:
      return "S+";
    case DomainTag::disk:
      return "disk";
    case DomainTag::outside:
      return "outside-model";
  }
  return "outside-model";
}

}  // namespace wanderlab
