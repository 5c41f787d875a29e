#pragma once

// The explicit model map on the half-strip S+ = {x > 0, |y| < pi/2} and on
// the unit disks D_n centered at z_n = a_n + i*pi, with its symmetry
// extension f(conj z) = conj f(z), f(-z) = f(z).

#include <complex>
#include <memory>
#include <mutex>
#include <vector>

#include "wanderlab/interval.hpp"
#include "wanderlab/parameters.hpp"

namespace wanderlab {

using Complex = std::complex<double>;

/// Largest disk index for which the anchor closed form is evaluated.
inline constexpr long kMaxAnchorIndex = 5000;

/// a_n = acosh(floor(K cosh(n pi)) / K) with K = lambda / pi, together with
/// the data the graph needs (cosh a_n and the parity of the floor).
struct AnchorData {
  long n = 0;
  long lambda_over_pi = 0;
  double a = 0.0;            // round-to-nearest value
  Interval a_enclosure{0.0}; // certified
  Interval gap{0.0};         // certified enclosure of n*pi - a_n
  double cosh_a = 0.0;       // K_n / K, rounded to nearest (may be inf)
  double log_cosh_a = 0.0;   // ln(K_n / K)
  bool floor_even = false;   // parity of K_n = floor(K cosh(n pi))
  double floor_value = 0.0;  // K_n rounded to nearest (exact below 2^53)
  long precision_bits = 0;   // MPFR precision that resolved the floor
};

AnchorData compute_anchor(long n, long lambda_over_pi);
double compute_a(long n, long lambda_over_pi);
/// Same, with lambda given as a real; rejects lambda not in pi * N.
double compute_a(long n, double lambda);

/// Thread-safe memo of anchors for one lambda.
class AnchorTable {
 public:
  explicit AnchorTable(long lambda_over_pi, long prefetch = 0);
  const AnchorData& get(long n) const;
  double a(long n) const { return get(n).a; }
  long lambda_over_pi() const { return lambda_over_pi_; }

 private:
  long lambda_over_pi_;
  mutable std::mutex mutex_;
  mutable std::vector<std::unique_ptr<AnchorData>> cache_;
};

struct DiskSpec {
  long n = 0;
  double a = 0.0;
  Complex center;
  double radius = 1.0;
};

DiskSpec make_disk(long n, const ParameterSet& params);
DiskSpec make_disk(long n, const AnchorTable& anchors);

/// cosh(lambda sinh z) on the closure of S+. Throws RangeError when the
/// result is not representable (callers switch to the tower regime).
Complex strip_map(Complex z, const ParameterSet& params);

/// The interpolated disk map: affine delta*zeta + w on |zeta| <= 3/4 and the
/// radial interpolation to the identity on 3/4 <= |zeta| <= 1.
Complex rho(Complex zeta, Complex w, double delta);

/// rho_n((z - z_n)^{d_n}).
Complex disk_map(Complex z, const DiskSpec& disk, const ParameterSet& params);

struct BeltramiEstimate {
  Complex mu;            // dbar(rho) / d(rho)
  double error = 0.0;    // |mu(h) - mu(h/2)|
  bool degenerate = false;  // |mu| >= 1 - margin: not quasiconformal here
};

/// Finite-difference Beltrami coefficient of rho (h with an h/2 cross-check).
BeltramiEstimate rho_beltrami(Complex zeta, Complex w, double delta,
                              double h = 1e-6, double margin = 1e-9);
/// Finite-difference Beltrami coefficient of the disk map at z.
BeltramiEstimate disk_map_beltrami(Complex z, const DiskSpec& disk,
                                   const ParameterSet& params, double h = 1e-7);

enum class DomainTag { strip, disk, outside };

struct SymmetryImage {
  DomainTag tag = DomainTag::outside;
  long disk_index = 0;   // valid when tag == disk
  Complex representative;  // in the closed first quadrant
};

SymmetryImage symmetry_extend(Complex z, const AnchorTable& anchors);

const char* to_string(DomainTag tag);

}  // namespace wanderlab
