#pragma once

// Parameter tuple of the model map: lambda = pi * K, the degree schedule
// (d_n), the critical values (w_n), the neighborhood radius r_N of 1/2, and
// the declared correction budget of the near-identity correction.

#include <complex>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "wanderlab/interval.hpp"
#include "wanderlab/tower.hpp"

namespace wanderlab {

/// Override attached to an orbit step n rather than a disk index, used when
/// the disk index p_n is itself too large to write down.
struct OrbitStepOverride {
  TowerReal d;                       // degree d_{p_n}
  double w_offset_bound = 0.0;       // |w_{p_n} - 1/2| bound
  std::complex<double> w_offset{};   // best known offset (may be 0 if tiny)
};

struct ParameterSet {
  long lambda_over_pi = 4;
  double alpha = 1.0;                         // d_n^0 = 2 floor(exp(alpha n))
  std::map<long, double> d_overrides;         // per disk index
  std::map<long, std::complex<double>> w_overrides;
  std::map<int, OrbitStepOverride> orbit_overrides;
  double neighborhood_radius = 0.05;          // r_N
  double correction_budget = 1e-6;            // eps_phi

  double lambda() const;
  Interval lambda_interval() const;
  double delta() const { return 1.0 - (0.5 + neighborhood_radius); }

  /// d_n as a double (exact even integer); +inf when it does not fit.
  double d(long n) const;
  /// d_n as a certified tower enclosure (works for any n).
  TowerReal d_tower(long n) const;
  /// w_n (default 1/2).
  std::complex<double> w(long n) const;

  /// Throws PreconditionError on any violated invariant.
  void validate() const;
};

/// Largest accepted budget for the near-identity correction.
inline constexpr double kMaxCorrectionBudget = 1e-3;

nlohmann::json to_json(const ParameterSet& p);
ParameterSet parameters_from_json(const nlohmann::json& j);
ParameterSet load_parameters(const std::string& path);

nlohmann::json tower_to_json(const TowerReal& t);
TowerReal tower_from_json(const nlohmann::json& j);

}  // namespace wanderlab
