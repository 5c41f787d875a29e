#include "wanderlab/parameters.hpp"

#include <mpfr.h>

#include <cmath>
#include <fstream>
#include <limits>

#include "wanderlab/errors.hpp"

namespace wanderlab {
namespace {

// 2 * floor(exp(alpha * n)) evaluated in MPFR so the floor is exact, then
// rounded up to a double; returns +inf beyond the double range.
double default_degree(double alpha, long n) {
  const double exponent = alpha * static_cast<double>(n);
  if (exponent > 700.0) return std::numeric_limits<double>::infinity();
  mpfr_t t;
  mpfr_init2(t, 256);
  mpfr_set_d(t, alpha, MPFR_RNDN);
  mpfr_mul_si(t, t, n, MPFR_RNDN);
  mpfr_exp(t, t, MPFR_RNDN);
  mpfr_floor(t, t);
  mpfr_mul_ui(t, t, 2, MPFR_RNDN);
  // Rounding up keeps the double an even integer >= the exact schedule.
  const double d = mpfr_get_d(t, MPFR_RNDU);
  mpfr_clear(t);
  return std::max(d, 2.0);
}

bool is_even_integer(double d) {
  return std::isfinite(d) && d >= 2.0 && std::fmod(d, 2.0) == 0.0;
}

}  // namespace

double ParameterSet::lambda() const {
  return static_cast<double>(lambda_over_pi) * M_PI;
}

Interval ParameterSet::lambda_interval() const {
  return Interval(static_cast<double>(lambda_over_pi)) * pi_interval();
}

double ParameterSet::d(long n) const {
  if (auto it = d_overrides.find(n); it != d_overrides.end()) return it->second;
  return default_degree(alpha, n);
}

TowerReal ParameterSet::d_tower(long n) const {
  const double v = d(n);
  if (std::isfinite(v)) return tw_from_real(v);
  // ln d = ln 2 + alpha n + ln(floor(e^x)/e^x), the last term in [-1e-300, 0].
  const Interval exponent = Interval(alpha) * Interval(static_cast<double>(n));
  const Interval ln_d =
      ln2_interval() + exponent + Interval(-kAbsorptionBound, 0.0);
  return tw_exp(tw_from_interval(ln_d));
}

std::complex<double> ParameterSet::w(long n) const {
  if (auto it = w_overrides.find(n); it != w_overrides.end()) return it->second;
  return {0.5, 0.0};
}

void ParameterSet::validate() const {
  if (lambda_over_pi < 1) {
    throw PreconditionError("lambda must be a positive integer multiple of pi");
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw PreconditionError("d_rules.default_exponential.alpha must be positive");
  }
  if (!(neighborhood_radius > 0.0 && neighborhood_radius < 0.5)) {
    throw PreconditionError(
        "neighborhood_radius must lie in (0, 1/2) so that delta > 0");
  }
  if (!(correction_budget >= 0.0 && correction_budget < kMaxCorrectionBudget)) {
    throw PreconditionError("correction_budget must lie in [0, 1e-3)");
  }
  for (const auto& [n, d] : d_overrides) {
    if (n < 1) throw PreconditionError("d override index must be >= 1");
    if (!is_even_integer(d)) {
      throw PreconditionError("d_" + std::to_string(n) +
                              " must be an even integer >= 2");
    }
  }
  for (const auto& [n, w] : w_overrides) {
    if (n < 1) throw PreconditionError("w override index must be >= 1");
    if (std::abs(w - std::complex<double>(0.5, 0.0)) > neighborhood_radius) {
      throw PreconditionError("w_" + std::to_string(n) +
                              " lies outside the neighborhood of 1/2");
    }
  }
  for (const auto& [step, o] : orbit_overrides) {
    if (step < 1) throw PreconditionError("orbit override step must be >= 1");
    if (o.d.sign <= 0) throw PreconditionError("orbit override degree must be positive");
    if (!(o.w_offset_bound >= 0.0) || o.w_offset_bound > neighborhood_radius) {
      throw PreconditionError("orbit override w offset exceeds neighborhood");
    }
  }
}

nlohmann::json tower_to_json(const TowerReal& t) {
  return {{"sign", t.sign},
          {"level", t.level},
          {"index", {t.index.lo(), t.index.hi()}},
          {"text", tw_to_string(t)}};
}

TowerReal tower_from_json(const nlohmann::json& j) {
  const int sign = j.at("sign").get<int>();
  const int level = j.at("level").get<int>();
  const auto& idx = j.at("index");
  return tw_normalize(sign, level,
                      Interval(idx.at(0).get<double>(), idx.at(1).get<double>()));
}

nlohmann::json to_json(const ParameterSet& p) {
  nlohmann::json overrides = nlohmann::json::array();
  for (const auto& [n, d] : p.d_overrides) overrides.push_back({{"n", n}, {"d", d}});
  nlohmann::json w = nlohmann::json::array();
  for (const auto& [n, v] : p.w_overrides) {
    w.push_back({{"n", n}, {"re", v.real()}, {"im", v.imag()}});
  }
  nlohmann::json orbit = nlohmann::json::array();
  for (const auto& [step, o] : p.orbit_overrides) {
    orbit.push_back({{"step", step},
                     {"d_tower", tower_to_json(o.d)},
                     {"w_offset", {o.w_offset.real(), o.w_offset.imag()}},
                     {"w_offset_bound", o.w_offset_bound}});
  }
  return {{"lambda_over_pi", p.lambda_over_pi},
          {"d_rules",
           {{"default_exponential", {{"alpha", p.alpha}}},
            {"overrides", overrides}}},
          {"w_overrides", w},
          {"orbit_overrides", orbit},
          {"neighborhood_radius", p.neighborhood_radius},
          {"correction_budget", p.correction_budget}};
}

ParameterSet parameters_from_json(const nlohmann::json& j) {
  ParameterSet p;
  try {
    if (j.contains("lambda_over_pi")) {
      const double k = j.at("lambda_over_pi").get<double>();
      if (!(k >= 1.0) || std::floor(k) != k || k > 1e9) {
        throw PreconditionError(
            "lambda must be a positive integer multiple of pi (lambda_over_pi = " +
            j.at("lambda_over_pi").dump() + ")");
      }
      p.lambda_over_pi = static_cast<long>(k);
    }
    if (j.contains("d_rules")) {
      const auto& rules = j.at("d_rules");
      if (rules.contains("default_exponential")) {
        p.alpha = rules.at("default_exponential").value("alpha", p.alpha);
      }
      if (rules.contains("overrides")) {
        for (const auto& o : rules.at("overrides")) {
          p.d_overrides[o.at("n").get<long>()] = o.at("d").get<double>();
        }
      }
    }
    if (j.contains("w_overrides")) {
      for (const auto& o : j.at("w_overrides")) {
        p.w_overrides[o.at("n").get<long>()] = {o.at("re").get<double>(),
                                                o.value("im", 0.0)};
      }
    }
    if (j.contains("orbit_overrides")) {
      for (const auto& o : j.at("orbit_overrides")) {
        OrbitStepOverride ov;
        ov.d = tower_from_json(o.at("d_tower"));
        if (o.contains("w_offset")) {
          ov.w_offset = {o.at("w_offset").at(0).get<double>(),
                         o.at("w_offset").at(1).get<double>()};
        }
        ov.w_offset_bound = o.value("w_offset_bound", 0.0);
        p.orbit_overrides[o.at("step").get<int>()] = ov;
      }
    }
    p.neighborhood_radius = j.value("neighborhood_radius", p.neighborhood_radius);
    p.correction_budget = j.value("correction_budget", p.correction_budget);
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("malformed parameter document: ") + e.what());
  }
  p.validate();
  return p;
}

ParameterSet load_parameters(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError("config is not valid JSON: " + std::string(e.what()));
  }
  return parameters_from_json(j);
}

}  // namespace wanderlab
