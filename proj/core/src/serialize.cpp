// JSON forms of the orbit and schedule results.

#include <nlohmann/json.hpp>

#include "wanderlab/compose.hpp"
#include "wanderlab/orbit.hpp"
#include "wanderlab/parameters.hpp"

namespace wanderlab {

namespace {

nlohmann::json complex_json(const Complex& z) { return {z.real(), z.imag()}; }

template <class T>
nlohmann::json optional_json(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json optional_interval(const std::optional<Interval>& v) {
  return v ? interval_to_json(*v) : nlohmann::json(nullptr);
}

nlohmann::json ordering_json(const std::optional<CertifiedOrdering>& o) {
  return o ? nlohmann::json(to_string(*o)) : nlohmann::json(nullptr);
}

nlohmann::json token_json(const Token& t) {
  return {{"text", t.str()}, {"m", t.m}, {"steps", t.steps}};
}

}  // namespace

nlohmann::json interval_to_json(const Interval& x) { return {x.lo(), x.hi()}; }

// ------------------------------------------------------------------ orbit

nlohmann::json to_json(const EscapeVerdict& v) {
  return {{"pass", v.pass},
          {"X", v.X},
          {"lambda_sq", interval_to_json(v.lambda_sq)},
          {"minorant_pass", v.minorant_pass},
          {"boxes", v.boxes},
          {"tower_boxes", v.tower_boxes},
          {"detail", v.detail}};
}

nlohmann::json to_json(const OrbitRecord& r) {
  return {{"k", r.k},
          {"x", tower_to_json(r.x)},
          {"logderiv", tower_to_json(r.logderiv)},
          {"spacing", ordering_json(r.spacing)},
          {"derivative", ordering_json(r.derivative)}};
}

nlohmann::json to_json(const IndexSelection& s) {
  return {{"n", s.n},
          {"proxy", tower_to_json(s.proxy)},
          {"p", optional_json(s.p)},
          {"gap", s.p ? interval_to_json(s.gap) : nlohmann::json(nullptr)},
          {"gap_certified", s.gap_certified},
          {"gap_asserted", s.gap_asserted},
          {"tie_broken", s.tie_broken}};
}

nlohmann::json to_json(const PullbackCertificate& c) {
  nlohmann::json chain = nlohmann::json::array();
  for (const KoebeLink& l : c.koebe_chain) {
    chain.push_back({{"name", l.name}, {"value", interval_to_json(l.value)}});
  }
  nlohmann::json steps = nlohmann::json::array();
  for (const PullbackStep& s : c.steps) {
    steps.push_back({{"k", s.k},
                     {"clear_of_unit_disk", to_string(s.clear_of_unit_disk)},
                     {"derivative", to_string(s.derivative)}});
  }
  nlohmann::json image = nullptr;
  if (c.image) {
    image = {{"boxes", c.image->boxes},
             {"max_distance", c.image->max_distance},
             {"margin", c.image->margin},
             {"pass", c.image->pass}};
  }
  return {{"n", c.n},
          {"regime", to_string(c.regime)},
          {"index", to_json(c.index)},
          {"center_offset", complex_json(c.center_offset)},
          {"center_offset_bound", c.center_offset_bound},
          {"radius_inner", c.radius_inner},
          {"radius_outer", c.radius_outer},
          {"neg_log_inner", tower_to_json(c.neg_log_inner)},
          {"neg_log_outer", tower_to_json(c.neg_log_outer)},
          {"neg_log_inner_value", optional_interval(c.neg_log_inner_value)},
          {"koebe_chain", chain},
          {"steps", steps},
          {"landing_inside_branch", to_string(c.landing_inside_branch)},
          {"boundary_image", image},
          {"pass", c.pass}};
}

nlohmann::json to_json(const DiskEnclosure& d) {
  return {{"anchor", to_string(d.anchor)},
          {"anchor_index", d.anchor_index},
          {"offset_center", complex_json(d.offset_center)},
          {"radius", d.radius},
          {"neg_log_radius", tower_to_json(d.neg_log_radius)},
          {"neg_log_radius_value", optional_interval(d.neg_log_radius_value)},
          {"rigor", to_string(d.rigor)}};
}

nlohmann::json to_json(const LandingCheck& c) {
  return {{"n", c.n},
          {"target", c.target},
          {"regime", to_string(c.regime)},
          {"p", optional_json(c.p)},
          {"d_before", tower_to_json(c.d_before)},
          {"d_after", tower_to_json(c.d_after)},
          {"enlarged", c.enlarged},
          {"w_before", complex_json(c.w_before)},
          {"w_after", complex_json(c.w_after)},
          {"landing", to_json(c.landing)},
          {"chain_landing", to_json(c.chain_landing)},
          {"nested", to_string(c.nested)},
          {"chain_nested", to_string(c.chain_nested)},
          {"log_margin", optional_interval(c.log_margin)},
          {"correction", c.correction},
          {"pass", c.pass}};
}

nlohmann::json to_json(const AdjustmentResult& r) {
  nlohmann::json certs = nlohmann::json::array();
  for (const auto& c : r.certificates) certs.push_back(to_json(c));
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : r.steps) steps.push_back(to_json(s));
  return {{"parameters", to_json(r.params)},
          {"certificates", certs},
          {"steps", steps},
          {"budget_used", r.budget_used},
          {"budget", r.params.correction_budget},
          {"pass", r.pass}};
}

// --------------------------------------------------------------- schedule

nlohmann::json to_json(const ChaseTrace& t) {
  nlohmann::json landings = nlohmann::json::array();
  for (const ChaseLanding& l : t.landings) {
    landings.push_back({{"step", l.step},
                        {"map", to_string(l.map)},
                        {"disk_class", l.disk_class},
                        {"target", l.target}});
  }
  nlohmann::json steps = nlohmann::json::array();
  for (const ChaseStep& s : t.steps) {
    steps.push_back({{"step", s.step},
                     {"map", to_string(s.map)},
                     {"before", s.before.str()},
                     {"after", s.after.str()}});
  }
  return {{"word", to_string(t.word)},
          {"start", token_json(t.start)},
          {"length", t.length},
          {"landings", landings},
          {"steps", steps},
          {"final", token_json(t.final_token)}};
}

nlohmann::json to_json(const ScheduleReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const StepCountRow& row : r.step_counts) {
    rows.push_back({{"n", row.n},
                    {"steps", row.steps},
                    {"expected", row.expected},
                    {"parity_ok", row.parity_ok}});
  }
  nlohmann::json failures = nlohmann::json::array();
  for (const ClaimResult& c : r.failures) {
    failures.push_back({{"name", c.name}, {"n", c.n}, {"detail", c.detail}});
  }
  nlohmann::json traces = nlohmann::json::array();
  for (const ChaseTrace& t : r.failure_traces) traces.push_back(to_json(t));
  return {{"n_max", r.n_max},
          {"step_counts", rows},
          {"statements_checked", r.statements_checked},
          {"composite_checked", r.composite_checked},
          {"periodic_starts", r.periodic_starts},
          {"max_landings_to_cycle", r.max_landings_to_cycle},
          {"failures", failures},
          {"failure_traces", traces},
          {"metric_overlap", r.metric_overlap},
          {"pass", r.pass}};
}

nlohmann::json to_json(const ScheduleClassification& c) {
  return {{"word", to_string(c.word)},
          {"start", c.start},
          {"verdict", to_string(c.verdict)},
          {"regions", c.regions}};
}

}  // namespace wanderlab
