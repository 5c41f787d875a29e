#include "commands.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "wanderlab/compose.hpp"
#include "wanderlab/errors.hpp"
#include "wanderlab/geometry.hpp"
#include "wanderlab/graph.hpp"
#include "wanderlab/orbit.hpp"
#include "wanderlab/render.hpp"
#include "wanderlab/thin.hpp"

#ifndef WANDERLAB_VERSION
#define WANDERLAB_VERSION "unknown"
#endif

namespace wanderlab::cli {

namespace {

/// Largest escape window: the whole double range (the check switches to
/// the log domain where the map overflows).
constexpr double kEscapeWindow = 1e300;
/// Tolerance of the strip-edge image lengths against pi.
constexpr double kTauTolerance = 1e-9;
constexpr long kTauVertices = 10000;

std::string fmt(double x, int digits = 6) {
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

std::string mark(bool ok) { return ok ? "PASS" : "FAIL"; }

long option_n(const RunConfig& cfg, long fallback, long lo, long hi) {
  const long n = cfg.n.value_or(fallback);
  if (n < lo || n > hi) {
    throw PreconditionError("--n must lie in " + std::to_string(lo) + ".." + std::to_string(hi) +
                            " for " + cfg.command);
  }
  return n;
}

void add_check(CommandResult& r, const std::string& name, bool ok, const std::string& detail) {
  r.verdicts[name] = ok;
  r.lines.push_back(mark(ok) + "  " + name + (detail.empty() ? "" : "  (" + detail + ")"));
}

bool all_verdicts(const nlohmann::json& v) {
  for (const auto& [k, ok] : v.items()) {
    if (!ok.get<bool>()) return false;
  }
  return true;
}

// ------------------------------------------------------------------ pieces

struct EscapeAndOrbit {
  EscapeVerdict escape;
  std::vector<OrbitRecord> orbit;
};

nlohmann::json orbit_json(const std::vector<OrbitRecord>& orbit) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& r : orbit) a.push_back(to_json(r));
  return a;
}

}  // namespace

// -------------------------------------------------------------- geometry

CommandResult cmd_geometry(const RunConfig& cfg) {
  const long n_disks = option_n(cfg, 10, 1, 200);
  CommandResult r;
  const ParameterSet& p = cfg.params;

  const Graph g = build_graph(p, n_disks);
  const GeometryReport geo = check_bounded_geometry(g);
  const bool finite = std::isfinite(geo.min_angle) && geo.min_angle > 0.0 &&
                      std::isfinite(geo.max_adjacent_diam_ratio) &&
                      std::isfinite(geo.max_nonadjacent_diam_over_dist);
  add_check(r, "bipartite", geo.bipartite && geo.label_conflicts.empty(),
            std::to_string(geo.label_conflicts.size()) + " label conflicts");
  add_check(r, "bounded_geometry", finite,
            "min angle " + fmt(geo.min_angle) + ", M " + fmt(geo.max_adjacent_diam_ratio) +
                ", nonadjacent " + fmt(geo.max_nonadjacent_diam_over_dist));

  const auto tau = tau_size_strip_edges(p, kTauVertices);
  double tau_dev = 0.0;
  for (const auto& e : tau) tau_dev = std::max(tau_dev, std::fabs(e.image_length - M_PI));
  add_check(r, "tau_size_strip_edges", tau_dev <= kTauTolerance,
            std::to_string(tau.size()) + " edges, max |length - pi| " + fmt(tau_dev, 3));

  // Thin-area sweep: doubling the degree exponent and doubling lambda must
  // shrink the area bound at every sample center.
  const AnchorTable anchors(p.lambda_over_pi);
  const auto centers = thin_sample_centers(anchors);
  ParameterSet p_alpha = p;
  p_alpha.alpha = 2.0 * p.alpha;
  ParameterSet p_lambda = p;
  p_lambda.lambda_over_pi = 2 * p.lambda_over_pi;
  const Graph g_alpha = build_graph(p_alpha, n_disks);
  const Graph g_lambda = build_graph(p_lambda, n_disks);
  ThinSetSpec base, alpha, lam;
  base.graph = &g;
  alpha.graph = &g_alpha;
  lam.graph = &g_lambda;
  nlohmann::json sweep = nlohmann::json::array();
  bool alpha_ok = true, lambda_ok = true;
  for (const Complex z : centers) {
    const ThinAreaResult a0 = thin_area(base, z);
    const ThinAreaResult a1 = thin_area(alpha, z);
    const ThinAreaResult a2 = thin_area(lam, z);
    alpha_ok = alpha_ok && a1.area < a0.area;
    lambda_ok = lambda_ok && a2.area < a0.area;
    sweep.push_back({{"z", {z.real(), z.imag()}},
                     {"area", a0.area},
                     {"area_alpha_doubled", a1.area},
                     {"area_lambda_doubled", a2.area}});
  }
  add_check(r, "thin_area_antitone_alpha", alpha_ok,
            std::to_string(centers.size()) + " centers, alpha " + fmt(p.alpha) + " -> " +
                fmt(p_alpha.alpha));
  add_check(r, "thin_area_antitone_lambda", lambda_ok,
            "lambda/pi " + std::to_string(p.lambda_over_pi) + " -> " +
                std::to_string(p_lambda.lambda_over_pi));

  double tau_max_len = 0.0;
  for (const auto& e : tau) tau_max_len = std::max(tau_max_len, e.image_length);
  r.report = {{"n_disks", n_disks},
              {"geometry", to_json(geo)},
              {"tau_size", {{"edges", tau.size()},
                            {"max_deviation", tau_dev},
                            {"tolerance", kTauTolerance}}},
              {"thin_sweep", sweep}};
  r.pass = all_verdicts(r.verdicts);
  return r;
}

// ----------------------------------------------------------------- orbit

namespace {

EscapeAndOrbit escape_and_orbit(const RunConfig& cfg, CommandResult& r, int depth) {
  EscapeAndOrbit eo;
  eo.escape = check_escape_condition(cfg.params, kEscapeWindow);
  add_check(r, "escape_condition", eo.escape.pass,
            std::to_string(eo.escape.boxes) + " boxes on [1, " + fmt(kEscapeWindow) + "]");
  eo.orbit = iterate_orbit(cfg.params, depth);
  bool spacing = true, derivative = true;
  for (int k = 0; k < depth; ++k) {
    spacing = spacing && eo.orbit[static_cast<size_t>(k)].spacing_ok();
    derivative = derivative && eo.orbit[static_cast<size_t>(k)].derivative_ok();
  }
  add_check(r, "orbit_spacing", spacing, "x_{k+1} - x_k >= 11 for k < " + std::to_string(depth));
  add_check(r, "orbit_derivative", derivative,
            "f'(x_k) >= 50 for k < " + std::to_string(depth));
  return eo;
}

}  // namespace

CommandResult cmd_orbit(const RunConfig& cfg) {
  const int depth = static_cast<int>(option_n(cfg, kSymbolicDepth, 1, kSymbolicDepth));
  CommandResult r;
  const EscapeAndOrbit eo = escape_and_orbit(cfg, r, depth);
  bool growth = true;
  nlohmann::json growth_rows = nlohmann::json::array();
  for (int n = 1; n <= depth; ++n) {
    const Interval bound = factorial_growth_bound(n);
    const CertifiedOrdering ord =
        tw_cmp(eo.orbit[static_cast<size_t>(n)].logderiv, tw_from_interval(bound));
    growth = growth && ord == CertifiedOrdering::certainly_greater;
    growth_rows.push_back({{"n", n},
                           {"logderiv", tower_to_json(eo.orbit[static_cast<size_t>(n)].logderiv)},
                           {"bound", interval_to_json(bound)},
                           {"verdict", to_string(ord)}});
  }
  add_check(r, "factorial_growth", growth,
            "ln (f^n)'(1/2) >= n ln 50 + ln n! for n <= " + std::to_string(depth));
  r.report = {{"depth", depth},
              {"escape", to_json(eo.escape)},
              {"orbit", orbit_json(eo.orbit)},
              {"factorial_growth", growth_rows}};
  r.pass = all_verdicts(r.verdicts);
  return r;
}

// ----------------------------------------------------------------- disks

CommandResult cmd_disks(const RunConfig& cfg) {
  const int depth = static_cast<int>(option_n(cfg, 2, 1, kSymbolicDepth - 1));
  CommandResult r;
  const auto orbit = iterate_orbit(cfg.params, depth + 1);
  const AnchorTable anchors(cfg.params.lambda_over_pi);
  nlohmann::json certs = nlohmann::json::array();
  for (int n = 1; n <= depth; ++n) {
    const PullbackCertificate c = build_U(n, orbit, cfg.params, anchors);
    nlohmann::json entry = {{"certificate", to_json(c)}};
    std::string detail = std::string(to_string(c.regime)) + ", p = " +
                         (c.index.p ? std::to_string(*c.index.p) : std::string("symbolic"));
    if (c.radius_inner > 0.0) detail += ", radius " + fmt(c.radius_inner);
    if (c.pass) entry["landing"] = to_json(schwarz_landing(n, c, cfg.params));
    certs.push_back(entry);
    add_check(r, "U_" + std::to_string(n), c.pass, detail);
  }
  r.report = {{"depth", depth}, {"disks", certs}};
  r.pass = all_verdicts(r.verdicts);
  return r;
}

// ---------------------------------------------------------------- wander

CommandResult cmd_wander(const RunConfig& cfg) {
  const int depth = static_cast<int>(option_n(cfg, 2, 1, kSymbolicDepth - 1));
  CommandResult r;
  const EscapeAndOrbit eo = escape_and_orbit(cfg, r, depth + 1);
  const AdjustmentResult adj = adjust_parameters(cfg.params, depth);
  int certified_depth = 0;
  for (const LandingCheck& s : adj.steps) {
    std::string detail = std::string(to_string(s.regime)) + ", nested " + to_string(s.nested);
    if (s.log_margin) detail += ", log margin >= " + fmt(s.log_margin->lo(), 4);
    add_check(r, "landing_" + std::to_string(s.n) + "_in_U_" + std::to_string(s.target), s.pass,
              detail);
    if (s.pass && certified_depth == s.n - 1) certified_depth = s.n;
  }
  add_check(r, "correction_budget", adj.budget_used <= cfg.params.correction_budget,
            "used " + fmt(adj.budget_used, 3) + " of " + fmt(cfg.params.correction_budget, 3));
  r.pass = all_verdicts(r.verdicts) && adj.pass;
  r.report = {{"depth", depth},
              {"escape", to_json(eo.escape)},
              {"adjustment", to_json(adj)},
              {"summary",
               {{"certified_depth", certified_depth},
                {"smallest_passing_N", certified_depth >= 1 ? nlohmann::json(1)
                                                            : nlohmann::json(nullptr)},
                {"requested_N", depth},
                {"pass", r.pass}}}};
  r.lines.push_back("certified depth " + std::to_string(certified_depth) + " of " +
                    std::to_string(depth));
  return r;
}

// --------------------------------------------------------------- compose

CommandResult cmd_compose(const RunConfig& cfg) {
  const long n_max = option_n(cfg, 200, 0, 100000);
  CommandResult r;
  const auto t0 = std::chrono::steady_clock::now();
  const ScheduleReport rep = verify_schedule(n_max);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool steps_ok = true;
  for (const StepCountRow& row : rep.step_counts) {
    steps_ok = steps_ok && row.steps == row.expected && row.parity_ok;
  }
  add_check(r, "step_counts", steps_ok,
            std::to_string(rep.step_counts.size()) + " rows, 16n + 10 single steps");
  const auto failed = [&](const std::string& prefix) {
    return std::count_if(rep.failures.begin(), rep.failures.end(),
                         [&](const ClaimResult& c) { return c.name.rfind(prefix, 0) == 0; });
  };
  add_check(r, "composite_claims", failed("(") == 0,
            std::to_string(rep.composite_checked) + " checked");
  add_check(r, "per_map_containments", failed("f^") + failed("g^") == 0,
            std::to_string(rep.statements_checked) + " checked");
  add_check(r, "pure_word_periodicity", failed("pure-") == 0,
            std::to_string(rep.periodic_starts) + " starts, cycle within " +
                std::to_string(rep.max_landings_to_cycle) + " landings");
  r.pass = rep.pass && all_verdicts(r.verdicts);

  nlohmann::json ladder = nullptr;
  nlohmann::json classes = nlohmann::json::array();
  if (n_max > 0) {
    const Scheduler s;
    const ChaseTrace t = chase(s, WordPattern::alternating_fg, 4, 13);
    ladder = {{"trace", to_json(t)}, {"text", ladder_text(t)}};
    for (const auto& c : classify_schedules(std::min<long>(n_max, 4))) {
      classes.push_back(to_json(c));
    }
  }
  r.report = {{"schedule", to_json(rep)},
              {"ladder", ladder},
              {"classification", classes},
              {"seconds", seconds}};
  for (size_t k = 0; k < std::min<size_t>(rep.step_counts.size(), 5); ++k) {
    const auto& row = rep.step_counts[k];
    r.lines.push_back("  n = " + std::to_string(row.n) + ": U_" + std::to_string(4 * row.n) +
                      " -> U_" + std::to_string(4 * row.n + 4) + " in " +
                      std::to_string(row.steps) + " steps");
  }
  for (const ClaimResult& c : rep.failures) {
    r.lines.push_back("  failure: " + c.name + " at n = " + std::to_string(c.n) + ": " + c.detail);
  }
  return r;
}

// ---------------------------------------------------------------- render

CommandResult cmd_render(const RunConfig& cfg) {
  RasterJob job;
  job.window = {0.0, 4.0, -2.0, 2.0};
  if (cfg.config.contains("render")) {
    nlohmann::json section = cfg.config.at("render");
    if (!section.contains("window")) section["window"] = to_json(job).at("window");
    try {
      job = raster_job_from_json(section);
    } catch (const nlohmann::json::exception& e) {
      throw PreconditionError(std::string("malformed render section: ") + e.what());
    } catch (const DomainError& e) {
      throw PreconditionError(std::string("invalid render job: ") + e.what());
    }
  }
  if (cfg.n) job.max_steps = static_cast<int>(option_n(cfg, job.max_steps, 0, 100000));
  CommandResult r;
  const RenderResult img = render(job, cfg.params);
  write_render(img, cfg.out_dir, "render");
  r.artifacts = {"render.ppm", "render.csv", "render.legend.json"};
  long total = 0;
  for (long c : img.counts) total += c;
  add_check(r, "render", total == static_cast<long>(job.width) * job.height,
            std::to_string(job.width) + "x" + std::to_string(job.height) + ", max_steps " +
                std::to_string(job.max_steps));
  for (int c = 0; c < kPointClassCount; ++c) {
    r.lines.push_back("  " + std::string(to_string(static_cast<PointClass>(c))) + ": " +
                      std::to_string(img.counts[static_cast<size_t>(c)]));
  }
  r.report = {{"legend", legend_json(img)}, {"artifacts", r.artifacts}};
  r.pass = all_verdicts(r.verdicts);
  return r;
}

// ---------------------------------------------------------------- report

CommandResult cmd_report(const RunConfig& cfg) {
  CommandResult r;
  r.report = nlohmann::json::object();
  const auto run_sub = [&](const std::string& name, CommandResult (*fn)(const RunConfig&),
                           std::optional<long> n) {
    RunConfig sub = cfg;
    sub.command = name;
    sub.n = n;
    try {
      CommandResult c = fn(sub);
      r.report[name] = {{"pass", c.pass}, {"verdicts", c.verdicts}};
      add_check(r, name, c.pass, "");
      for (const auto& l : c.lines) r.lines.push_back("    " + l);
    } catch (const CertificationError& e) {
      r.report[name] = {{"pass", false}, {"error", e.what()}};
      add_check(r, name, false, e.what());
    }
  };
  run_sub("geometry", cmd_geometry, std::nullopt);
  run_sub("orbit", cmd_orbit, std::nullopt);
  run_sub("disks", cmd_disks, std::nullopt);
  run_sub("wander", cmd_wander, std::nullopt);
  run_sub("compose", cmd_compose, std::nullopt);
  r.pass = all_verdicts(r.verdicts);
  return r;
}

// ---------------------------------------------------------------- driver

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string config_hash(const RunConfig& cfg) {
  nlohmann::json doc = {{"parameters", to_json(cfg.params)},
                        {"render", cfg.config.value("render", nlohmann::json(nullptr))},
                        {"command", cfg.command},
                        {"n", cfg.n ? nlohmann::json(*cfg.n) : nlohmann::json(nullptr)}};
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(doc.dump());
  return os.str();
}

namespace {

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + p.string() + ": " + std::strerror(errno));
  f << text;
  if (!f) throw std::runtime_error("cannot write " + p.string() + ": " + std::strerror(errno));
}

nlohmann::json versions() {
  return {{"wanderlab", WANDERLAB_VERSION},
          {"mpfr", mpfr_get_version()},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
          {"cli11", CLI11_VERSION},
          {"compiler", __VERSION__}};
}

CommandResult dispatch(const RunConfig& cfg) {
  if (cfg.command == "geometry") return cmd_geometry(cfg);
  if (cfg.command == "orbit") return cmd_orbit(cfg);
  if (cfg.command == "disks") return cmd_disks(cfg);
  if (cfg.command == "wander") return cmd_wander(cfg);
  if (cfg.command == "compose") return cmd_compose(cfg);
  if (cfg.command == "render") return cmd_render(cfg);
  if (cfg.command == "report") return cmd_report(cfg);
  throw PreconditionError("unknown command: " + cfg.command);
}

int finish(const RunConfig& cfg, const CommandResult& res, int code, std::ostream& out,
           const std::string& error) {
  const std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  nlohmann::json report = res.report;
  report["command"] = cfg.command;
  report["pass"] = res.pass;
  if (!error.empty()) report["error"] = error;
  const std::string report_name = cfg.command + ".json";
  write_text(dir / report_name, report.dump(2) + "\n");
  std::vector<std::string> outputs = res.artifacts;
  outputs.push_back(report_name);
  const nlohmann::json manifest = {
      {"command", cfg.command},
      {"config", cfg.config_path ? nlohmann::json(*cfg.config_path) : nlohmann::json(nullptr)},
      {"config_hash", config_hash(cfg)},
      {"parameters", to_json(cfg.params)},
      {"options", {{"n", cfg.n ? nlohmann::json(*cfg.n) : nlohmann::json(nullptr)},
                   {"json", cfg.json}}},
      {"versions", versions()},
      {"deterministic", true},
      {"verdicts", res.verdicts},
      {"pass", res.pass},
      {"exit_code", code},
      {"outputs", outputs}};
  write_text(dir / (cfg.command + ".manifest.json"), manifest.dump(2) + "\n");
  if (cfg.json) {
    out << report.dump(2) << "\n";
  } else {
    for (const auto& l : res.lines) out << l << "\n";
    if (!error.empty()) out << "error: " << error << "\n";
    out << cfg.command << ": " << (res.pass ? "PASS" : "FAIL") << " (config " << config_hash(cfg)
        << ", artifacts in " << cfg.out_dir << ")\n";
  }
  return code;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"wanderlab: certified checks and renders of the wandering-domain model map"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  RunConfig cfg;
  std::string config_path;
  long n = 0;
  app.add_option("--config", config_path, "parameter set JSON (defaults when omitted)");
  app.add_option("--out", cfg.out_dir, "output directory for reports and manifests");
  auto* n_opt = app.add_option("--n", n, "depth / size parameter of the command");
  app.add_flag("--json", cfg.json, "print the JSON report instead of the summary");
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"geometry", "graph geometry, tau-size and thin-area sweep (--n disks, default 10)"},
      {"orbit", "escape condition and certified real orbit (--n depth, default 25)"},
      {"disks", "pullback disks U_n and their landing disks (--n, default 2)"},
      {"wander", "parameter adjustment and the nested landing chain (--n, default 2)"},
      {"compose", "two-map composition schedule chase (--n n_max, default 200)"},
      {"render", "classification raster: PPM, CSV and legend (--n max_steps)"},
      {"report", "run geometry, orbit, disks, wander and compose"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  if (*n_opt) cfg.n = n;

  try {
    if (!config_path.empty()) {
      cfg.config_path = config_path;
      std::ifstream in(config_path);
      if (!in) throw PreconditionError("cannot open config file: " + config_path);
      try {
        in >> cfg.config;
      } catch (const nlohmann::json::exception& e) {
        throw PreconditionError("config is not valid JSON: " + std::string(e.what()));
      }
      cfg.params = parameters_from_json(cfg.config);
    }
    cfg.params.validate();
  } catch (const Error& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    const CommandResult res = dispatch(cfg);
    return finish(cfg, res, res.pass ? kExitPass : kExitCheckFailed, out, "");
  } catch (const CertificationError& e) {
    CommandResult res;
    res.verdicts["certification"] = false;
    try {
      return finish(cfg, res, kExitCheckFailed, out, e.what());
    } catch (const std::exception& io) {
      err << "error: " << io.what() << "\n";
      return kExitUsage;
    }
  } catch (const PreconditionError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const RangeError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace wanderlab::cli
