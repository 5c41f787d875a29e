#pragma once

// Exhaustive token-level chase of the two-map schedule. Two maps f and g
// share the orbit skeleton (same lambda and degrees, hence the same U_m and
// landing disks) and differ only in where each landing disk is sent. A token
// in U_m advances through the half-strip for m single steps, reaches the
// landing disk of class m, and the next applied map sends it to the U chosen
// by that map's transition table.
//
// Composition follows the usual order: (f o g) applies g first.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace wanderlab {

enum class MapId { f, g };
const char* to_string(MapId m);

/// map^{4n + exponent}(U_{4n + source}) is contained in U_{4n + target}.
struct ContainmentStatement {
  MapId map = MapId::f;
  int exponent = 1;
  int source = 0;
  int target = 0;
  std::string str() const;
};

/// The eight per-map statements of the schedule.
std::vector<ContainmentStatement> schedule_statements();

/// Landing map of one of the two maps: disk class 4n + r goes to
/// U_{4n + offset[r]}.
struct TransitionTable {
  MapId map = MapId::f;
  std::array<int, 4> offset{};
  long target(long m) const { return 4 * (m / 4) + offset[m % 4]; }
};

/// Derives both tables; throws PreconditionError naming the conflicting pair
/// when two statements disagree, when a class is missing, or when a
/// statement's exponent does not match the advance-then-land semantics.
std::pair<TransitionTable, TransitionTable> derive_tables(
    const std::vector<ContainmentStatement>& statements);

struct Token {
  enum class Kind { region, advancing, landing };
  Kind kind = Kind::region;
  long m = 1;      // the U_m the token started from (or sits in)
  long steps = 0;  // steps taken since leaving U_m
  static Token in_region(long m) { return {Kind::region, m, 0}; }
  static Token at_landing(long m) { return {Kind::landing, m, m}; }
  bool operator==(const Token&) const = default;
  std::string str() const;
};

enum class WordPattern { alternating_gf, alternating_fg, pure_f, pure_g };
const char* to_string(WordPattern w);
/// Map applied at single step s (1-based). alternating_fg is the word of
/// f o g, hence g on odd steps; alternating_gf applies f on odd steps.
MapId map_at(WordPattern w, long step);
/// Single steps per repetition of the word (2 for alternating words).
long steps_per_repetition(WordPattern w);

class Scheduler {
 public:
  Scheduler(TransitionTable f, TransitionTable g) : f_(f), g_(g) {}
  Scheduler();  // tables derived from schedule_statements()

  const TransitionTable& table(MapId m) const { return m == MapId::f ? f_ : g_; }
  Token apply(const Token& t, MapId map) const;

 private:
  TransitionTable f_;
  TransitionTable g_;
};

struct ChaseStep {
  long step = 0;
  MapId map = MapId::f;
  Token before;
  Token after;
};

struct ChaseLanding {
  long step = 0;
  MapId map = MapId::f;
  long disk_class = 0;
  long target = 0;
};

struct ChaseTrace {
  WordPattern word = WordPattern::alternating_fg;
  Token start;
  long length = 0;             // single steps
  std::vector<ChaseStep> steps;     // empty unless recorded
  std::vector<ChaseLanding> landings;
  Token final_token;
};

/// Runs `length` single steps of the word from `start`. Landings are always
/// recorded; individual steps only when `record_steps`.
ChaseTrace chase_steps(const Scheduler& s, WordPattern word, const Token& start, long length,
                       bool record_steps = true);
/// Chase of `repetitions` repetitions of the word from U_m.
ChaseTrace chase(const Scheduler& s, WordPattern word, long m, long repetitions);

/// Plain-text ladder of a trace: one line per U visited.
std::string ladder_text(const ChaseTrace& t);

struct ClaimResult {
  std::string name;
  long n = 0;
  bool pass = false;
  std::string detail;
};

struct StepCountRow {
  long n = 0;
  long steps = 0;     // first step at which the token sits in U_{4n+4}
  long expected = 0;  // 16 n + 10
  bool parity_ok = false;
};

struct ScheduleReport {
  long n_max = 0;
  std::vector<StepCountRow> step_counts;
  long statements_checked = 0;   // per-map containments, over all n
  long composite_checked = 0;    // composite claims, over all n
  long periodic_starts = 0;      // pure-word starts found eventually periodic
  long max_landings_to_cycle = 0;
  std::vector<ClaimResult> failures;
  std::vector<ChaseTrace> failure_traces;
  bool metric_overlap = false;   // some schedule class lies in the concrete regime
  bool pass = false;
};

/// Runs every check for n = 1..n_max: the f o g step-count identity with
/// parity soundness, the four composite claims, the eight per-map
/// containments, and eventual periodicity of pure words from every
/// U_m, m <= 4 n_max + 4.
ScheduleReport verify_schedule(long n_max);

enum class OrbitClass { wandering, preperiodic };
const char* to_string(OrbitClass c);

struct ScheduleClassification {
  WordPattern word = WordPattern::pure_f;
  long start = 0;
  OrbitClass verdict = OrbitClass::preperiodic;
  std::vector<long> regions;  // region indices after successive landings
};

/// Token-level classification: f o g and g o f from U_{4n} (n <= n_max),
/// pure words from every U_m (m <= 4 n_max + 4).
std::vector<ScheduleClassification> classify_schedules(long n_max);

nlohmann::json to_json(const ChaseTrace& t);
nlohmann::json to_json(const ScheduleReport& r);
nlohmann::json to_json(const ScheduleClassification& c);

}  // namespace wanderlab
