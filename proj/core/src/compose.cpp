#include "wanderlab/compose.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "wanderlab/errors.hpp"

namespace wanderlab {

const char* to_string(MapId m) { return m == MapId::f ? "f" : "g"; }

std::string ContainmentStatement::str() const {
  std::ostringstream os;
  os << to_string(map) << "^{4n+" << exponent << "}(U_{4n+" << source << "}) in U_{4n+"
     << target << "}";
  return os.str();
}

std::vector<ContainmentStatement> schedule_statements() {
  return {
      {MapId::f, 1, 0, 0}, {MapId::f, 2, 1, 1}, {MapId::f, 3, 2, 3}, {MapId::f, 4, 3, 4},
      {MapId::g, 1, 0, 1}, {MapId::g, 2, 1, 2}, {MapId::g, 3, 2, 2}, {MapId::g, 4, 3, 3},
  };
}

std::pair<TransitionTable, TransitionTable> derive_tables(
    const std::vector<ContainmentStatement>& statements) {
  std::array<std::array<std::optional<ContainmentStatement>, 4>, 2> seen{};
  for (const ContainmentStatement& s : statements) {
    if (s.source < 0 || s.source > 3) {
      throw PreconditionError("statement source class outside 0..3: " + s.str());
    }
    // U_m needs m steps to reach its landing disk and one more to land.
    if (s.exponent != s.source + 1) {
      throw PreconditionError("statement exponent does not match the landing time: " + s.str());
    }
    if (s.target < s.source || s.target > s.source + 1) {
      throw PreconditionError("statement target is neither the same nor the next disk: " +
                              s.str());
    }
    auto& slot = seen[s.map == MapId::f ? 0 : 1][static_cast<size_t>(s.source)];
    if (slot && slot->target != s.target) {
      throw PreconditionError("inconsistent statements: " + slot->str() + " vs " + s.str());
    }
    slot = s;
  }
  std::array<TransitionTable, 2> tables{TransitionTable{MapId::f, {}},
                                        TransitionTable{MapId::g, {}}};
  for (size_t m = 0; m < 2; ++m) {
    for (size_t r = 0; r < 4; ++r) {
      if (!seen[m][r]) {
        throw PreconditionError(std::string("no statement for map ") +
                                to_string(tables[m].map) + " on class 4n+" + std::to_string(r));
      }
      tables[m].offset[r] = seen[m][r]->target;
    }
  }
  return {tables[0], tables[1]};
}

std::string Token::str() const {
  switch (kind) {
    case Kind::region:
      return "U_" + std::to_string(m);
    case Kind::advancing:
      return "advancing(U_" + std::to_string(m) + ", " + std::to_string(steps) + ")";
    case Kind::landing:
      return "landing(" + std::to_string(m) + ")";
  }
  return "?";
}

const char* to_string(WordPattern w) {
  switch (w) {
    case WordPattern::alternating_gf:
      return "alternating-gf";
    case WordPattern::alternating_fg:
      return "alternating-fg";
    case WordPattern::pure_f:
      return "pure-f";
    case WordPattern::pure_g:
      return "pure-g";
  }
  return "?";
}

MapId map_at(WordPattern w, long step) {
  const bool odd = step % 2 == 1;
  switch (w) {
    case WordPattern::alternating_fg:
      return odd ? MapId::g : MapId::f;
    case WordPattern::alternating_gf:
      return odd ? MapId::f : MapId::g;
    case WordPattern::pure_f:
      return MapId::f;
    case WordPattern::pure_g:
      return MapId::g;
  }
  return MapId::f;
}

long steps_per_repetition(WordPattern w) {
  return w == WordPattern::alternating_fg || w == WordPattern::alternating_gf ? 2 : 1;
}

Scheduler::Scheduler() {
  auto [f, g] = derive_tables(schedule_statements());
  f_ = f;
  g_ = g;
}

Token Scheduler::apply(const Token& t, MapId map) const {
  if (t.m < 1) throw DomainError("token region index must be >= 1");
  if (t.kind == Token::Kind::landing) return Token::in_region(table(map).target(t.m));
  Token next = t;
  next.steps += 1;
  next.kind = next.steps == next.m ? Token::Kind::landing : Token::Kind::advancing;
  return next;
}

ChaseTrace chase_steps(const Scheduler& s, WordPattern word, const Token& start, long length,
                       bool record_steps) {
  if (length < 0) throw DomainError("chase length must be >= 0");
  ChaseTrace tr;
  tr.word = word;
  tr.start = start;
  tr.length = length;
  Token cur = start;
  long step = 0;
  while (step < length) {
    if (!record_steps && cur.kind != Token::Kind::landing) {
      // Advancing steps do not depend on the map: jump to the landing disk.
      const long k = std::min(cur.m - cur.steps, length - step);
      cur.steps += k;
      step += k;
      cur.kind = cur.steps == cur.m ? Token::Kind::landing
                 : cur.steps == 0   ? Token::Kind::region
                                    : Token::Kind::advancing;
      continue;
    }
    ++step;
    const MapId map = map_at(word, step);
    const Token next = s.apply(cur, map);
    if (cur.kind == Token::Kind::landing) {
      tr.landings.push_back({step, map, cur.m, next.m});
    }
    if (record_steps) tr.steps.push_back({step, map, cur, next});
    cur = next;
  }
  tr.final_token = cur;
  return tr;
}

ChaseTrace chase(const Scheduler& s, WordPattern word, long m, long repetitions) {
  if (m < 1) throw DomainError("chase start index must be >= 1");
  if (repetitions < 1) throw DomainError("chase repetitions must be >= 1");
  return chase_steps(s, word, Token::in_region(m), repetitions * steps_per_repetition(word));
}

std::string ladder_text(const ChaseTrace& t) {
  std::ostringstream os;
  Token cur = t.start;
  long from_step = 0;
  os << to_string(t.word) << " from " << t.start.str() << "\n";
  for (const ChaseLanding& l : t.landings) {
    const long advance = l.step - 1 - from_step;
    os << "  " << cur.str() << "  --" << advance << " steps-->  landing(" << l.disk_class
       << ")  --" << to_string(l.map) << " @" << l.step << "-->  U_" << l.target << "\n";
    cur = Token::in_region(l.target);
    from_step = l.step;
  }
  os << "  final: " << t.final_token.str() << " after " << t.length << " steps\n";
  return os.str();
}

namespace {

// Token-level members of map^{-1}(U_m): landing tokens whose class the map
// sends to U_m.
std::vector<Token> preimage_tokens(const Scheduler& s, MapId map, long m) {
  std::vector<Token> out;
  for (long c = std::max(1L, m - 1); c <= m; ++c) {
    if (s.table(map).target(c) == m) out.push_back(Token::at_landing(c));
  }
  return out;
}

bool maps_into(const Scheduler& s, const Token& t, MapId map, long m) {
  return t.kind == Token::Kind::landing && s.table(map).target(t.m) == m;
}

// Map that sends class c to the next disk (advances the schedule).
std::optional<MapId> advancing_map(const Scheduler& s, long c) {
  if (s.table(MapId::f).target(c) == c + 1) return MapId::f;
  if (s.table(MapId::g).target(c) == c + 1) return MapId::g;
  return std::nullopt;
}

struct Recorder {
  ScheduleReport& report;
  const Scheduler& s;
  void fail(const std::string& name, long n, const std::string& detail, WordPattern w,
            const Token& start, long length) {
    report.failures.push_back({name, n, false, detail});
    if (report.failure_traces.size() < 8) {
      report.failure_traces.push_back(chase_steps(s, w, start, length, true));
    }
  }
};

// Index of the first landing at which the region sequence repeats (the
// cycle is entered by then), or -1 within `max_landings`.
long landings_to_cycle(const Scheduler& s, MapId map, long m, long max_landings) {
  std::map<long, long> first;
  long region = m;
  first[region] = 0;
  for (long i = 1; i <= max_landings; ++i) {
    region = s.table(map).target(region);
    if (first.count(region)) return i;
    first[region] = i;
  }
  return -1;
}

}  // namespace

ScheduleReport verify_schedule(long n_max) {
  if (n_max < 0) throw DomainError("verify_schedule: n_max must be >= 0");
  ScheduleReport rep;
  rep.n_max = n_max;
  const Scheduler s;
  Recorder rec{rep, s};
  const auto statements = schedule_statements();

  for (long n = 1; n <= n_max; ++n) {
    const long u0 = 4 * n;

    // Step-count identity and parity soundness of the f o g word.
    {
      const long expected = 16 * n + 10;
      const ChaseTrace t = chase_steps(s, WordPattern::alternating_fg, Token::in_region(u0),
                                       expected, false);
      StepCountRow row;
      row.n = n;
      row.expected = expected;
      row.steps = -1;
      for (const ChaseLanding& l : t.landings) {
        if (l.target == u0 + 4) {
          row.steps = l.step;
          break;
        }
      }
      row.parity_ok = t.landings.size() == 4;
      for (const ChaseLanding& l : t.landings) {
        const auto adv = advancing_map(s, l.disk_class);
        row.parity_ok = row.parity_ok && adv && *adv == l.map &&
                        l.map == map_at(WordPattern::alternating_fg, l.step);
      }
      if (row.steps != expected || !row.parity_ok) {
        rec.fail("step-count", n,
                 "reached U_" + std::to_string(u0 + 4) + " at step " + std::to_string(row.steps),
                 WordPattern::alternating_fg, Token::in_region(u0), expected);
      }
      rep.step_counts.push_back(row);
    }

    // Composite claims.
    const long cycle = 2 * (8 * n + 5);
    {
      const ChaseTrace t =
          chase_steps(s, WordPattern::alternating_fg, Token::in_region(u0), cycle, false);
      ++rep.composite_checked;
      if (!(t.final_token == Token::in_region(u0 + 4))) {
        rec.fail("(f o g)^{8n+5}(U_{4n}) in U_{4n+4}", n, "final " + t.final_token.str(),
                 WordPattern::alternating_fg, Token::in_region(u0), cycle);
      }
    }
    {
      const ChaseTrace t =
          chase_steps(s, WordPattern::alternating_gf, Token::in_region(u0), 4 * n, false);
      ++rep.composite_checked;
      if (!maps_into(s, t.final_token, MapId::f, u0)) {
        rec.fail("(g o f)^{2n}(U_{4n}) in f^{-1}(U_{4n})", n, "final " + t.final_token.str(),
                 WordPattern::alternating_gf, Token::in_region(u0), 4 * n);
      }
    }
    {
      ++rep.composite_checked;
      const auto members = preimage_tokens(s, MapId::f, u0);
      if (members.empty()) {
        rep.failures.push_back({"(g o f)^{8n+5}(f^{-1}(U_{4n})) in f^{-1}(U_{4n+4})", n, false,
                                "f^{-1}(U_{4n}) has no token-level member"});
      }
      for (const Token& start : members) {
        const ChaseTrace t = chase_steps(s, WordPattern::alternating_gf, start, cycle, false);
        if (!maps_into(s, t.final_token, MapId::f, u0 + 4)) {
          rec.fail("(g o f)^{8n+5}(f^{-1}(U_{4n})) in f^{-1}(U_{4n+4})", n,
                   "from " + start.str() + " final " + t.final_token.str(),
                   WordPattern::alternating_gf, start, cycle);
        }
      }
    }
    {
      // The two g o f claims chained: (g o f)^{10n+5}(U_{4n}) in f^{-1}(U_{4n+4}).
      const long len = 4 * n + cycle;
      const ChaseTrace t =
          chase_steps(s, WordPattern::alternating_gf, Token::in_region(u0), len, false);
      ++rep.composite_checked;
      if (!maps_into(s, t.final_token, MapId::f, u0 + 4)) {
        rec.fail("(g o f)^{10n+5}(U_{4n}) in f^{-1}(U_{4n+4})", n, "final " + t.final_token.str(),
                 WordPattern::alternating_gf, Token::in_region(u0), len);
      }
    }

    // Per-map containments.
    for (const ContainmentStatement& st : statements) {
      const WordPattern w = st.map == MapId::f ? WordPattern::pure_f : WordPattern::pure_g;
      const long len = 4 * n + st.exponent;
      const Token start = Token::in_region(4 * n + st.source);
      const ChaseTrace t = chase_steps(s, w, start, len, false);
      ++rep.statements_checked;
      if (!(t.final_token == Token::in_region(4 * n + st.target))) {
        rec.fail(st.str(), n, "final " + t.final_token.str(), w, start, len);
      }
    }
  }

  // Eventual periodicity of the pure words.
  if (n_max > 0) {
    const long m_max = 4 * n_max + 4;
    for (long m = 1; m <= m_max; ++m) {
      for (MapId map : {MapId::f, MapId::g}) {
        const long k = landings_to_cycle(s, map, m, m + 5);
        if (k < 0) {
          rep.failures.push_back({std::string("pure-") + to_string(map) + " periodicity", m,
                                  false, "no cycle within m + 5 landings"});
        } else {
          ++rep.periodic_starts;
          rep.max_landings_to_cycle = std::max(rep.max_landings_to_cycle, k);
        }
      }
    }
  }
  // The concrete regime covers U_1 only; schedule classes start at U_4.
  rep.metric_overlap = false;
  rep.pass = rep.failures.empty();
  return rep;
}

const char* to_string(OrbitClass c) {
  return c == OrbitClass::wandering ? "wandering" : "preperiodic";
}

namespace {

// Follows landings of the word from `start`, recording regions. A repeated
// (region, step parity) state proves eventual periodicity; steady growth
// over the horizon is reported as wandering.
ScheduleClassification classify_one(const Scheduler& s, WordPattern word, const Token& start,
                                    long start_index, long horizon) {
  ScheduleClassification c;
  c.word = word;
  c.start = start_index;
  std::map<std::pair<long, int>, long> seen;
  Token cur = start;
  long step = 0;
  seen[{cur.m, 0}] = 0;
  for (long i = 1; i <= horizon; ++i) {
    // m - steps advancing steps, then the landing step.
    step += cur.m - cur.steps + 1;
    cur = s.apply(Token::at_landing(cur.m), map_at(word, step));
    c.regions.push_back(cur.m);
    const int phase = steps_per_repetition(word) == 2 ? static_cast<int>(step % 2) : 0;
    if (seen.count({cur.m, phase})) {
      c.verdict = OrbitClass::preperiodic;
      return c;
    }
    seen[{cur.m, phase}] = i;
  }
  const bool growing = c.regions.size() >= 4 && c.regions.back() >= start_index + 4 &&
                       std::is_sorted(c.regions.begin() + 1, c.regions.end(),
                                      [](long a, long b) { return a <= b; });
  if (!growing) {
    throw CertificationError("schedule neither repeats nor grows within the horizon",
                             static_cast<int>(start_index));
  }
  c.verdict = OrbitClass::wandering;
  return c;
}

}  // namespace

std::vector<ScheduleClassification> classify_schedules(long n_max) {
  if (n_max < 0) throw DomainError("classify_schedules: n_max must be >= 0");
  const Scheduler s;
  std::vector<ScheduleClassification> out;
  for (long n = 1; n <= n_max; ++n) {
    out.push_back(classify_one(s, WordPattern::alternating_fg, Token::in_region(4 * n), 4 * n, 16));
    out.push_back(classify_one(s, WordPattern::alternating_gf, Token::in_region(4 * n), 4 * n, 16));
  }
  if (n_max > 0) {
    for (long m = 1; m <= 4 * n_max + 4; ++m) {
      out.push_back(classify_one(s, WordPattern::pure_f, Token::in_region(m), m, m + 5));
      out.push_back(classify_one(s, WordPattern::pure_g, Token::in_region(m), m, m + 5));
    }
  }
  return out;
}

}  // namespace wanderlab
