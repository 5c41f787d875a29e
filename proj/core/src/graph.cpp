#include "wanderlab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "wanderlab/errors.hpp"

namespace wanderlab {
namespace {

constexpr double kHalfPi = M_PI / 2.0;
constexpr double kConnectorLength = M_PI / 2.0 - 1.0;  // from i pi/2 to i(pi-1)
constexpr long kMaxGraphDisks = 200;  // cosh(n pi) must stay a finite double
constexpr double kHeadEdges = 4096.0;

int parity_sign(double k) { return std::fmod(k, 2.0) == 0.0 ? 1 : -1; }

Box box_of(std::initializer_list<Complex> pts) {
  Box b{INFINITY, -INFINITY, INFINITY, -INFINITY};
  for (Complex p : pts) {
    b.x0 = std::min(b.x0, p.real());
    b.x1 = std::max(b.x1, p.real());
    b.y0 = std::min(b.y0, p.imag());
    b.y1 = std::max(b.y1, p.imag());
  }
  return b;
}

// e^{i phi} - 1 without cancellation for small phi.
Complex expi_minus_one(double phi) {
  const double s = std::sin(phi / 2.0);
  return {-2.0 * s * s, std::sin(phi)};
}

// Ratios for a collinear chain given its edge lengths in order: the largest
// adjacent ratio and the largest diam/dist over pairs one or two edges apart.
void collinear_ratios(const std::vector<double>& e, double& adjacent, double& nonadjacent) {
  for (size_t i = 0; i + 1 < e.size(); ++i) {
    adjacent = std::max({adjacent, e[i] / e[i + 1], e[i + 1] / e[i]});
  }
  for (size_t i = 0; i + 2 < e.size(); ++i) {
    nonadjacent = std::max({nonadjacent, e[i] / e[i + 1], e[i + 2] / e[i + 1]});
    if (i + 3 < e.size()) {
      const double gap = e[i + 1] + e[i + 2];
      nonadjacent = std::max({nonadjacent, e[i] / gap, e[i + 3] / gap});
    }
  }
}

// ---------------------------------------------------------------------------
// Vertical side of the strip: vertices i asin(k/K), k = -K..K.
class VerticalSideRun final : public Run {
 public:
  explicit VerticalSideRun(long K) : K_(static_cast<double>(K)) {
    tag = ComponentTag::strip_boundary;
    edge_kind = EdgeKind::segment;
    key = {VertexKey{VertexKey::corner, 0, 0, -1}, VertexKey{VertexKey::corner, 0, 0, 1}};
    anchor = {Complex(0.0, -kHalfPi), Complex(0.0, kHalfPi)};
    const int l = parity_sign(K_);
    label = {l, l};
  }
  double edge_count() const override { return 2.0 * K_; }
  double edge_diam(Side, double k) const override { return pos(k + 1) - pos(k); }
  double block_max_diam(Side s, double k0, double k1) const override {
    return std::max(edge_diam(s, k0), edge_diam(s, k1 - 1));
  }
  double block_min_diam(Side s, double k0, double k1) const override {
    double m = std::min(edge_diam(s, k0), edge_diam(s, k1 - 1));
    for (double c : {K_ - 1.0, K_}) {
      if (c >= k0 && c < k1) m = std::min(m, edge_diam(s, c));
    }
    return m;
  }
  double split_index() const override { return K_; }
  double internal_adjacent_ratio() const override { return ratios().first; }
  double internal_nonadjacent_ratio() const override { return ratios().second; }

 protected:
  // Distance from the end vertex to vertex k: 2 asin(sqrt(k / 2K)).
  double pos(double k) const { return 2.0 * std::asin(std::sqrt(k / (2.0 * K_))); }
  Complex q_offset(Side s, double k) const override {
    return s == Side::start ? Complex(0.0, pos(k)) : Complex(0.0, -pos(k));
  }

 private:
  std::pair<double, double> ratios() const {
    std::vector<double> e;
    for (double k = 0; k < 2.0 * K_; ++k) {
      // Symmetric evaluation: from the nearer end.
      e.push_back(k < K_ ? edge_diam(Side::start, k) : edge_diam(Side::start, 2.0 * K_ - 1.0 - k));
    }
    double a = 1.0, b = 1.0;
    collinear_ratios(e, a, b);
    return {a, b};
  }
  double K_;
};

// ---------------------------------------------------------------------------
// Horizontal side between consecutive junctions: vertices acosh(j/K) + i pi/2
// for K_n <= j <= K_{n+1} (K_0 = K, the corner).
class HorizontalRun final : public Run {
 public:
  HorizontalRun(long n_, double K, double c0, double c1, double count, int l0, int l1,
                VertexKey k0, VertexKey k1, double x0, double x1, int sx_, int sy_)
      : K_(K), c0_(c0), c1_(c1), count_(count) {
    n = n_;
    sx = sx_;
    sy = sy_;
    tag = ComponentTag::strip_boundary;
    edge_kind = EdgeKind::segment;
    key = {k0, k1};
    anchor = {Complex(sx * x0, sy * kHalfPi), Complex(sx * x1, sy * kHalfPi)};
    label = {l0, l1};
  }
  double edge_count() const override { return count_; }
  double edge_diam(Side s, double k) const override {
    if (s == Side::start) return acosh_step(c0_ + k / K_, 1.0 / K_);
    return acosh_step(c1_ - (k + 1.0) / K_, 1.0 / K_);
  }
  // Edges shrink away from the corner, so from the start they decrease.
  double block_max_diam(Side s, double k0, double k1) const override {
    return s == Side::start ? edge_diam(s, k0) : edge_diam(s, k1 - 1);
  }
  double block_min_diam(Side s, double k0, double k1) const override {
    return s == Side::start ? edge_diam(s, k1 - 1) : edge_diam(s, k0);
  }
  double internal_adjacent_ratio() const override { return ratios().first; }
  double internal_nonadjacent_ratio() const override { return ratios().second; }

  // With g(x) = 1 / (K sinh x) the edges satisfy l_j in [g(x_{j+1}), g(x_j)],
  // so both sum l_j^2 and the integral of g over the block lie in
  // [sum l_j g(x_{j+1}), sum l_j g(x_j)]; their gap telescopes to at most
  // l_max (g(x_a) - g(x_b)). The integral is (1/2K) ln of a ratio of
  // tanh^2(x/2) = (c - 1) / (c + 1), written without cancellation.
  void block_sum_sq(Side s, double k0, double k1, double& lo, double& hi) const override {
    if (k1 - k0 <= kHeadEdges) {
      Run::block_sum_sq(s, k0, k1, lo, hi);
      return;
    }
    const double ca = s == Side::start ? c0_ + k0 / K_ : c1_ - k1 / K_;
    const double cb = s == Side::start ? c0_ + k1 / K_ : c1_ - k0 / K_;
    const double dc = (k1 - k0) / K_;
    if (!(ca > 1.0)) {
      Run::block_sum_sq(s, k0, k1, lo, hi);
      return;
    }
    const double integral =
        std::log1p((2.0 * dc / (ca - 1.0)) / (cb + 1.0)) / (2.0 * K_);
    auto g = [&](double c) { return 1.0 / (K_ * std::sqrt(c - 1.0) * std::sqrt(c + 1.0)); };
    const double lmax = block_max_diam(s, k0, k1), lmin = block_min_diam(s, k0, k1);
    const double err = lmax * (g(ca) - g(cb)) + 1e-13 * integral;
    const double span = acosh_step(ca, dc);
    lo = std::max(integral - err, lmin * span * (1.0 - 1e-13));
    hi = std::min(integral + err, lmax * span * (1.0 + 1e-13));
  }

 protected:
  Complex q_offset(Side s, double k) const override {
    if (k == 0.0) return 0.0;
    if (s == Side::start) return acosh_step(c0_, k / K_);
    return -acosh_step(c1_ - k / K_, k / K_);
  }

 private:
  // Adjacent ratios e_k / e_{k+1} decrease along the run, so the head from
  // the start bounds every ratio on the run.
  std::pair<double, double> ratios() const {
    std::vector<double> e;
    const double m = std::min(count_, kHeadEdges);
    for (double k = 0; k < m; ++k) e.push_back(edge_diam(Side::start, k));
    double a = 1.0, b = 1.0;
    collinear_ratios(e, a, b);
    return {a, b};
  }
  double K_, c0_, c1_, count_;
};

// ---------------------------------------------------------------------------
// Half of the circle bounding D_n with d arcs between the bottom and top
// vertices; right half counterclockwise bottom -> top, left half top -> bottom.
class CircleHalfRun final : public Run {
 public:
  CircleHalfRun(long n_, double a, double d, bool right, int l, int sx_, int sy_)
      : d_(d) {
    n = n_;
    sx = sx_;
    sy = sy_;
    tag = ComponentTag::disk_boundary;
    edge_kind = EdgeKind::circular_arc;
    const VertexKey bottom{VertexKey::disk_bottom, n, sx, sy};
    const VertexKey top{VertexKey::disk_top, n, sx, sy};
    const Complex zb(sx * a, sy * (M_PI - 1.0));
    const Complex zt(sx * a, sy * (M_PI + 1.0));
    key = right ? std::array{bottom, top} : std::array{top, bottom};
    anchor = right ? std::array{zb, zt} : std::array{zt, zb};
    label = {l, l};
    theta_[0] = right ? -kHalfPi : kHalfPi;
    theta_[1] = right ? kHalfPi : 3.0 * kHalfPi;
  }
  double edge_count() const override { return d_; }
  double edge_diam(Side, double) const override { return chord(); }
  double block_max_diam(Side, double, double) const override { return chord(); }
  double block_min_diam(Side, double, double) const override { return chord(); }
  double internal_adjacent_ratio() const override { return 1.0; }
  double internal_nonadjacent_ratio() const override { return d_ >= 3.0 ? 1.0 : 0.0; }
  bool is_arc() const override { return true; }

 protected:
  double chord() const { return 2.0 * std::sin(kHalfPi / d_); }
  // Point at arc parameter phi from side s, relative to that side's vertex.
  Complex at(Side s, double phi) const {
    const int i = static_cast<int>(s);
    const double dir = s == Side::start ? 1.0 : -1.0;
    return std::polar(1.0, theta_[i]) * expi_minus_one(dir * phi);
  }
  Complex q_offset(Side s, double k) const override { return at(s, M_PI * k / d_); }
  Complex q_point(Side s, double k, double t) const override {
    return at(s, M_PI * (k + t) / d_);
  }
  Box q_block_box(Side s, double k0, double k1) const override {
    const double p0 = M_PI * k0 / d_, p1 = M_PI * k1 / d_;
    Box b = box_of({at(s, p0), at(s, p1)});
    // Axis extremes of the circle inside the swept range. The end angles are
    // multiples of pi/2, so the extremes sit at p = j pi/2; working in p
    // (not in the absolute angle) keeps tiny blocks near an end exact.
    for (double j = std::ceil(p0 / kHalfPi); j * kHalfPi <= p1; ++j) {
      const Complex pt = at(s, j * kHalfPi);
      b.x0 = std::min(b.x0, pt.real());
      b.x1 = std::max(b.x1, pt.real());
      b.y0 = std::min(b.y0, pt.imag());
      b.y1 = std::max(b.y1, pt.imag());
    }
    return b;
  }

 private:
  double d_;
  double theta_[2];
};

// ---------------------------------------------------------------------------
// Vertical chains with explicit or uniform edge lengths.
class ConnectorRun final : public Run {
 public:
  ConnectorRun(const ConnectorPlan& plan, double a, int l0, int l1, int sx_, int sy_)
      : plan_(plan), nb_(static_cast<double>(plan.bottom.size())) {
    n = plan.n;
    sx = sx_;
    sy = sy_;
    tag = ComponentTag::connector;
    edge_kind = EdgeKind::segment;
    key = {VertexKey{VertexKey::junction, n, sx, sy}, VertexKey{VertexKey::disk_bottom, n, sx, sy}};
    anchor = {Complex(sx * a, sy * kHalfPi), Complex(sx * a, sy * (M_PI - 1.0))};
    label = {l0, l1};
  }
  double edge_count() const override { return plan_.edge_count(); }
  double edge_diam(Side s, double k) const override {
    if (s == Side::start) return plan_.length(k);
    return k < plan_.middle_count ? plan_.middle_length : dyadic_from_end(k);
  }
  double block_max_diam(Side s, double k0, double k1) const override {
    double m = 0.0;
    for_each_piece(s, k0, k1, [&](double e, double) { m = std::max(m, e); });
    return m;
  }
  double block_min_diam(Side s, double k0, double k1) const override {
    double m = INFINITY;
    for_each_piece(s, k0, k1, [&](double e, double) { m = std::min(m, e); });
    return m;
  }
  void block_sum_sq(Side s, double k0, double k1, double& lo, double& hi) const override {
    double sum = 0.0;
    for_each_piece(s, k0, k1, [&](double e, double count) { sum += count * e * e; });
    lo = sum * (1.0 - 1e-13);
    hi = sum * (1.0 + 1e-13);
  }
  double split_index() const override {
    return std::clamp(nb_ + std::floor(plan_.middle_count / 2.0), 1.0,
                      std::max(1.0, edge_count() - 1.0));
  }
  double internal_adjacent_ratio() const override {
    double a = 1.0, b = 1.0;
    collinear_ratios(representative(), a, b);
    return a;
  }
  double internal_nonadjacent_ratio() const override {
    double a = 1.0, b = edge_count() >= 3.0 ? 1.0 : 0.0;
    collinear_ratios(representative(), a, b);
    return b;
  }

 protected:
  Complex q_offset(Side s, double k) const override {
    if (s == Side::start) return {0.0, plan_.offset(k)};
    // Uniform edges first, then the dyadic pieces from the top.
    double sum = std::min(k, plan_.middle_count) * plan_.middle_length;
    for (double j = plan_.middle_count; j < k; ++j) sum += dyadic_from_end(j);
    return {0.0, -sum};
  }

 private:
  double dyadic_from_end(double k) const {
    return plan_.bottom[static_cast<size_t>(nb_ - 1.0 - (k - plan_.middle_count))];
  }
  // Calls f(length, multiplicity) for the distinct pieces of [k0, k1).
  template <class F>
  void for_each_piece(Side s, double k0, double k1, F&& f) const {
    const double mc = plan_.middle_count;
    if (s == Side::start) {
      for (double k = k0; k < std::min(k1, nb_); ++k) f(plan_.length(k), 1.0);
      const double m0 = std::max(k0, nb_), m1 = std::min(k1, nb_ + mc);
      if (m1 > m0) f(plan_.middle_length, m1 - m0);
    } else {
      const double m1 = std::min(k1, mc);
      if (m1 > k0) f(plan_.middle_length, m1 - k0);
      for (double k = std::max(k0, mc); k < k1; ++k) f(dyadic_from_end(k), 1.0);
    }
  }
  // The uniform part contributes at most three consecutive edges to any
  // ratio over gaps of one or two edges.
  std::vector<double> representative() const {
    std::vector<double> e = plan_.bottom;
    for (double i = 0; i < std::min(plan_.middle_count, 3.0); ++i) e.push_back(plan_.middle_length);
    return e;
  }
  ConnectorPlan plan_;
  double nb_;
};

class UniformRayRun final : public Run {
 public:
  UniformRayRun(ComponentTag tag_, long n_, Complex start, double spacing, double count,
                VertexKey k0, long run_id, int l0, int sx_, int sy_)
      : s_(spacing), count_(count) {
    tag = tag_;
    n = n_;
    sx = sx_;
    sy = sy_;
    edge_kind = EdgeKind::ray_segment;
    key = {k0, VertexKey{VertexKey::free_end, run_id, sx, sy}};
    anchor = {start, start + Complex(0.0, sy * spacing * count)};
    label = {l0, l0 * parity_sign(count)};
  }
  double edge_count() const override { return count_; }
  double edge_diam(Side, double) const override { return s_; }
  double block_max_diam(Side, double, double) const override { return s_; }
  double block_min_diam(Side, double, double) const override { return s_; }
  double internal_adjacent_ratio() const override { return 1.0; }
  double internal_nonadjacent_ratio() const override { return count_ >= 3.0 ? 1.0 : 0.0; }
  void block_sum_sq(Side, double k0, double k1, double& lo, double& hi) const override {
    lo = hi = (k1 - k0) * s_ * s_;
  }

 protected:
  Complex q_offset(Side s, double k) const override {
    return s == Side::start ? Complex(0.0, s_ * k) : Complex(0.0, -s_ * k);
  }

 private:
  double s_, count_;
};

}  // namespace

// ---------------------------------------------------------------------------

const char* to_string(ComponentTag tag) {
  switch (tag) {
    case ComponentTag::strip_boundary:
      return "strip_boundary";
    case ComponentTag::disk_boundary:
      return "disk_boundary";
    case ComponentTag::connector:
      return "connector";
    case ComponentTag::ray:
      return "ray";
    case ComponentTag::axis:
      return "axis";
  }
  return "unknown";
}

const char* to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::segment:
      return "segment";
    case EdgeKind::circular_arc:
      return "circular_arc";
    case EdgeKind::ray_segment:
      return "ray_segment";
  }
  return "unknown";
}

double box_distance(const Box& a, const Box& b) {
  const double dx = std::max({0.0, a.x0 - b.x1, b.x0 - a.x1});
  const double dy = std::max({0.0, a.y0 - b.y1, b.y0 - a.y1});
  return std::hypot(dx, dy);
}

double acosh_step(double c, double delta) {
  // acosh(c + delta) - acosh(c) = log((c + delta + s') / (c + s))
  //   = log1p((delta + (s' - s)) / (c + s)),  s' - s = delta (2c + delta) / (s' + s).
  const double s = std::sqrt(c - 1.0) * std::sqrt(c + 1.0);
  const double cd = c + delta;
  const double s2 = std::sqrt(cd - 1.0) * std::sqrt(cd + 1.0);
  return std::log1p((delta + delta * ((2.0 * c + delta) / (s2 + s))) / (c + s));
}

Box Run::block_box(Side s, double k0, double k1) const {
  const Box q = q_block_box(s, k0, k1);
  Box b = q;
  if (sx < 0) {
    b.x0 = -q.x1;
    b.x1 = -q.x0;
  }
  if (sy < 0) {
    b.y0 = -q.y1;
    b.y1 = -q.y0;
  }
  return b;
}

Box Run::q_block_box(Side s, double k0, double k1) const {
  return box_of({q_offset(s, k0), q_offset(s, k1)});
}

void Run::block_sum_sq(Side s, double k0, double k1, double& lo, double& hi) const {
  if (k1 - k0 <= 4096.0) {
    double sum = 0.0;
    for (double k = k0; k < k1; ++k) {
      const double e = edge_diam(s, k);
      sum += e * e;
    }
    lo = sum * (1.0 - 1e-13);
    hi = sum * (1.0 + 1e-13);
    return;
  }
  const double a = block_min_diam(s, k0, k1), b = block_max_diam(s, k0, k1);
  lo = a * a * (k1 - k0);
  hi = b * b * (k1 - k0);
}

bool Run::is_horizontal() const {
  const Complex t = tangent(Side::start);
  return std::fabs(t.real()) > std::fabs(t.imag());
}

Complex Run::q_point(Side s, double k, double t) const {
  const Complex a = q_offset(s, k), b = q_offset(s, k + 1.0);
  return a + t * (b - a);
}

Complex Run::tangent(Side s) const {
  // A tiny step along the first edge; for arcs this is the chord direction
  // of a short sub-arc, which converges to the tangent.
  const Complex p = edge_point(s, 0.0, is_arc() ? 1e-6 : 1.0);
  return p / std::abs(p);
}

int Run::vertex_label(Side s, double k) const {
  return label[static_cast<int>(s)] * parity_sign(k);
}

std::string Run::name() const {
  std::ostringstream os;
  os << to_string(tag) << "[n=" << n << ",sx=" << sx << ",sy=" << sy << "]";
  return os.str();
}

// ---------------------------------------------------------------------------

double ConnectorPlan::edge_count() const {
  return static_cast<double>(bottom.size()) + middle_count;
}

double ConnectorPlan::length(double i) const {
  const double nb = static_cast<double>(bottom.size());
  return i < nb ? bottom[static_cast<size_t>(i)] : middle_length;
}

double ConnectorPlan::offset(double i) const {
  double sum = 0.0;
  for (size_t j = 0; j < bottom.size() && static_cast<double>(j) < i; ++j) sum += bottom[j];
  const double nb = static_cast<double>(bottom.size());
  if (i > nb) sum += std::min(i - nb, middle_count) * middle_length;
  return sum;
}

ConnectorPlan plan_connector(long n, const AnchorData& anchor, double d,
                             long lambda_over_pi) {
  ConnectorPlan p;
  p.n = n;
  const double K = static_cast<double>(lambda_over_pi);
  p.L = acosh_step(std::cosh(n * M_PI), 1.0 / K);
  p.ell = M_PI / d;
  p.mu = std::min(p.ell, kConnectorLength / 4.0);
  const double m = std::round(kConnectorLength / p.mu);
  p.middle_length = kConnectorLength / m;
  p.middle_count = m - 1.0;

  int depth = 0;
  while (std::ldexp(p.middle_length, -depth) > p.L) ++depth;
  // Labels: junction (-1)^{K_n}, bottom of the circle (-1)^{d/2}; the path
  // has m + J edges.
  const int l0 = anchor.floor_even ? 1 : -1;
  const int l1 = parity_sign(d / 2.0);
  if (l0 * parity_sign(m + depth) != l1) {
    ++depth;
    p.parity_adjusted = true;
  }
  p.depth = depth;
  if (depth == 0) {
    p.bottom = {p.middle_length};
  } else {
    p.bottom.push_back(std::ldexp(p.middle_length, -depth));
    for (int j = depth; j >= 1; --j) p.bottom.push_back(std::ldexp(p.middle_length, -j));
  }
  return p;
}

Graph::Graph(const ParameterSet& params, const GraphOptions& options)
    : params_(params), options_(options), anchors_(params.lambda_over_pi) {
  params_.validate();
  const long N = options.n_disks;
  if (N < 1) throw PreconditionError("build_graph: N_disks must be >= 1");
  if (N > kMaxGraphDisks) {
    throw RangeError("build_graph: N_disks above " + std::to_string(kMaxGraphDisks) +
                     " is outside the double range of the horizontal side");
  }
  const long Kl = params.lambda_over_pi;
  const double K = static_cast<double>(Kl);
  height_ = options.ray_height > 0.0 ? options.ray_height : anchors_.a(N);

  runs_.push_back(std::make_unique<VerticalSideRun>(Kl));
  const int corner_label = parity_sign(K);
  long run_id = 0;
  const double axis_spacing = 2.0 * std::asin(std::sqrt(1.0 / (2.0 * K)));
  const double axis_count = std::floor((height_ - kHalfPi) / axis_spacing);

  for (long n = 1; n <= N; ++n) {
    const double d = params.d(n);
    if (!std::isfinite(d)) throw RangeError("build_graph: d_" + std::to_string(n) + " overflows");
    plans_.push_back(plan_connector(n, anchors_.get(n), d, Kl));
  }

  for (int sy : {1, -1}) {
    if (axis_count >= 1.0) {
      runs_.push_back(std::make_unique<UniformRayRun>(
          ComponentTag::axis, 0, Complex(0.0, sy * kHalfPi), axis_spacing, axis_count,
          VertexKey{VertexKey::corner, 0, 0, sy}, run_id++, corner_label, 1, sy));
    }
    for (int sx : {1, -1}) {
      // Horizontal side: corner -> junction 1 -> ... -> junction N+1.
      for (long n = 0; n <= N; ++n) {
        const AnchorData& hi = anchors_.get(n + 1);
        const double c0 = n == 0 ? 1.0 : anchors_.get(n).cosh_a;
        const double f0 = n == 0 ? K : anchors_.get(n).floor_value;
        const int l0 = n == 0 ? corner_label : (anchors_.get(n).floor_even ? 1 : -1);
        const int l1 = hi.floor_even ? 1 : -1;
        const VertexKey k0 = n == 0 ? VertexKey{VertexKey::corner, 0, 0, sy}
                                    : VertexKey{VertexKey::junction, n, sx, sy};
        const VertexKey k1 = n + 1 <= N ? VertexKey{VertexKey::junction, n + 1, sx, sy}
                                        : VertexKey{VertexKey::free_end, -1 - (run_id++), sx, sy};
        const double x0 = n == 0 ? 0.0 : anchors_.get(n).a;
        runs_.push_back(std::make_unique<HorizontalRun>(n, K, c0, hi.cosh_a, hi.floor_value - f0,
                                                        l0, l1, k0, k1, x0, hi.a, sx, sy));
      }
      for (long n = 1; n <= N; ++n) {
        const AnchorData& an = anchors_.get(n);
        const double d = params.d(n);
        const int ld = parity_sign(d / 2.0);
        runs_.push_back(std::make_unique<CircleHalfRun>(n, an.a, d, true, ld, sx, sy));
        runs_.push_back(std::make_unique<CircleHalfRun>(n, an.a, d, false, ld, sx, sy));
        runs_.push_back(std::make_unique<ConnectorRun>(plans_[n - 1], an.a,
                                                       an.floor_even ? 1 : -1, ld, sx, sy));
        const double spacing = M_PI / d;
        const double count = std::floor((height_ - (M_PI + 1.0)) / spacing);
        if (count >= 1.0) {
          runs_.push_back(std::make_unique<UniformRayRun>(
              ComponentTag::ray, n, Complex(sx * an.a, sy * (M_PI + 1.0)), spacing, count,
              VertexKey{VertexKey::disk_top, n, sx, sy}, run_id++, ld, sx, sy));
        }
      }
    }
  }
}

double Graph::edge_count() const {
  double e = 0.0;
  for (const auto& r : runs_) e += r->edge_count();
  return e;
}

double Graph::vertex_count() const {
  // Interior vertices of each run plus distinct end vertices.
  double v = 0.0;
  std::vector<VertexKey> ends;
  for (const auto& r : runs_) {
    v += r->edge_count() - 1.0;
    for (const auto& k : r->key) {
      if (std::find(ends.begin(), ends.end(), k) == ends.end()) ends.push_back(k);
    }
  }
  return v + static_cast<double>(ends.size());
}

std::vector<std::string> Graph::label_conflicts() const {
  std::vector<std::string> out;
  std::vector<std::pair<VertexKey, int>> seen;
  for (const auto& r : runs_) {
    for (int s = 0; s < 2; ++s) {
      auto it = std::find_if(seen.begin(), seen.end(),
                             [&](const auto& p) { return p.first == r->key[s]; });
      if (it == seen.end()) {
        seen.emplace_back(r->key[s], r->label[s]);
      } else if (it->second != r->label[s]) {
        out.push_back("label mismatch at an end vertex of " + r->name());
      }
    }
    // Alternation along the run. Counts beyond 2^53 are not exact doubles;
    // their parity is fixed by construction (certified floor parities, or
    // the connector's parity adjustment).
    const double c = r->edge_count();
    if (c > 9.0e15) continue;
    if (r->label[1] != r->label[0] * parity_sign(c)) {
      out.push_back("labels do not alternate along " + r->name());
    }
  }
  return out;
}

Graph build_graph(const ParameterSet& params, long n_disks) {
  GraphOptions o;
  o.n_disks = n_disks;
  return Graph(params, o);
}

ExplicitGraph materialize(const Graph& g, double max_edges) {
  if (g.edge_count() > max_edges) {
    throw RangeError("graph too large to materialize (" + std::to_string(g.edge_count()) +
                     " edges)");
  }
  ExplicitGraph out;
  std::vector<std::pair<VertexKey, size_t>> ends;
  auto end_vertex = [&](const Run& r, int s) {
    for (const auto& [k, i] : ends) {
      if (k == r.key[s]) return i;
    }
    out.vertices.push_back({r.anchor[s], r.label[s]});
    ends.emplace_back(r.key[s], out.vertices.size() - 1);
    return out.vertices.size() - 1;
  };
  for (const auto& rp : g.runs()) {
    const Run& r = *rp;
    const long count = static_cast<long>(r.edge_count());
    std::vector<size_t> ids(count + 1);
    ids[0] = end_vertex(r, 0);
    for (long k = 1; k < count; ++k) {
      const bool near_start = 2 * k <= count;
      const Complex p = near_start ? r.anchor[0] + r.vertex_offset(Side::start, k)
                                   : r.anchor[1] + r.vertex_offset(Side::end, count - k);
      out.vertices.push_back({p, r.vertex_label(Side::start, k)});
      ids[k] = out.vertices.size() - 1;
    }
    ids[count] = end_vertex(r, 1);
    for (long k = 0; k < count; ++k) {
      ExplicitEdge e;
      e.kind = r.edge_kind;
      e.tag = r.tag;
      e.n = r.n;
      e.v0 = ids[k];
      e.v1 = ids[k + 1];
      e.diameter = r.edge_diam(Side::start, k);
      if (r.is_arc()) e.center = Complex(r.anchor[0].real(), r.sy * M_PI);
      out.edges.push_back(e);
    }
  }
  return out;
}

nlohmann::json graph_to_json(const Graph& g, double max_edges) {
  nlohmann::json j;
  j["n_disks"] = g.n_disks();
  j["ray_height"] = g.ray_height();
  j["lambda_over_pi"] = g.params().lambda_over_pi;
  j["edge_count"] = g.edge_count();
  j["vertex_count"] = g.vertex_count();
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& r : g.runs()) {
    runs.push_back({{"tag", to_string(r->tag)},
                    {"kind", to_string(r->edge_kind)},
                    {"n", r->n},
                    {"sx", r->sx},
                    {"sy", r->sy},
                    {"edges", r->edge_count()},
                    {"start", {r->anchor[0].real(), r->anchor[0].imag()}},
                    {"end", {r->anchor[1].real(), r->anchor[1].imag()}},
                    {"labels", {r->label[0], r->label[1]}}});
  }
  j["runs"] = runs;
  if (g.edge_count() <= max_edges) {
    const ExplicitGraph e = materialize(g, max_edges);
    nlohmann::json vs = nlohmann::json::array();
    for (const auto& v : e.vertices) vs.push_back({v.position.real(), v.position.imag(), v.label});
    nlohmann::json es = nlohmann::json::array();
    for (const auto& x : e.edges) {
      es.push_back({{"v", {x.v0, x.v1}},
                    {"kind", to_string(x.kind)},
                    {"tag", to_string(x.tag)},
                    {"n", x.n},
                    {"diameter", x.diameter}});
    }
    j["vertices"] = vs;
    j["edges"] = es;
  }
  return j;
}

std::vector<StripEdgeImage> tau_size_strip_edges(const ParameterSet& params, long k_max) {
  const long K = params.lambda_over_pi;
  const double lambda = params.lambda();
  std::vector<StripEdgeImage> out;
  auto image = [&](Complex v) { return lambda * std::sinh(v); };
  auto push = [&](Complex a, Complex b) {
    out.push_back({a, b, std::abs(image(b) - image(a))});
  };
  for (long k = 0; k < K; ++k) {
    push(Complex(0.0, std::asin(static_cast<double>(k) / K)),
         Complex(0.0, std::asin(static_cast<double>(k + 1) / K)));
  }
  for (long j = K; j < k_max; ++j) {
    push(Complex(std::acosh(static_cast<double>(j) / K), kHalfPi),
         Complex(std::acosh(static_cast<double>(j + 1) / K), kHalfPi));
  }
  return out;
}

}  // namespace wanderlab
