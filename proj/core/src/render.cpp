#include "wanderlab/render.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "wanderlab/errors.hpp"
#include "wanderlab/graph.hpp"
#include "wanderlab/orbit.hpp"
#include "wanderlab/tower.hpp"

namespace wanderlab {

const char* to_string(PointClass c) {
  switch (c) {
    case PointClass::escaping:
      return "escaping";
    case PointClass::entered_disk:
      return "entered-disk";
    case PointClass::in_u_chain:
      return "in-U-chain";
    case PointClass::outside_model:
      return "outside-model";
    case PointClass::undetermined:
      return "undetermined";
  }
  return "undetermined";
}

void RasterJob::validate() const {
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(window.x0) || !finite(window.x1) || !finite(window.y0) || !finite(window.y1)) {
    throw DomainError("render window must be finite");
  }
  if (!(window.x0 < window.x1) || !(window.y0 < window.y1)) {
    throw DomainError("render window must have x0 < x1 and y0 < y1");
  }
  if (width < 1 || height < 1 || width > 16384 || height > 16384) {
    throw DomainError("render resolution must lie in 1..16384");
  }
  if (max_steps < 0) throw DomainError("max_steps must be >= 0");
  if (escape_level < 0 || escape_level > 3) throw DomainError("escape_level must lie in 0..3");
  if (chain_depth < 0) throw DomainError("chain_depth must be >= 0");
  if (overlay && overlay_disks < 1) throw DomainError("overlay_disks must be >= 1");
  if (threads < 0) throw DomainError("threads must be >= 0");
}

namespace {

nlohmann::json rgb_json(const Rgb& c) { return {c[0], c[1], c[2]}; }

Rgb rgb_from_json(const nlohmann::json& j) {
  Rgb c{};
  for (size_t k = 0; k < 3; ++k) {
    const int v = j.at(k).get<int>();
    if (v < 0 || v > 255) throw DomainError("palette components must lie in 0..255");
    c[k] = static_cast<std::uint8_t>(v);
  }
  return c;
}

}  // namespace

RasterJob raster_job_from_json(const nlohmann::json& j) {
  RasterJob job;
  if (j.contains("window")) {
    const auto& w = j.at("window");
    job.window = {w.at("x0").get<double>(), w.at("x1").get<double>(), w.at("y0").get<double>(),
                  w.at("y1").get<double>()};
  }
  job.width = j.value("width", job.width);
  job.height = j.value("height", job.height);
  job.max_steps = j.value("max_steps", job.max_steps);
  job.escape_level = j.value("escape_level", job.escape_level);
  job.chain_depth = j.value("chain_depth", job.chain_depth);
  job.overlay = j.value("overlay", job.overlay);
  job.overlay_disks = j.value("overlay_disks", job.overlay_disks);
  job.threads = j.value("threads", job.threads);
  if (j.contains("palette")) {
    const auto& p = j.at("palette");
    for (int c = 0; c < kPointClassCount; ++c) {
      const char* key = to_string(static_cast<PointClass>(c));
      if (p.contains(key)) job.palette[static_cast<size_t>(c)] = rgb_from_json(p.at(key));
    }
  }
  if (j.contains("overlay_color")) job.overlay_color = rgb_from_json(j.at("overlay_color"));
  job.validate();
  return job;
}

nlohmann::json to_json(const RasterJob& job) {
  nlohmann::json palette = nlohmann::json::object();
  for (int c = 0; c < kPointClassCount; ++c) {
    palette[to_string(static_cast<PointClass>(c))] = rgb_json(job.palette[static_cast<size_t>(c)]);
  }
  return {{"window",
           {{"x0", job.window.x0}, {"x1", job.window.x1}, {"y0", job.window.y0},
            {"y1", job.window.y1}}},
          {"width", job.width},
          {"height", job.height},
          {"max_steps", job.max_steps},
          {"escape_level", job.escape_level},
          {"chain_depth", job.chain_depth},
          {"palette", palette},
          {"overlay", job.overlay},
          {"overlay_disks", job.overlay_disks},
          {"overlay_color", rgb_json(job.overlay_color)}};
}

std::string PointVerdict::detail() const {
  switch (cls) {
    case PointClass::escaping:
      return overflow ? "level>=" + std::to_string(level) + " overflow"
                      : "level=" + std::to_string(level);
    case PointClass::entered_disk:
      return "D_" + std::to_string(disk);
    case PointClass::in_u_chain:
      return "U_" + std::to_string(disk);
    case PointClass::outside_model:
    case PointClass::undetermined:
      return "";
  }
  return "";
}

std::vector<ChainDisk> certified_chain(const ParameterSet& params, int depth) {
  std::vector<ChainDisk> out;
  if (depth < 1) return out;
  try {
    const auto orbit = iterate_orbit(params, depth);
    const AnchorTable anchors(params.lambda_over_pi);
    for (int n = 1; n <= depth; ++n) {
      const PullbackCertificate c = build_U(n, orbit, params, anchors);
      if (c.pass && c.radius_inner > 0.0) out.push_back({n, c.center(), c.radius_inner});
    }
  } catch (const Error&) {
    // No certified chain for these parameters (e.g. lambda below the escape
    // threshold); the class is simply never assigned.
  }
  return out;
}

namespace {

double escape_threshold(int level) {
  double t = 1.0;
  for (int k = 0; k < level; ++k) t = std::exp(t);
  return t;
}

}  // namespace

PointVerdict classify_point(Complex z, const ParameterSet& params, const AnchorTable& anchors,
                            int max_steps, int escape_level,
                            const std::vector<ChainDisk>& chain) {
  PointVerdict v;
  const double threshold = escape_threshold(escape_level);
  for (int step = 0; step < max_steps; ++step) {
    const SymmetryImage img = symmetry_extend(z, anchors);
    const Complex r = img.representative;
    v.steps = step;
    if (img.tag == DomainTag::outside) {
      v.cls = PointClass::outside_model;
      return v;
    }
    if (img.tag == DomainTag::disk) {
      v.cls = PointClass::entered_disk;
      v.disk = img.disk_index;
      return v;
    }
    for (const ChainDisk& u : chain) {
      if (std::abs(r - u.center) < u.radius) {
        v.cls = PointClass::in_u_chain;
        v.disk = u.n;
        return v;
      }
    }
    if (r.real() >= threshold) {
      v.cls = PointClass::escaping;
      v.level = tw_from_real(r.real()).level;
      return v;
    }
    try {
      // f(z) equals f(r) up to conjugation, which the next representative
      // removes again.
      z = strip_map(r, params);
    } catch (const RangeError&) {
      v.cls = PointClass::escaping;
      v.steps = step + 1;
      v.level = escape_level + 1;
      v.overflow = true;
      return v;
    }
  }
  v.cls = PointClass::undetermined;
  v.steps = max_steps;
  return v;
}

Complex RenderResult::pixel_center(int i, int j) const {
  const Window& w = job.window;
  const double cx = 0.5 * (w.x0 + w.x1), hx = 0.5 * (w.x1 - w.x0);
  const double cy = 0.5 * (w.y0 + w.y1), hy = 0.5 * (w.y1 - w.y0);
  // Written so that mirrored rows of a window symmetric about the real axis
  // get exactly negated imaginary parts.
  const double u = static_cast<double>(2 * i + 1 - job.width) / job.width;
  const double t = static_cast<double>(2 * j + 1 - job.height) / job.height;
  return {cx + u * hx, cy - t * hy};
}

namespace {

void draw_overlay(RenderResult& r, const ParameterSet& params) {
  const Graph g = build_graph(params, r.job.overlay_disks);
  const ExplicitGraph eg = materialize(g);
  const Window& w = r.job.window;
  const double px = (w.x1 - w.x0) / r.job.width;
  const double py = (w.y1 - w.y0) / r.job.height;
  const double h = 0.5 * std::min(px, py);
  const auto mark = [&](Complex p) {
    const double fi = (p.real() - w.x0) / px;
    const double fj = (w.y1 - p.imag()) / py;
    if (!(fi >= 0.0 && fi < r.job.width && fj >= 0.0 && fj < r.job.height)) return;
    const size_t idx = (static_cast<size_t>(fj) * static_cast<size_t>(r.job.width) +
                        static_cast<size_t>(fi)) * 3;
    for (size_t c = 0; c < 3; ++c) r.rgb[idx + c] = r.job.overlay_color[c];
  };
  for (const ExplicitEdge& e : eg.edges) {
    const Complex a = eg.vertices[e.v0].position;
    const Complex b = eg.vertices[e.v1].position;
    if (e.kind == EdgeKind::circular_arc) {
      const double t0 = std::arg(a - e.center);
      double dt = std::arg(b - e.center) - t0;
      if (dt > M_PI) dt -= 2 * M_PI;
      if (dt < -M_PI) dt += 2 * M_PI;
      const double rad = std::abs(a - e.center);
      const long k = std::min(100000L, static_cast<long>(std::ceil(std::fabs(dt) * rad / h)) + 1);
      for (long s = 0; s <= k; ++s) {
        mark(e.center + std::polar(rad, t0 + dt * static_cast<double>(s) / k));
      }
    } else {
      const long k = std::min(100000L, static_cast<long>(std::ceil(std::abs(b - a) / h)) + 1);
      for (long s = 0; s <= k; ++s) mark(a + (b - a) * (static_cast<double>(s) / k));
    }
  }
}

}  // namespace

RenderResult render(const RasterJob& job, const ParameterSet& params) {
  job.validate();
  params.validate();
  RenderResult r;
  r.job = job;
  const size_t W = static_cast<size_t>(job.width), H = static_cast<size_t>(job.height);
  r.pixels.resize(W * H);
  r.rgb.resize(W * H * 3);
  const AnchorTable anchors(params.lambda_over_pi);
  const std::vector<ChainDisk> chain =
      job.max_steps > 0 ? certified_chain(params, job.chain_depth) : std::vector<ChainDisk>{};

  std::atomic<int> next_row{0};
  const auto worker = [&]() {
    for (int j = next_row++; j < job.height; j = next_row++) {
      for (int i = 0; i < job.width; ++i) {
        const PointVerdict v =
            classify_point(r.pixel_center(i, j), params, anchors, job.max_steps, job.escape_level,
                           chain);
        const size_t idx = static_cast<size_t>(j) * W + static_cast<size_t>(i);
        r.pixels[idx] = v;
        const Rgb& c = job.palette[static_cast<size_t>(v.cls)];
        std::copy(c.begin(), c.end(), r.rgb.begin() + static_cast<long>(idx * 3));
      }
    }
  };
  unsigned n_threads = job.threads > 0 ? static_cast<unsigned>(job.threads)
                                       : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(job.height));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (const PointVerdict& v : r.pixels) ++r.counts[static_cast<size_t>(v.cls)];
  if (job.overlay) draw_overlay(r, params);
  return r;
}

std::string ppm_bytes(const RenderResult& r) {
  std::string out = "P6\n" + std::to_string(r.job.width) + " " + std::to_string(r.job.height) +
                    "\n255\n";
  out.append(reinterpret_cast<const char*>(r.rgb.data()), r.rgb.size());
  return out;
}

std::string csv_text(const RenderResult& r) {
  std::ostringstream os;
  os.precision(17);
  os << "x,y,class,steps,detail\n";
  for (int j = 0; j < r.job.height; ++j) {
    for (int i = 0; i < r.job.width; ++i) {
      const Complex z = r.pixel_center(i, j);
      const PointVerdict& v = r.at(i, j);
      os << z.real() << ',' << z.imag() << ',' << to_string(v.cls) << ',' << v.steps << ','
         << v.detail() << '\n';
    }
  }
  return os.str();
}

nlohmann::json legend_json(const RenderResult& r) {
  nlohmann::json classes = nlohmann::json::array();
  for (int c = 0; c < kPointClassCount; ++c) {
    const auto cls = static_cast<PointClass>(c);
    nlohmann::json entry = {{"class", to_string(cls)},
                            {"color", rgb_json(r.job.palette[static_cast<size_t>(c)])},
                            {"pixels", r.counts[static_cast<size_t>(c)]}};
    switch (cls) {
      case PointClass::escaping:
        entry["meaning"] = "|Re| of an iterate reached exp^" + std::to_string(r.job.escape_level) +
                           "(1) inside the half-strip, or the next iterate overflowed";
        entry["heuristic"] =
            "rigorous along the real axis only (monotone orbit spacing); off-axis the threshold "
            "is a heuristic";
        break;
      case PointClass::entered_disk:
        entry["meaning"] = "an iterate landed in a disk D_n (detail gives n)";
        break;
      case PointClass::in_u_chain:
        entry["meaning"] = "an iterate lies in a certified pullback disk U_n (detail gives n)";
        break;
      case PointClass::outside_model:
        entry["meaning"] = "an iterate left the model domain (half-strip and disks up to symmetry)";
        break;
      case PointClass::undetermined:
        entry["meaning"] = "no decision within max_steps iterates";
        break;
    }
    classes.push_back(entry);
  }
  return {{"job", to_json(r.job)}, {"classes", classes}, {"overlay", r.job.overlay}};
}

namespace {

void write_file(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + p.string() + ": " + std::strerror(errno));
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("cannot write " + p.string() + ": " + std::strerror(errno));
}

}  // namespace

void write_render(const RenderResult& r, const std::string& dir, const std::string& stem) {
  const std::filesystem::path base(dir);
  std::filesystem::create_directories(base);
  write_file(base / (stem + ".ppm"), ppm_bytes(r));
  write_file(base / (stem + ".csv"), csv_text(r));
  write_file(base / (stem + ".legend.json"), legend_json(r).dump(2) + "\n");
}

}  // namespace wanderlab
