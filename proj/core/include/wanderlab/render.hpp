#pragma once

// Classification rasters of the model dynamics: each pixel center is
// iterated through the symmetry extension of the model map and labelled by
// what happens first (escape along the strip, landing in a disk D_n, a hit
// on a certified pullback disk U_n, leaving the model domain). Output is a
// binary PPM, a per-pixel CSV and a JSON legend.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wanderlab/model_map.hpp"
#include "wanderlab/parameters.hpp"

namespace wanderlab {

enum class PointClass { escaping, entered_disk, in_u_chain, outside_model, undetermined };
inline constexpr int kPointClassCount = 5;
const char* to_string(PointClass c);

struct Window {
  double x0 = 0.0, x1 = 1.0;  // real part range
  double y0 = 0.0, y1 = 1.0;  // imaginary part range
};

using Rgb = std::array<std::uint8_t, 3>;

struct RasterJob {
  Window window;
  int width = 400;
  int height = 400;
  int max_steps = 40;
  /// Escaping once |Re| reaches exp^{escape_level}(1) (tower level above
  /// escape_level). Level 2 means |Re| >= e^e.
  int escape_level = 2;
  /// Pullback disks U_1..U_{chain_depth} that are marked when hit.
  int chain_depth = 1;
  std::array<Rgb, kPointClassCount> palette{
      Rgb{230, 90, 40},    // escaping
      Rgb{40, 110, 220},   // entered disk
      Rgb{250, 220, 30},   // in U chain
      Rgb{25, 25, 25},     // outside the model
      Rgb{150, 150, 150},  // undetermined
  };
  /// Optional overlay of the graph T (materialized with overlay_disks disks;
  /// from three disks on the edge count exceeds the materialization cap).
  bool overlay = false;
  long overlay_disks = 2;
  Rgb overlay_color{255, 255, 255};
  int threads = 0;  // 0: hardware concurrency

  /// Throws DomainError on a non-finite or empty window or bad sizes.
  void validate() const;
};

RasterJob raster_job_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RasterJob& job);

struct PointVerdict {
  PointClass cls = PointClass::undetermined;
  int steps = 0;    // iterate at which the class was decided
  long disk = 0;    // D_n (entered_disk) or U_n (in_u_chain)
  int level = 0;    // escaping: tower level of |Re| (0 on overflow)
  bool overflow = false;  // escaping decided by leaving the double range
  std::string detail() const;
};

/// Certified pullback disk used for the in-U-chain class.
struct ChainDisk {
  int n = 0;
  Complex center;
  double radius = 0.0;
};

/// Concrete U_n (n <= depth) whose radius is a representable double.
std::vector<ChainDisk> certified_chain(const ParameterSet& params, int depth);

/// Classifies z. Works on the symmetry representative of every iterate, so
/// z, conj(z) and -z receive the same verdict.
PointVerdict classify_point(Complex z, const ParameterSet& params, const AnchorTable& anchors,
                            int max_steps, int escape_level = 2,
                            const std::vector<ChainDisk>& chain = {});

struct RenderResult {
  RasterJob job;
  std::vector<PointVerdict> pixels;  // row-major, row 0 at the top (y1)
  std::vector<std::uint8_t> rgb;     // width * height * 3
  std::array<long, kPointClassCount> counts{};

  Complex pixel_center(int i, int j) const;
  const PointVerdict& at(int i, int j) const {
    return pixels[static_cast<size_t>(j) * static_cast<size_t>(job.width) +
                  static_cast<size_t>(i)];
  }
};

RenderResult render(const RasterJob& job, const ParameterSet& params);

/// Binary PPM (P6, max value 255).
std::string ppm_bytes(const RenderResult& r);
/// CSV with header x,y,class,steps,detail (one row per pixel).
std::string csv_text(const RenderResult& r);
nlohmann::json legend_json(const RenderResult& r);

/// Writes <stem>.ppm, <stem>.csv and <stem>.legend.json into `dir`; I/O
/// failures are thrown as std::runtime_error with the system message.
void write_render(const RenderResult& r, const std::string& dir, const std::string& stem);

}  // namespace wanderlab
