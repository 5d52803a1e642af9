#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "orbital/dimension.hpp"
#include "orbital/julia.hpp"
#include "orbital/orbit.hpp"

namespace orbital::io {

using nlohmann::json;

/// Shortest round-trip decimal form.
std::string format_double(double x);

std::string cloud_csv(const PointCloud& cloud);
/// Columns re,im,depth,log_fwd_derivative.
std::string orbit_csv(const OrbitCloud& tree);
/// Columns delta,count over the fitted window.
std::string box_count_csv(const BoxCountReport& report);

json to_json(Complex z);
json to_json(const BoxCountReport& report);
json to_json(const AssumptionDiagnostic& d);

/// Creates parent directories; throws std::runtime_error on failure.
void write_file(const std::filesystem::path& path, const std::string& contents);
void write_json(const std::filesystem::path& path, const json& j);

/// 8-bit grey image, row 0 at the top.
struct GreyImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};

/// Binary PGM (P5) with the given maxval.
void write_pgm(const std::filesystem::path& path, const GreyImage& img, int maxval = 255);
void write_png(const std::filesystem::path& path, const GreyImage& img);

/// One byte per cell (0 escape, 1 bounded, 2 boundary), maxval 2. Rows are
/// flipped so that larger imaginary parts appear at the top.
GreyImage raster_image(const Raster& r);

/// Square image of the tree fitted to its bounding box with a 5% margin.
/// Background white; a pixel takes the shade of the shallowest node in it,
/// from black at depth 0 to light grey at the deepest level.
GreyImage render_orbit(const OrbitCloud& tree, int size);

}  // namespace orbital::io
