#include "orbital/io.hpp"

#include <png.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>

namespace orbital::io {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

std::string cloud_csv(const PointCloud& cloud) {
  std::string out = "re,im\n";
  for (const Complex& z : cloud.points()) {
    out += format_double(z.real());
    out += ',';
    out += format_double(z.imag());
    out += '\n';
  }
  return out;
}

std::string orbit_csv(const OrbitCloud& tree) {
  std::string out = "re,im,depth,log_fwd_derivative\n";
  for (const OrbitNode& n : tree.nodes) {
    out += format_double(n.point.real()) + ',' + format_double(n.point.imag()) + ',' +
           std::to_string(n.depth) + ',' + format_double(n.log_fwd_derivative) + '\n';
  }
  return out;
}

std::string box_count_csv(const BoxCountReport& report) {
  std::string out = "delta,count\n";
  const auto deltas = report.window_deltas();
  for (std::size_t i = 0; i < deltas.size(); ++i)
    out += format_double(deltas[i]) + ',' + std::to_string(report.counts[i]) + '\n';
  return out;
}

json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json to_json(const BoxCountReport& r) {
  json j;
  j["deltas"] = r.window_deltas();
  j["counts"] = r.counts;
  j["ols_slope"] = r.ols_slope;
  j["ols_stderr"] = r.ols_stderr;
  j["local_slopes"] = r.local_slopes;
  j["max_local_slope"] = r.max_local_slope;
  j["estimate"] = r.estimate;
  j["uncertainty"] = r.uncertainty;
  return j;
}

json to_json(const AssumptionDiagnostic& d) {
  json j;
  j["verdict"] = to_string(d.verdict);
  j["dist_E_pc"] = std::isfinite(d.dist_e_pc) ? json(d.dist_e_pc) : json(nullptr);
  j["path_from"] = to_json(d.path_from);
  j["path_to"] = to_json(d.path_to);
  j["path_clearance"] = std::isfinite(d.path_clearance) ? json(d.path_clearance) : json(nullptr);
  j["tube"] = d.tube;
  return j;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

void write_json(const std::filesystem::path& path, const json& j) { write_file(path, j.dump(2) + "\n"); }

void write_pgm(const std::filesystem::path& path, const GreyImage& img, int maxval) {
  std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n" +
                    std::to_string(maxval) + "\n";
  out.append(img.pixels.begin(), img.pixels.end());
  write_file(path, out);
}

void write_png(const std::filesystem::path& path, const GreyImage& img) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.string().c_str(), "wb"), &std::fclose);
  if (!fp) throw std::runtime_error("cannot open " + path.string() + " for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("libpng write failed: " + path.string());
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height), 8,
               PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < img.height; ++y) {
    auto* row = const_cast<png_bytep>(img.pixels.data() + static_cast<std::size_t>(y) * static_cast<std::size_t>(img.width));
    png_write_row(png, row);
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

GreyImage raster_image(const Raster& r) {
  GreyImage img{r.width, r.height, std::vector<std::uint8_t>(r.cells.size())};
  for (int y = 0; y < r.height; ++y)
    for (int x = 0; x < r.width; ++x)
      img.pixels[static_cast<std::size_t>(y) * static_cast<std::size_t>(r.width) + static_cast<std::size_t>(x)] =
          r.at(x, r.height - 1 - y);
  return img;
}

GreyImage render_orbit(const OrbitCloud& tree, int size) {
  GreyImage img{size, size, std::vector<std::uint8_t>(static_cast<std::size_t>(size) * static_cast<std::size_t>(size), 255)};
  if (tree.nodes.empty()) return img;
  std::vector<Complex> pts;
  pts.reserve(tree.nodes.size());
  for (const auto& n : tree.nodes) pts.push_back(n.point);
  Rect box = bounding_box(pts);
  // square window around the box
  const double side = std::max({box.width(), box.height(), 1e-12});
  const double cx = 0.5 * (box.x0 + box.x1);
  const double cy = 0.5 * (box.y0 + box.y1);
  box = Rect{cx - side / 2, cy - side / 2, cx + side / 2, cy + side / 2}.expanded(0.05);
  const double scale = size / box.width();
  const int deepest = std::max(1, tree.levels() - 1);
  for (const auto& n : tree.nodes) {
    const int x = std::clamp(static_cast<int>((n.point.real() - box.x0) * scale), 0, size - 1);
    const int y = std::clamp(static_cast<int>((box.y1 - n.point.imag()) * scale), 0, size - 1);
    const auto shade = static_cast<std::uint8_t>(200 * n.depth / deepest);
    auto& px = img.pixels[static_cast<std::size_t>(y) * static_cast<std::size_t>(size) + static_cast<std::size_t>(x)];
    px = std::min(px, shade);
  }
  return img;
}

}  // namespace orbital::io
