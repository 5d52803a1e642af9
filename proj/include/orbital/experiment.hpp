#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orbital/dimension.hpp"
#include "orbital/io.hpp"
#include "orbital/julia.hpp"
#include "orbital/orbit.hpp"
#include "orbital/shapes.hpp"

namespace orbital {

struct ShapeConfig {
  std::string kind = "circle";
  Complex center;
  double radius = 1.0;
  int n = 4096;
  Complex a{0.0, 0.0};
  Complex b{1.0, 0.0};
  shapes::Grading grading = shapes::Grading::uniform;
  double geometric_floor = 1e-300;
  int depth = 8;
  Complex offset;
  double size = 1.0;
  Complex c;
  double p = 1.0;
  long long count = 1000;
  std::vector<Complex> points;
  double spacing = 1e-12;
};

/// Exponent window [j_lo, j_hi] on the ladder delta_j = 2^-j.
using ExpWindow = std::optional<std::pair<int, int>>;

struct JuliaConfig {
  JuliaMethod method = JuliaMethod::backward;
  std::optional<Complex> seed;  // auto: first escape-boundary cell
  int depth = 14;
  int burn_in = 3;
  std::optional<double> dedup_cell;
  std::optional<Rect> window;  // escape raster window
  int resolution = 1024;
  int max_iter = 500;
};

struct HzConfig {
  Complex z{2.0, 0.0};
  int depth = 12;
  double s_lo = 0.05;
  double s_hi = 4.0;
  int iters = 40;
};

/// Optional pass/fail targets attached to a config.
struct Targets {
  std::optional<std::pair<double, double>> dim_o;
  std::optional<double> dim_j_max;
  std::optional<double> gap_o_e_min;
  std::optional<std::string> verdict;
  std::optional<std::string> assumption_a;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::vector<Complex> p;
  std::vector<Complex> q{Complex{1.0, 0.0}};
  ShapeConfig shape;
  int depth = 8;
  std::size_t budget = 50'000'000;
  double critical_guard = 0.0;
  std::optional<double> dedup_cell;
  int ladder_coarsest = 0;
  int ladder_finest = 14;
  ExpWindow window_e;
  ExpWindow window_j;
  ExpWindow window_o;
  JuliaConfig julia;
  HzConfig hz;
  int postcritical_steps = 64;
  double tube = 0.05;
  Targets targets;
  int threads = 1;
  int image_size = 2048;

  ScaleLadder ladder() const { return ScaleLadder::dyadic(ladder_coarsest, ladder_finest); }
  /// delta_min / 4 unless set explicitly.
  double orbit_dedup_cell() const;
  double julia_dedup_cell() const;
};

ExperimentConfig parse_config(const std::string& yaml_text);
ExperimentConfig load_config(const std::filesystem::path& path);

RationalMap make_map(const ExperimentConfig& cfg);
PointCloud make_shape(const ShapeConfig& shape);

/// Fitted window: explicit exponents when given, default_window otherwise.
ScaleLadder choose_window(const PointCloud& cloud, const ScaleLadder& ladder, const ExpWindow& w,
                          bool truncated_orbit);

/// Largest window contained in every given window (may hold < 3 scales).
ScaleLadder common_window(const std::vector<ScaleLadder>& windows);

/// Square window centred at 0 containing the filled Julia set of a polynomial.
Rect default_julia_window(const RationalMap& t);

OrbitCloud build_orbit(const ExperimentConfig& cfg, const RationalMap& t, const PointCloud& e);
JuliaCloud build_julia(const ExperimentConfig& cfg, const RationalMap& t);
JuliaCloud build_escape(const ExperimentConfig& cfg, const RationalMap& t);

struct Estimate {
  std::string label;
  std::size_t points = 0;
  double spacing = 0.0;
  BoxCountReport report;
};

struct VerificationReport {
  std::string name;
  Estimate dim_e;
  Estimate dim_j;
  Estimate dim_o;
  std::optional<Estimate> dim_j_escape;
  Complex julia_seed;
  int orbit_levels = 0;
  bool orbit_truncated = false;
  PostcriticalSet postcritical;
  AssumptionDiagnostic assumption_a;
  double formula_gap = 0.0;
  double combined_uncertainty = 0.0;
  bool consistent = false;

  std::string verdict() const { return consistent ? "CONSISTENT" : "INCONSISTENT"; }
};

/// E, J and O are fitted on their common window when it holds at least 3
/// scales; explicitly configured windows are kept as given.
VerificationReport run_dimest(const ExperimentConfig& cfg);

/// sqrt(u_O^2 + u_M^2) where M is the larger of dim_E and dim_J.
double combined_uncertainty(const BoxCountReport& o, const BoxCountReport& e, const BoxCountReport& j);

struct HzReport {
  Complex z;
  ExponentEstimate hz;
  Estimate dim_j;
  double combined_uncertainty = 0.0;
  bool inequality_ok = false;
};

HzReport run_hz(const ExperimentConfig& cfg);

struct TargetCheck {
  std::string name;
  double value = 0.0;
  std::string expected;
  bool ok = false;
};

std::vector<TargetCheck> check_targets(const Targets& t, const VerificationReport& r);

io::json to_json(const Estimate& e);
io::json to_json(const VerificationReport& r);
io::json to_json(const HzReport& r);
io::json to_json(const std::vector<TargetCheck>& checks);

}  // namespace orbital
