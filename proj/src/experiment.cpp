#include "orbital/experiment.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "orbital/errors.hpp"

namespace orbital {

namespace {

[[noreturn]] void config_fail(const std::string& where, const std::string& what) {
  throw ConfigError("config: " + where + ": " + what);
}

void allow_keys(const YAML::Node& node, const std::string& where, std::initializer_list<const char*> keys) {
  if (!node.IsMap()) config_fail(where, "expected a mapping");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) config_fail(where, "unknown key '" + key + "'");
  }
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& where) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception& e) {
    config_fail(where, std::string("bad value: ") + e.what());
  }
}

template <typename T>
void read(const YAML::Node& parent, const char* key, T& out, const std::string& where) {
  if (parent[key]) out = scalar<T>(parent[key], where + "." + key);
}

Complex complex_value(const YAML::Node& node, const std::string& where) {
  if (node.IsScalar()) return {scalar<double>(node, where), 0.0};
  if (node.IsSequence() && node.size() == 2)
    return {scalar<double>(node[0], where), scalar<double>(node[1], where)};
  config_fail(where, "expected a number or [re, im]");
}

std::vector<Complex> complex_list(const YAML::Node& node, const std::string& where) {
  if (!node.IsSequence() || node.size() == 0) config_fail(where, "expected a non-empty list of [re, im]");
  std::vector<Complex> out;
  for (std::size_t i = 0; i < node.size(); ++i)
    out.push_back(complex_value(node[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

ExpWindow exp_window(const YAML::Node& node, const std::string& where) {
  if (!node.IsSequence() || node.size() != 2) config_fail(where, "expected [j_lo, j_hi]");
  return std::pair{scalar<int>(node[0], where), scalar<int>(node[1], where)};
}

ShapeConfig parse_shape(const YAML::Node& n) {
  ShapeConfig s;
  const std::string w = "shape";
  if (!n || !n.IsMap()) config_fail(w, "missing");
  read(n, "kind", s.kind, w);
  if (s.kind == "circle") {
    allow_keys(n, w, {"kind", "center", "radius", "n"});
    if (n["center"]) s.center = complex_value(n["center"], w + ".center");
    read(n, "radius", s.radius, w);
    read(n, "n", s.n, w);
  } else if (s.kind == "segment") {
    allow_keys(n, w, {"kind", "a", "b", "n", "grading", "geometric_floor"});
    if (n["a"]) s.a = complex_value(n["a"], w + ".a");
    if (n["b"]) s.b = complex_value(n["b"], w + ".b");
    read(n, "n", s.n, w);
    std::string grading = "uniform";
    read(n, "grading", grading, w);
    if (grading == "uniform") s.grading = shapes::Grading::uniform;
    else if (grading == "geometric") s.grading = shapes::Grading::geometric;
    else config_fail(w + ".grading", "expected uniform or geometric");
    read(n, "geometric_floor", s.geometric_floor, w);
  } else if (s.kind == "sierpinski" || s.kind == "vicsek") {
    allow_keys(n, w, {"kind", "depth", "offset", "size"});
    read(n, "depth", s.depth, w);
    if (n["offset"]) s.offset = complex_value(n["offset"], w + ".offset");
    read(n, "size", s.size, w);
  } else if (s.kind == "sequence" || s.kind == "product_sequence") {
    allow_keys(n, w, {"kind", "c", "p", "n"});
    if (n["c"]) s.c = complex_value(n["c"], w + ".c");
    read(n, "p", s.p, w);
    read(n, "n", s.count, w);
  } else if (s.kind == "points") {
    allow_keys(n, w, {"kind", "points", "spacing"});
    s.points = complex_list(n["points"], w + ".points");
    read(n, "spacing", s.spacing, w);
  } else {
    config_fail(w + ".kind", "unknown shape '" + s.kind + "'");
  }
  return s;
}

JuliaConfig parse_julia(const YAML::Node& n) {
  JuliaConfig j;
  const std::string w = "julia";
  allow_keys(n, w, {"method", "seed", "depth", "burn_in", "dedup_cell", "window", "resolution", "max_iter"});
  if (n["method"]) {
    const auto m = scalar<std::string>(n["method"], w + ".method");
    if (m == "backward") j.method = JuliaMethod::backward;
    else if (m == "escape_boundary") j.method = JuliaMethod::escape_boundary;
    else config_fail(w + ".method", "expected backward or escape_boundary");
  }
  if (n["seed"] && !(n["seed"].IsScalar() && n["seed"].as<std::string>() == "auto"))
    j.seed = complex_value(n["seed"], w + ".seed");
  read(n, "depth", j.depth, w);
  read(n, "burn_in", j.burn_in, w);
  if (n["dedup_cell"]) j.dedup_cell = scalar<double>(n["dedup_cell"], w + ".dedup_cell");
  if (n["window"]) {
    const auto& v = n["window"];
    if (!v.IsSequence() || v.size() != 4) config_fail(w + ".window", "expected [x0, y0, x1, y1]");
    j.window = Rect{v[0].as<double>(), v[1].as<double>(), v[2].as<double>(), v[3].as<double>()};
  }
  read(n, "resolution", j.resolution, w);
  read(n, "max_iter", j.max_iter, w);
  return j;
}

}  // namespace

double ExperimentConfig::orbit_dedup_cell() const {
  return dedup_cell ? *dedup_cell : std::ldexp(1.0, -(ladder_finest + 2));
}

double ExperimentConfig::julia_dedup_cell() const {
  return julia.dedup_cell ? *julia.dedup_cell : orbit_dedup_cell();
}

ExperimentConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config: YAML parse error: ") + e.what());
  }
  ExperimentConfig c;
  allow_keys(root, "root",
             {"name", "map", "shape", "orbit", "ladder", "windows", "julia", "hz", "diagnostic", "targets",
              "threads", "image_size"});
  read(root, "name", c.name, "root");
  read(root, "threads", c.threads, "root");
  read(root, "image_size", c.image_size, "root");

  const auto map = root["map"];
  if (!map) config_fail("map", "missing");
  allow_keys(map, "map", {"p", "q"});
  c.p = complex_list(map["p"], "map.p");
  if (map["q"]) c.q = complex_list(map["q"], "map.q");

  c.shape = parse_shape(root["shape"]);

  if (const auto o = root["orbit"]) {
    allow_keys(o, "orbit", {"depth", "budget", "critical_guard", "dedup_cell"});
    read(o, "depth", c.depth, "orbit");
    read(o, "budget", c.budget, "orbit");
    read(o, "critical_guard", c.critical_guard, "orbit");
    if (o["dedup_cell"]) c.dedup_cell = scalar<double>(o["dedup_cell"], "orbit.dedup_cell");
  }
  if (const auto l = root["ladder"]) {
    allow_keys(l, "ladder", {"coarsest", "finest"});
    read(l, "coarsest", c.ladder_coarsest, "ladder");
    read(l, "finest", c.ladder_finest, "ladder");
  }
  if (const auto w = root["windows"]) {
    allow_keys(w, "windows", {"E", "J", "O"});
    if (w["E"]) c.window_e = exp_window(w["E"], "windows.E");
    if (w["J"]) c.window_j = exp_window(w["J"], "windows.J");
    if (w["O"]) c.window_o = exp_window(w["O"], "windows.O");
  }
  if (const auto j = root["julia"]) c.julia = parse_julia(j);
  if (const auto h = root["hz"]) {
    allow_keys(h, "hz", {"z", "depth", "s_range", "iters"});
    if (h["z"]) c.hz.z = complex_value(h["z"], "hz.z");
    read(h, "depth", c.hz.depth, "hz");
    read(h, "iters", c.hz.iters, "hz");
    if (h["s_range"]) {
      const auto r = h["s_range"];
      if (!r.IsSequence() || r.size() != 2) config_fail("hz.s_range", "expected [s_lo, s_hi]");
      c.hz.s_lo = r[0].as<double>();
      c.hz.s_hi = r[1].as<double>();
    }
  }
  if (const auto d = root["diagnostic"]) {
    allow_keys(d, "diagnostic", {"postcritical_steps", "tube"});
    read(d, "postcritical_steps", c.postcritical_steps, "diagnostic");
    read(d, "tube", c.tube, "diagnostic");
  }
  if (const auto t = root["targets"]) {
    allow_keys(t, "targets", {"dim_O", "dim_J_max", "gap_O_E_min", "verdict", "assumption_a"});
    if (t["dim_O"]) {
      const auto r = t["dim_O"];
      if (!r.IsSequence() || r.size() != 2) config_fail("targets.dim_O", "expected [lo, hi]");
      c.targets.dim_o = std::pair{r[0].as<double>(), r[1].as<double>()};
    }
    if (t["dim_J_max"]) c.targets.dim_j_max = scalar<double>(t["dim_J_max"], "targets.dim_J_max");
    if (t["gap_O_E_min"]) c.targets.gap_o_e_min = scalar<double>(t["gap_O_E_min"], "targets.gap_O_E_min");
    if (t["verdict"]) c.targets.verdict = scalar<std::string>(t["verdict"], "targets.verdict");
    if (t["assumption_a"]) c.targets.assumption_a = scalar<std::string>(t["assumption_a"], "targets.assumption_a");
  }

  if (c.depth < 0) config_fail("orbit.depth", "must be >= 0");
  if (c.budget == 0) config_fail("orbit.budget", "must be positive");
  if (c.threads < 1) config_fail("threads", "must be >= 1");
  if (c.ladder_finest <= c.ladder_coarsest + 1) config_fail("ladder", "needs at least 3 scales");
  if (c.image_size < 16) config_fail("image_size", "must be >= 16");
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot read " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

RationalMap make_map(const ExperimentConfig& cfg) { return RationalMap(ComplexPoly(cfg.p), ComplexPoly(cfg.q)); }

PointCloud make_shape(const ShapeConfig& s) {
  if (s.kind == "circle") return shapes::circle_cloud(s.center, s.radius, s.n);
  if (s.kind == "segment") return shapes::segment_cloud(s.a, s.b, s.n, {s.grading, s.geometric_floor});
  if (s.kind == "sierpinski") return shapes::ifs_cloud(shapes::sierpinski_maps(s.offset, s.size), s.depth, s.offset);
  if (s.kind == "vicsek") return shapes::ifs_cloud(shapes::vicsek_maps(s.offset, s.size), s.depth, s.offset);
  if (s.kind == "sequence") return shapes::sequence_cloud(s.c, s.p, s.count);
  if (s.kind == "product_sequence") return shapes::product_sequence_cloud(s.c, s.p, s.count);
  if (s.kind == "points") return shapes::points_cloud(s.points, s.spacing);
  throw ConfigError("config: unknown shape '" + s.kind + "'");
}

ScaleLadder choose_window(const PointCloud& cloud, const ScaleLadder& ladder, const ExpWindow& w,
                          bool truncated_orbit) {
  if (!w) return default_window(cloud, ladder, truncated_orbit);
  const int first = static_cast<int>(std::lround(-std::log2(ladder.deltas.front())));
  return ladder.with_window(w->first - first, w->second - first);
}

Rect default_julia_window(const RationalMap& t) {
  if (!t.is_polynomial()) throw PreconditionError("default_julia_window: map must be a polynomial");
  const ComplexPoly& p = t.p();
  const Complex q0 = t.q()[0];
  // |P(z)| > 2|z| beyond r, so every orbit starting there escapes.
  auto margin = [&](double r) {
    double v = std::abs(p.leading() / q0) * std::pow(r, p.degree()) - 2.0 * r;
    for (int i = 0; i < p.degree(); ++i) v -= std::abs(p[i] / q0) * std::pow(r, i);
    return v;
  };
  double hi = 1.0;
  while (margin(hi) <= 0.0) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (margin(mid) > 0.0 ? hi : lo) = mid;
  }
  const double r = 1.05 * hi;
  return {-r, -r, r, r};
}

OrbitCloud build_orbit(const ExperimentConfig& cfg, const RationalMap& t, const PointCloud& e) {
  TreeOptions o;
  o.depth = cfg.depth;
  o.budget = cfg.budget;
  o.dedup_cell = cfg.orbit_dedup_cell();
  o.critical_guard = cfg.critical_guard;
  o.threads = cfg.threads;
  return backward_tree(t, e, o);
}

JuliaCloud build_escape(const ExperimentConfig& cfg, const RationalMap& t) {
  const Rect window = cfg.julia.window ? *cfg.julia.window : default_julia_window(t);
  return escape_boundary(t, window, cfg.julia.resolution, t.tolerances().escape_radius, cfg.julia.max_iter,
                         cfg.threads);
}

JuliaCloud build_julia(const ExperimentConfig& cfg, const RationalMap& t) {
  if (cfg.julia.method == JuliaMethod::escape_boundary) return build_escape(cfg, t);
  Complex seed;
  if (cfg.julia.seed) {
    seed = *cfg.julia.seed;
  } else {
    if (!t.is_polynomial()) throw ConfigError("config: julia.seed is required for non-polynomial maps");
    seed = build_escape(cfg, t).cloud.points().front();
  }
  JuliaOptions jo;
  jo.burn_in = cfg.julia.burn_in;
  jo.budget = cfg.budget;
  jo.threads = cfg.threads;
  return julia_backward(t, seed, cfg.julia.depth, cfg.julia_dedup_cell(), jo);
}

namespace {

Estimate estimate(const PointCloud& cloud, const ScaleLadder& window, int threads) {
  return {cloud.label(), cloud.size(), cloud.spacing(), dim_estimate(cloud, window, threads)};
}

}  // namespace

double combined_uncertainty(const BoxCountReport& o, const BoxCountReport& e, const BoxCountReport& j) {
  const BoxCountReport& m = e.estimate >= j.estimate ? e : j;
  return std::hypot(o.uncertainty, m.uncertainty);
}

ScaleLadder common_window(const std::vector<ScaleLadder>& windows) {
  ScaleLadder w = windows.front();
  for (const auto& o : windows) {
    w.j_lo = std::max(w.j_lo, o.j_lo);
    w.j_hi = std::min(w.j_hi, o.j_hi);
  }
  return w;
}

VerificationReport run_dimest(const ExperimentConfig& cfg) {
  VerificationReport r;
  r.name = cfg.name;
  const RationalMap t = make_map(cfg);
  const ScaleLadder ladder = cfg.ladder();

  const PointCloud e = make_shape(cfg.shape);
  const JuliaCloud j = build_julia(cfg, t);
  r.julia_seed = j.seed;
  const bool backward = j.method == JuliaMethod::backward;
  const OrbitCloud tree = build_orbit(cfg, t, e);
  r.orbit_levels = tree.levels();
  r.orbit_truncated = tree.truncated;
  const PointCloud o = orbital_cloud(tree);

  ScaleLadder we = choose_window(e, ladder, cfg.window_e, false);
  ScaleLadder wj = choose_window(j.cloud, ladder, cfg.window_j, backward);
  ScaleLadder wo = choose_window(o, ladder, cfg.window_o, true);
  const ScaleLadder shared = common_window({we, wj, wo});
  if (shared.j_hi - shared.j_lo >= 2) {
    if (!cfg.window_e) we = shared;
    if (!cfg.window_j) wj = shared;
    if (!cfg.window_o) wo = shared;
  }
  r.dim_e = estimate(e, we, cfg.threads);
  r.dim_j = estimate(j.cloud, wj, cfg.threads);
  r.dim_o = estimate(o, wo, cfg.threads);
  if (backward && t.is_polynomial()) {
    try {
      const JuliaCloud esc = build_escape(cfg, t);
      r.dim_j_escape = estimate(esc.cloud, default_window(esc.cloud, ladder, false), cfg.threads);
    } catch (const OrbitalError&) {
    }
  }

  r.postcritical = postcritical_cloud(t, cfg.postcritical_steps, t.tolerances().escape_radius);
  r.assumption_a = assumption_a_diagnostic(e, r.postcritical.points, j.cloud, cfg.tube);

  r.formula_gap = r.dim_o.report.estimate - std::max(r.dim_e.report.estimate, r.dim_j.report.estimate);
  r.combined_uncertainty = combined_uncertainty(r.dim_o.report, r.dim_e.report, r.dim_j.report);
  r.consistent = std::abs(r.formula_gap) <= r.combined_uncertainty;
  return r;
}

HzReport run_hz(const ExperimentConfig& cfg) {
  HzReport r;
  const RationalMap t = make_map(cfg);
  r.z = cfg.hz.z;
  r.hz = hz_exponent(t, cfg.hz.z, cfg.hz.depth, cfg.hz.s_lo, cfg.hz.s_hi, cfg.hz.iters, cfg.budget);
  const JuliaCloud j = build_julia(cfg, t);
  const bool backward = j.method == JuliaMethod::backward;
  r.dim_j = estimate(j.cloud, choose_window(j.cloud, cfg.ladder(), cfg.window_j, backward), cfg.threads);
  r.combined_uncertainty = std::hypot(r.hz.uncertainty, r.dim_j.report.uncertainty);
  r.inequality_ok = r.hz.value <= r.dim_j.report.estimate + r.combined_uncertainty;
  return r;
}

std::vector<TargetCheck> check_targets(const Targets& t, const VerificationReport& r) {
  std::vector<TargetCheck> out;
  auto fmt = [](double x) { return io::format_double(x); };
  if (t.dim_o) {
    const double v = r.dim_o.report.estimate;
    out.push_back({"dim_O", v, "[" + fmt(t.dim_o->first) + ", " + fmt(t.dim_o->second) + "]",
                   v >= t.dim_o->first && v <= t.dim_o->second});
  }
  if (t.dim_j_max) {
    const double v = r.dim_j.report.estimate;
    out.push_back({"dim_J", v, "<= " + fmt(*t.dim_j_max), v <= *t.dim_j_max});
  }
  if (t.gap_o_e_min) {
    const double v = r.dim_o.report.estimate - r.dim_e.report.estimate;
    out.push_back({"dim_O - dim_E", v, ">= " + fmt(*t.gap_o_e_min), v >= *t.gap_o_e_min});
  }
  if (t.verdict) out.push_back({"verdict " + r.verdict(), r.formula_gap, *t.verdict, r.verdict() == *t.verdict});
  if (t.assumption_a) {
    const auto v = to_string(r.assumption_a.verdict);
    out.push_back({"assumption_a " + v, r.assumption_a.dist_e_pc, *t.assumption_a, v == *t.assumption_a});
  }
  return out;
}

io::json to_json(const Estimate& e) {
  io::json j = io::to_json(e.report);
  j["label"] = e.label;
  j["points"] = e.points;
  j["spacing"] = e.spacing;
  return j;
}

io::json to_json(const VerificationReport& r) {
  io::json j;
  j["name"] = r.name;
  j["dim_E"] = to_json(r.dim_e);
  j["dim_J"] = to_json(r.dim_j);
  j["dim_J_escape"] = r.dim_j_escape ? to_json(*r.dim_j_escape) : io::json(nullptr);
  j["dim_O"] = to_json(r.dim_o);
  j["julia_seed"] = io::to_json(r.julia_seed);
  j["orbit"] = {{"levels", r.orbit_levels}, {"truncated", r.orbit_truncated}};
  io::json pc = io::json::array();
  for (const Complex& z : r.postcritical.points) pc.push_back(io::to_json(z));
  j["postcritical"] = {{"points", pc}, {"escaped", r.postcritical.escaped}};
  j["assumption_a"] = io::to_json(r.assumption_a);
  j["formula_gap"] = r.formula_gap;
  j["combined_uncertainty"] = r.combined_uncertainty;
  j["verdict"] = r.verdict();
  return j;
}

io::json to_json(const HzReport& r) {
  io::json j;
  j["z"] = io::to_json(r.z);
  j["h_z"] = r.hz.value;
  j["h_z_uncertainty"] = r.hz.uncertainty;
  j["dim_J"] = to_json(r.dim_j);
  j["combined_uncertainty"] = r.combined_uncertainty;
  j["inequality_ok"] = r.inequality_ok;
  return j;
}

io::json to_json(const std::vector<TargetCheck>& checks) {
  io::json arr = io::json::array();
  for (const auto& c : checks)
    arr.push_back({{"name", c.name}, {"value", c.value}, {"expected", c.expected}, {"ok", c.ok}});
  return arr;
}

}  // namespace orbital
