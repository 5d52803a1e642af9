#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "orbital/errors.hpp"
#include "orbital/experiment.hpp"
#include "orbital/io.hpp"

namespace fs = std::filesystem;
using namespace orbital;

namespace {

struct Common {
  std::vector<std::string> configs;
  std::string out = "out";
  std::optional<int> threads;
  std::optional<int> depth;
  std::optional<std::size_t> budget;
};

void add_common(CLI::App* sub, Common& c, bool many_configs) {
  if (many_configs)
    sub->add_option("--config", c.configs, "Config files (default: the bundled cases)");
  else
    sub->add_option("--config", c.configs, "Config file")->required()->expected(1);
  sub->add_option("--out", c.out, "Output directory")->capture_default_str();
  sub->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--depth", c.depth, "Override the orbit depth K")->check(CLI::NonNegativeNumber);
  sub->add_option("--budget", c.budget, "Override the node-visit budget")->check(CLI::PositiveNumber);
}

ExperimentConfig load(const std::string& path, const Common& c) {
  ExperimentConfig cfg = load_config(path);
  if (c.threads) cfg.threads = *c.threads;
  if (c.depth) cfg.depth = *c.depth;
  if (c.budget) cfg.budget = *c.budget;
  return cfg;
}

std::string fixed(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

int cmd_render(const Common& c) {
  const ExperimentConfig cfg = load(c.configs.front(), c);
  const RationalMap t = make_map(cfg);
  const PointCloud e = make_shape(cfg.shape);
  const OrbitCloud tree = build_orbit(cfg, t, e);
  const io::GreyImage img = io::render_orbit(tree, cfg.image_size);
  const fs::path dir(c.out);
  io::write_pgm(dir / (cfg.name + ".pgm"), img);
  io::write_png(dir / (cfg.name + ".png"), img);
  io::write_file(dir / (cfg.name + "_orbit.csv"), io::orbit_csv(tree));
  std::cout << cfg.name << ": " << tree.nodes.size() << " nodes, " << tree.levels() << " levels"
            << (tree.truncated ? " (truncated by budget)" : "") << " -> " << (dir / (cfg.name + ".png")).string()
            << "\n";
  return 0;
}

void print_report(const VerificationReport& r) {
  std::cout << r.name << ": dim_E " << fixed(r.dim_e.report.estimate) << " +- " << fixed(r.dim_e.report.uncertainty)
            << ", dim_J " << fixed(r.dim_j.report.estimate) << " +- " << fixed(r.dim_j.report.uncertainty)
            << ", dim_O " << fixed(r.dim_o.report.estimate) << " +- " << fixed(r.dim_o.report.uncertainty)
            << ", gap " << fixed(r.formula_gap) << ", assumption_a " << to_string(r.assumption_a.verdict) << ", "
            << r.verdict() << "\n";
}

void write_counts(const fs::path& dir, const VerificationReport& r) {
  io::write_file(dir / (r.name + "_E_counts.csv"), io::box_count_csv(r.dim_e.report));
  io::write_file(dir / (r.name + "_J_counts.csv"), io::box_count_csv(r.dim_j.report));
  io::write_file(dir / (r.name + "_O_counts.csv"), io::box_count_csv(r.dim_o.report));
}

int cmd_dimest(const Common& c) {
  const ExperimentConfig cfg = load(c.configs.front(), c);
  const VerificationReport r = run_dimest(cfg);
  const fs::path dir(c.out);
  io::json j = to_json(r);
  const auto checks = check_targets(cfg.targets, r);
  if (!checks.empty()) j["targets"] = to_json(checks);
  io::write_json(dir / (cfg.name + "_report.json"), j);
  write_counts(dir, r);
  print_report(r);
  return 0;
}

int cmd_hz(const Common& c) {
  const ExperimentConfig cfg = load(c.configs.front(), c);
  const HzReport r = run_hz(cfg);
  io::write_json(fs::path(c.out) / (cfg.name + "_hz.json"), to_json(r));
  std::cout << cfg.name << ": h_z " << fixed(r.hz.value) << " +- " << fixed(r.hz.uncertainty) << ", dim_J "
            << fixed(r.dim_j.report.estimate) << " +- " << fixed(r.dim_j.report.uncertainty) << ", inequality "
            << (r.inequality_ok ? "ok" : "VIOLATED") << "\n";
  return 0;
}

int cmd_counterexamples(const Common& c) {
  std::vector<std::string> paths = c.configs;
  if (paths.empty()) {
    for (const char* f : {"counter_segment.yaml", "counter_sequence.yaml", "counter_product.yaml"})
      paths.push_back((fs::path(ORBITAL_CONFIG_DIR) / f).string());
  }
  const fs::path dir(c.out);
  io::json suite = io::json::array();
  bool all_ok = true;
  for (const auto& p : paths) {
    const ExperimentConfig cfg = load(p, c);
    const VerificationReport r = run_dimest(cfg);
    const auto checks = check_targets(cfg.targets, r);
    bool ok = true;
    for (const auto& ch : checks) ok = ok && ch.ok;
    all_ok = all_ok && ok;
    io::json entry = to_json(r);
    entry["targets"] = to_json(checks);
    entry["pass"] = ok;
    suite.push_back(entry);
    write_counts(dir, r);
    print_report(r);
    for (const auto& ch : checks)
      std::cout << "  " << (ch.ok ? "pass" : "FAIL") << "  " << ch.name << " = " << fixed(ch.value) << ", expected "
                << ch.expected << "\n";
  }
  io::write_json(dir / "counterexamples.json", {{"cases", suite}, {"pass", all_ok}});
  return all_ok ? 0 : 1;
}

int cmd_julia(const Common& c) {
  const ExperimentConfig cfg = load(c.configs.front(), c);
  const RationalMap t = make_map(cfg);
  const JuliaCloud j = build_escape(cfg, t);
  const fs::path dir(c.out);
  io::GreyImage img = io::raster_image(j.raster);
  io::write_pgm(dir / (cfg.name + "_julia.pgm"), img, 2);
  for (auto& px : img.pixels) px = px == 2 ? 0 : (px == 1 ? 128 : 255);
  io::write_png(dir / (cfg.name + "_julia.png"), img);
  io::write_file(dir / (cfg.name + "_julia_boundary.csv"), io::cloud_csv(j.cloud));
  std::cout << cfg.name << ": " << j.cloud.size() << " boundary cells at resolution " << j.raster.width << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orbital sets of rational maps: rendering and box-dimension estimates"};
  app.require_subcommand(1);
  Common render, dimest, hz, counter, julia;
  add_common(app.add_subcommand("render", "Render an orbital set to PGM/PNG and CSV"), render, false);
  add_common(app.add_subcommand("dimest", "Estimate dim E, dim J, dim O and check the max formula"), dimest, false);
  add_common(app.add_subcommand("hz", "Convergence exponent h_z against dim J"), hz, false);
  add_common(app.add_subcommand("counterexamples", "Run the counterexample suite"), counter, true);
  add_common(app.add_subcommand("julia", "Escape-time raster of a polynomial map"), julia, false);
  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("render")) return cmd_render(render);
    if (app.got_subcommand("dimest")) return cmd_dimest(dimest);
    if (app.got_subcommand("hz")) return cmd_hz(hz);
    if (app.got_subcommand("counterexamples")) return cmd_counterexamples(counter);
    if (app.got_subcommand("julia")) return cmd_julia(julia);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
