// rlm: immersed-inclusion elasticity experiments.
//
// Subcommands: mesh, solve, converge, modes, effective, sweep. Every run
// reads an optional TOML config plus --section.key=value overrides and
// writes CSV artifacts carrying a config-hash header into the output
// directory. RLM_THREADS caps sweep parallelism.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rlm/errors.hpp"
#include "rlm/experiment.hpp"

using namespace rlm;

namespace {

std::vector<std::string> collect_overrides(const std::vector<std::string>& extras) {
  std::vector<std::string> overrides;
  for (const auto& arg : extras) {
    if (arg.rfind("--", 0) != 0 || arg.find('=') == std::string::npos)
      throw ArgumentError("unrecognized argument (expected --section.key=value): " + arg);
    overrides.push_back(arg.substr(2));
  }
  return overrides;
}

ExperimentConfig load_config(const std::string& config_path,
                             const std::vector<std::string>& extras) {
  ExperimentConfig cfg;
  if (!config_path.empty()) cfg = parse_config_file(config_path);
  for (const auto& kv : collect_overrides(extras)) {
    const auto eq = kv.find('=');
    apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

std::ofstream open_output(const ExperimentConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.output.dir);
  const auto path = std::filesystem::path(cfg.output.dir) / name;
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot open for writing: " + path.string());
  return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::istringstream in(csv);
  std::string cell;
  while (std::getline(in, cell, ',')) out.push_back(std::stod(cell));
  return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  std::istringstream in(csv);
  std::string cell;
  while (std::getline(in, cell, ',')) out.push_back(std::stoi(cell));
  return out;
}

// "x,y;x,y;..." -> explicit inclusion centers.
void apply_centers(ExperimentConfig& cfg, const std::string& centers) {
  cfg.inclusions.placement = "explicit";
  cfg.inclusions.explicit_list.clear();
  std::istringstream in(centers);
  std::string pair;
  while (std::getline(in, pair, ';')) {
    const auto comma = pair.find(',');
    if (comma == std::string::npos) throw ArgumentError("bad --centers entry: " + pair);
    cfg.inclusions.explicit_list.push_back({{std::stod(pair.substr(0, comma)),
                                             std::stod(pair.substr(comma + 1))},
                                            cfg.inclusions.radius,
                                            cfg.inclusions.gbar,
                                            cfg.inclusions.modes});
  }
}

int run_mesh(const ExperimentConfig& cfg, const std::string& out_name) {
  const auto inclusions = make_inclusions(cfg);
  const auto mesh = build_mesh(cfg, inclusions);
  mesh->check_valid();
  auto out = open_output(cfg, out_name);
  dump_mesh(*mesh, out);
  std::cout << "mesh: " << mesh->n_vertices() << " vertices, " << mesh->n_triangles()
            << " triangles, " << mesh->boundary_edges.size() << " boundary edges, max edge "
            << mesh->max_edge_length() << "\n";
  return 0;
}

int run_solve(const ExperimentConfig& cfg) {
  const PipelineRun run = run_pipeline(cfg);
  {
    auto out = open_output(cfg, "solution.csv");
    out << reproducibility_header(cfg) << "\n";
    write_solution_csv(run.space, run.solution.u, out);
  }
  {
    auto out = open_output(cfg, "report.csv");
    write_report_csv(cfg, run.solution.report, out);
  }
  if (!run.inclusions.empty()) {
    auto out = open_output(cfg, "inclusions.csv");
    write_inclusions_csv(run.inclusions, out);
  }
  if (cfg.output.vtk) {
    auto out = open_output(cfg, "solution.vtk");
    write_solution_vtk(run.space, run.solution.u, out);
  }
  std::cout << "solved: " << run.space.n_dofs() << " dofs, "
            << run.solution.report.outer_iterations << " Schur iterations, residuals "
            << run.solution.report.schur_residual << " / "
            << run.solution.report.primal_residual << "\n";
  return 0;
}

int run_converge_cmd(const ExperimentConfig& cfg, int levels, bool local) {
  const ConvergenceStudy study = run_convergence(cfg, levels, local);
  auto out = open_output(cfg, local ? "convergence_local.csv" : "convergence.csv");
  write_convergence_csv(cfg, study, out);
  std::cout << "levels " << levels << (local ? " (local refinement)" : " (global refinement)")
            << ": final rates L2 " << study.rates.l2.back() << ", H1 " << study.rates.h1.back()
            << "\n";
  return 0;
}

int run_modes_cmd(const ExperimentConfig& cfg, const std::vector<double>& radii,
                  const std::vector<int>& mode_counts) {
  const auto rows = run_mode_study(cfg, radii, mode_counts);
  auto out = open_output(cfg, "modes.csv");
  write_mode_csv(cfg, rows, out);
  std::cout << "mode study: " << rows.size() << " rows written\n";
  return 0;
}

int run_effective_cmd(const ExperimentConfig& cfg) {
  const EffectiveRow row = run_effective(cfg);
  auto out = open_output(cfg, "effective.csv");
  write_effective_csv(cfg, {row}, out);
  std::cout << "vf " << row.vf << ": kappa_eff " << row.kappa_eff << ", mu_eff " << row.mu_eff
            << "\n";
  return 0;
}

int run_sweep_cmd(const ExperimentConfig& cfg, const std::vector<uint64_t>& seeds,
                  const std::vector<double>& alphas) {
  if (!alphas.empty()) {
    const auto pts = run_compression_sweep(cfg, alphas);
    auto out = open_output(cfg, "compression.csv");
    write_compression_csv(cfg, pts, out);
    std::cout << "compression sweep: " << pts.size() << " points, pressure at rest "
              << pts.front().avg_pressure << "\n";
    return 0;
  }
  const SweepSummary summary = run_seed_sweep(cfg, seeds);
  {
    auto out = open_output(cfg, "sweep.csv");
    write_effective_csv(cfg, summary.rows, out);
  }
  {
    auto out = open_output(cfg, "sweep_summary.csv");
    write_sweep_summary_csv(cfg, summary, out);
  }
  std::cout << "seed sweep over " << seeds.size() << " seeds: kappa " << summary.kappa_mean
            << " +- " << summary.kappa_std << ", mu " << summary.mu_mean << " +- "
            << summary.mu_std << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"immersed-inclusion elasticity experiments"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "TOML config file")->expected(1);

  auto* cmd_mesh = app.add_subcommand("mesh", "generate a mesh and dump it as plain text");
  std::string mesh_out = "mesh.txt";
  cmd_mesh->add_option("--out", mesh_out, "output file name");
  cmd_mesh->allow_extras();

  auto* cmd_solve = app.add_subcommand("solve", "solve a single configuration");
  cmd_solve->allow_extras();

  auto* cmd_converge = app.add_subcommand("converge", "refinement study against the "
                                                      "radial analytic solution");
  int levels = 4;
  bool local = false;
  cmd_converge->add_option("--levels", levels, "number of refinement levels");
  cmd_converge->add_flag("--local", local, "add band refinement near the inclusion");
  cmd_converge->allow_extras();

  auto* cmd_modes = app.add_subcommand("modes", "multiplier mode-truncation study");
  std::string radii_csv = "0.2,0.1,0.05";
  std::string mode_counts_csv = "2,4,6,8";
  std::string centers;
  cmd_modes->add_option("--radii", radii_csv, "inclusion radii, comma separated");
  cmd_modes->add_option("--mode-counts", mode_counts_csv, "mode counts, comma separated");
  cmd_modes->add_option("--centers", centers, "inclusion centers as x,y;x,y;...");
  cmd_modes->allow_extras();

  auto* cmd_effective = app.add_subcommand("effective", "compression and shear moduli for one "
                                                        "placement");
  cmd_effective->allow_extras();

  auto* cmd_sweep = app.add_subcommand("sweep", "seed sweep (or compression sweep) of the "
                                                "effective moduli");
  std::string seeds_csv = "1,2,3,4,5,6,7,8,9,10";
  std::string alphas_csv;
  cmd_sweep->add_option("--seeds", seeds_csv, "seeds, comma separated");
  cmd_sweep->add_option("--compression", alphas_csv,
                        "compression factors, comma separated (switches to a compression sweep)");
  cmd_sweep->allow_extras();

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* active = app.get_subcommands().front();
    ExperimentConfig cfg = load_config(config_path, active->remaining());

    if (active == cmd_mesh) return run_mesh(cfg, mesh_out);
    if (active == cmd_solve) return run_solve(cfg);
    if (active == cmd_converge) return run_converge_cmd(cfg, levels, local);
    if (active == cmd_modes) {
      if (!centers.empty()) apply_centers(cfg, centers);
      return run_modes_cmd(cfg, parse_double_list(radii_csv), parse_int_list(mode_counts_csv));
    }
    if (active == cmd_effective) return run_effective_cmd(cfg);
    if (active == cmd_sweep) {
      std::vector<uint64_t> seeds;
      for (int s : parse_int_list(seeds_csv)) seeds.push_back(static_cast<uint64_t>(s));
      std::vector<double> alphas;
      if (!alphas_csv.empty()) alphas = parse_double_list(alphas_csv);
      return run_sweep_cmd(cfg, seeds, alphas);
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
