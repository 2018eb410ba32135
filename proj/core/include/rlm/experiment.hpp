#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "rlm/placement.hpp"
#include "rlm/postprocess.hpp"
#include "rlm/saddle.hpp"

namespace rlm {

struct DomainSpec {
  enum class Kind { Rect, Disc };
  Kind kind = Kind::Rect;
  double xmin = -1.0, xmax = 1.0, ymin = -1.0, ymax = 1.0;
  double radius = 1.0;  // disc

  RectDomain rect() const { return {xmin, xmax, ymin, ymax}; }
  double area() const;
};

struct MaterialSpec {
  double mu = 1.0;
  double lambda = 1.0;
};

struct InclusionSpec {
  // none | single | structured | semi | random | two_density | file | explicit
  std::string placement = "none";
  int count = 0;
  int grid_x = 0, grid_y = 0;
  int core_grid = 3;
  double radius = 0.05;
  double gbar = 0.1;
  int modes = 2;
  uint64_t seed = 1;
  int max_attempts = 100000;
  std::string file;
  std::vector<Inclusion> explicit_list;  // programmatic only
};

struct MeshSpec {
  int subdivisions = 32;      // rect cells per side
  int rings = 8, sectors = 24;  // disc base grid
  int global_levels = 0;
  int local_levels = 0;
  double band_factor = 1.0;  // width of the refinement band in triangle diameters
};

struct BcSpec {
  std::string kind = "zero";  // zero | compression | shear
  double alpha = 0.1;         // compression factor: u = -alpha (x, y)
};

struct SolverSpec {
  double tol = 1e-10;
  int max_iter = 500;
};

struct OutputSpec {
  std::string dir = ".";
  bool vtk = false;
};

struct ExperimentConfig {
  DomainSpec domain;
  MaterialSpec material;
  InclusionSpec inclusions;
  MeshSpec mesh;
  BcSpec bc;
  SolverSpec solver;
  OutputSpec output;
};

// Minimal TOML subset: [section] headers, key = value scalars (numbers,
// booleans, double-quoted strings), full-line or trailing # comments.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);
// key is "section.key", e.g. apply_override(cfg, "mesh.subdivisions", "64").
void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value);

std::string canonical_config_string(const ExperimentConfig& cfg);
std::string config_hash(const ExperimentConfig& cfg);
// "# config-sha256=<hex> seed=<n>"
std::string reproducibility_header(const ExperimentConfig& cfg);

std::vector<Inclusion> make_inclusions(const ExperimentConfig& cfg);
std::shared_ptr<const Mesh> build_mesh(const ExperimentConfig& cfg,
                                       const std::vector<Inclusion>& inclusions);
BoundaryFn boundary_function(const BcSpec& bc);

// True if triangle t lies within band_factor triangle diameters of the
// boundary circle of any inclusion.
bool near_any_circle(const Mesh& mesh, int t, const std::vector<Inclusion>& inclusions,
                     double band_factor);

struct PipelineRun {
  std::shared_ptr<const Mesh> mesh;
  FeSpace space;
  std::vector<Inclusion> inclusions;
  SaddleSolution solution;
};

// mesh -> assemble -> solve with the configured boundary case and zero body
// force.
PipelineRun run_pipeline(const ExperimentConfig& cfg);

struct ConvergenceStudy {
  std::vector<ConvergenceRecord> records;
  EocRates rates;
};

// Single centered inclusion in a disc, compared against the radial analytic
// solution. Level L uses L uniform refinements, plus L band passes near the
// inclusion boundary when local is set.
ConvergenceStudy run_convergence(const ExperimentConfig& cfg, int levels, bool local);

struct ModeStudyRow {
  int inclusion = 0;
  double ri = 0.0;
  int modes = 0;
  double lambda_norm = 0.0;
  double rel_m1x = 0.0;
  double rel_m2y = 0.0;
  double truncation_error = 0.0;
};

std::vector<ModeStudyRow> run_mode_study(const ExperimentConfig& cfg,
                                         const std::vector<double>& radii,
                                         const std::vector<int>& mode_counts);

struct EffectiveRow {
  double vf = 0.0;
  std::string placement;
  uint64_t seed = 0;
  double kappa_eff = 0.0;
  double mu_eff = 0.0;
  std::array<Vec2, 4> compression_forces{};  // left, right, bottom, top
};

// One compression and one shear solve on the configured placement.
EffectiveRow run_effective(const ExperimentConfig& cfg);

struct SweepSummary {
  std::vector<EffectiveRow> rows;
  double kappa_mean = 0.0, kappa_std = 0.0;
  double mu_mean = 0.0, mu_std = 0.0;
};

// Independent runs per seed, parallel up to RLM_THREADS (default 1); rows are
// gathered in seed order so output bytes do not depend on the thread count.
SweepSummary run_seed_sweep(const ExperimentConfig& cfg, const std::vector<uint64_t>& seeds);

struct CompressionPoint {
  double alpha = 0.0;
  double area_reduction = 0.0;  // share of |Omega|
  double avg_pressure = 0.0;    // sum of |normal force| over sides / perimeter
};

// Compression sweep on a fixed placement; the mesh and stiffness are shared
// across the sweep, only the boundary lifting changes.
std::vector<CompressionPoint> run_compression_sweep(const ExperimentConfig& cfg,
                                                    const std::vector<double>& alphas);

void write_convergence_csv(const ExperimentConfig& cfg, const ConvergenceStudy& study,
                           std::ostream& out);
void write_mode_csv(const ExperimentConfig& cfg, const std::vector<ModeStudyRow>& rows,
                    std::ostream& out);
void write_effective_csv(const ExperimentConfig& cfg, const std::vector<EffectiveRow>& rows,
                         std::ostream& out);
void write_sweep_summary_csv(const ExperimentConfig& cfg, const SweepSummary& summary,
                             std::ostream& out);
void write_compression_csv(const ExperimentConfig& cfg, const std::vector<CompressionPoint>& pts,
                           std::ostream& out);
void write_report_csv(const ExperimentConfig& cfg, const SolveReport& report, std::ostream& out);

int rlm_thread_cap();

}  // namespace rlm
