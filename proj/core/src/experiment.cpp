#include "rlm/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "rlm/errors.hpp"
#include "rlm/sha256.hpp"

namespace rlm {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

double DomainSpec::area() const {
  return kind == Kind::Rect ? (xmax - xmin) * (ymax - ymin) : M_PI * radius * radius;
}

int rlm_thread_cap() {
  const char* env = std::getenv("RLM_THREADS");
  if (!env) return 1;
  const int n = std::atoi(env);
  return std::max(1, n);
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

void set_key(ExperimentConfig& cfg, const std::string& section, const std::string& key,
             const std::string& raw) {
  std::string value = raw;
  if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
    value = value.substr(1, value.size() - 2);

  auto as_double = [&]() { return std::stod(value); };
  auto as_int = [&]() { return std::stoi(value); };
  auto as_u64 = [&]() { return static_cast<uint64_t>(std::stoull(value)); };
  auto as_bool = [&]() {
    if (value == "true") return true;
    if (value == "false") return false;
    throw ArgumentError("config: expected true/false for " + section + "." + key);
  };

  const std::string full = section + "." + key;
  if (section == "domain") {
    if (key == "kind") {
      if (value == "rect")
        cfg.domain.kind = DomainSpec::Kind::Rect;
      else if (value == "disc")
        cfg.domain.kind = DomainSpec::Kind::Disc;
      else
        throw ArgumentError("config: domain.kind must be rect or disc");
    } else if (key == "xmin")
      cfg.domain.xmin = as_double();
    else if (key == "xmax")
      cfg.domain.xmax = as_double();
    else if (key == "ymin")
      cfg.domain.ymin = as_double();
    else if (key == "ymax")
      cfg.domain.ymax = as_double();
    else if (key == "radius")
      cfg.domain.radius = as_double();
    else
      throw ArgumentError("config: unknown key " + full);
  } else if (section == "material") {
    if (key == "mu")
      cfg.material.mu = as_double();
    else if (key == "lambda")
      cfg.material.lambda = as_double();
    else
      throw ArgumentError("config: unknown key " + full);
  } else if (section == "inclusions") {
    if (key == "placement")
      cfg.inclusions.placement = value;
    else if (key == "count")
      cfg.inclusions.count = as_int();
    else if (key == "grid_x")
      cfg.inclusions.grid_x = as_int();
    else if (key == "grid_y")
      cfg.inclusions.grid_y = as_int();
    else if (key == "core_grid")
      cfg.inclusions.core_grid = as_int();
    else if (key == "radius")
      cfg.inclusions.radius = as_double();
    else if (key == "gbar")
      cfg.inclusions.gbar = as_double();
    else if (key == "modes")
      cfg.inclusions.modes = as_int();
    else if (key == "seed")
      cfg.inclusions.seed = as_u64();
    else if (key == "max_attempts")
      cfg.inclusions.max_attempts = as_int();
    else if (key == "file")
      cfg.inclusions.file = value;
    else
      throw ArgumentError("config: unknown key " + full);
  } else if (section == "mesh") {
    if (key == "subdivisions")
      cfg.mesh.subdivisions = as_int();
    else if (key == "rings")
      cfg.mesh.rings = as_int();
    else if (key == "sectors")
      cfg.mesh.sectors = as_int();
    else if (key == "global_levels")
      cfg.mesh.global_levels = as_int();
    else if (key == "local_levels")
      cfg.mesh.local_levels = as_int();
    else if (key == "band_factor")
      cfg.mesh.band_factor = as_double();
    else
      throw ArgumentError("config: unknown key " + full);
  } else if (section == "bc") {
    if (key == "case")
      cfg.bc.kind = value;
    else if (key == "alpha")
      cfg.bc.alpha = as_double();
    else
      throw ArgumentError("config: unknown key " + full);
  } else if (section == "solver") {
    if (key == "tol")
      cfg.solver.tol = as_double();
    else if (key == "max_iter")
      cfg.solver.max_iter = as_int();
    else
      throw ArgumentError("config: unknown key " + full);
  } else if (section == "output") {
    if (key == "dir")
      cfg.output.dir = value;
    else if (key == "vtk")
      cfg.output.vtk = as_bool();
    else
      throw ArgumentError("config: unknown key " + full);
  } else {
    throw ArgumentError("config: unknown section " + section);
  }
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // Strip comments outside quotes.
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ArgumentError("config: bad section header at line " + std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos || section.empty())
      throw ArgumentError("config: expected key = value at line " + std::to_string(lineno));
    set_key(cfg, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open config file: " + path);
  return parse_config(in);
}

void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  const auto dot = key.find('.');
  if (dot == std::string::npos)
    throw ArgumentError("override key must look like section.key: " + key);
  set_key(cfg, key.substr(0, dot), key.substr(dot + 1), value);
}

std::string canonical_config_string(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "domain.kind=" << (c.domain.kind == DomainSpec::Kind::Rect ? "rect" : "disc")
     << ";domain.xmin=" << fmt17(c.domain.xmin) << ";domain.xmax=" << fmt17(c.domain.xmax)
     << ";domain.ymin=" << fmt17(c.domain.ymin) << ";domain.ymax=" << fmt17(c.domain.ymax)
     << ";domain.radius=" << fmt17(c.domain.radius) << ";material.mu=" << fmt17(c.material.mu)
     << ";material.lambda=" << fmt17(c.material.lambda)
     << ";inclusions.placement=" << c.inclusions.placement
     << ";inclusions.count=" << c.inclusions.count << ";inclusions.grid_x=" << c.inclusions.grid_x
     << ";inclusions.grid_y=" << c.inclusions.grid_y
     << ";inclusions.core_grid=" << c.inclusions.core_grid
     << ";inclusions.radius=" << fmt17(c.inclusions.radius)
     << ";inclusions.gbar=" << fmt17(c.inclusions.gbar)
     << ";inclusions.modes=" << c.inclusions.modes << ";inclusions.seed=" << c.inclusions.seed
     << ";inclusions.max_attempts=" << c.inclusions.max_attempts
     << ";inclusions.file=" << c.inclusions.file;
  for (const auto& inc : c.inclusions.explicit_list)
    os << ";inclusion=" << fmt17(inc.center.x) << "," << fmt17(inc.center.y) << ","
       << fmt17(inc.radius) << "," << fmt17(inc.gbar) << "," << inc.n_modes;
  os << ";mesh.subdivisions=" << c.mesh.subdivisions << ";mesh.rings=" << c.mesh.rings
     << ";mesh.sectors=" << c.mesh.sectors << ";mesh.global_levels=" << c.mesh.global_levels
     << ";mesh.local_levels=" << c.mesh.local_levels
     << ";mesh.band_factor=" << fmt17(c.mesh.band_factor) << ";bc.case=" << c.bc.kind
     << ";bc.alpha=" << fmt17(c.bc.alpha) << ";solver.tol=" << fmt17(c.solver.tol)
     << ";solver.max_iter=" << c.solver.max_iter << ";output.dir=" << c.output.dir
     << ";output.vtk=" << (c.output.vtk ? "true" : "false");
  return os.str();
}

std::string config_hash(const ExperimentConfig& cfg) {
  return sha256_hex(canonical_config_string(cfg));
}

std::string reproducibility_header(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "# config-sha256=" << config_hash(cfg) << " seed=" << cfg.inclusions.seed;
  return os.str();
}

// ---------------------------------------------------------------------------
// Pipeline pieces

std::vector<Inclusion> make_inclusions(const ExperimentConfig& cfg) {
  const auto& spec = cfg.inclusions;
  const RectDomain rect = cfg.domain.rect();
  std::vector<Inclusion> list;

  if (spec.placement == "none") {
    // pure solid
  } else if (spec.placement == "single") {
    Vec2 center{0.0, 0.0};
    if (cfg.domain.kind == DomainSpec::Kind::Rect)
      center = {0.5 * (rect.xmin + rect.xmax), 0.5 * (rect.ymin + rect.ymax)};
    list.push_back({center, spec.radius, spec.gbar, spec.modes});
  } else if (spec.placement == "structured") {
    const auto res = (spec.grid_x > 0 && spec.grid_y > 0)
                         ? place_structured(rect, spec.grid_x, spec.grid_y, spec.radius,
                                            spec.gbar, spec.modes)
                         : place_structured(rect, spec.count, spec.radius, spec.gbar, spec.modes);
    list = res.inclusions;
  } else if (spec.placement == "semi") {
    const int kx = spec.grid_x > 0 ? spec.grid_x
                                   : static_cast<int>(std::lround(std::sqrt(double(spec.count))));
    const int ky = spec.grid_y > 0 ? spec.grid_y : kx;
    list = place_semistructured(rect, kx, ky, spec.radius, spec.gbar, spec.modes, spec.seed)
               .inclusions;
  } else if (spec.placement == "random") {
    list = place_random(rect, spec.count, spec.radius, spec.gbar, spec.modes, spec.seed,
                        spec.max_attempts)
               .inclusions;
  } else if (spec.placement == "two_density") {
    list = place_two_density(rect, spec.core_grid, spec.gbar, spec.modes, spec.radius).inclusions;
  } else if (spec.placement == "file") {
    std::ifstream in(spec.file);
    if (!in) throw ArgumentError("cannot open inclusion file: " + spec.file);
    list = read_inclusions_csv(in, spec.modes);
  } else if (spec.placement == "explicit") {
    list = spec.explicit_list;
  } else {
    throw ArgumentError("unknown placement kind: " + spec.placement);
  }

  if (!list.empty()) {
    Vec2 lo{rect.xmin, rect.ymin}, hi{rect.xmax, rect.ymax};
    if (cfg.domain.kind == DomainSpec::Kind::Disc) {
      lo = {-cfg.domain.radius, -cfg.domain.radius};
      hi = {cfg.domain.radius, cfg.domain.radius};
    }
    validate_inclusions(list, lo, hi);
  }
  return list;
}

bool near_any_circle(const Mesh& mesh, int t, const std::vector<Inclusion>& inclusions,
                     double band_factor) {
  const double band = band_factor * mesh.triangle_diameter(t);
  const auto& tri = mesh.triangles[t];
  for (const auto& inc : inclusions) {
    // Distance range from the inclusion center to the triangle.
    double dmax = 0.0;
    for (int v = 0; v < 3; ++v)
      dmax = std::max(dmax, (mesh.vertices[tri[v]] - inc.center).norm());
    bool inside = true;
    for (int e = 0; e < 3; ++e)
      inside = inside && triangle_signed_area(mesh.vertices[tri[e]], mesh.vertices[tri[(e + 1) % 3]],
                                              inc.center) >= 0.0;
    double dmin = 0.0;
    if (!inside) {
      dmin = std::numeric_limits<double>::max();
      for (int e = 0; e < 3; ++e)
        dmin = std::min(dmin, point_segment_distance(inc.center, mesh.vertices[tri[e]],
                                                     mesh.vertices[tri[(e + 1) % 3]]));
    }
    if (dmin <= inc.radius + band && dmax >= inc.radius - band) return true;
  }
  return false;
}

std::shared_ptr<const Mesh> build_mesh(const ExperimentConfig& cfg,
                                       const std::vector<Inclusion>& inclusions) {
  Mesh mesh = cfg.domain.kind == DomainSpec::Kind::Rect
                  ? generate_rect_mesh(cfg.domain.xmin, cfg.domain.xmax, cfg.domain.ymin,
                                       cfg.domain.ymax, cfg.mesh.subdivisions)
                  : generate_disc_mesh(cfg.domain.radius, cfg.mesh.rings, cfg.mesh.sectors);
  for (int l = 0; l < cfg.mesh.global_levels; ++l) mesh = refine_uniform(mesh);
  for (int l = 0; l < cfg.mesh.local_levels; ++l)
    mesh = refine_local(mesh, [&](const Mesh& m, int t) {
      return near_any_circle(m, t, inclusions, cfg.mesh.band_factor);
    });
  return std::make_shared<Mesh>(std::move(mesh));
}

BoundaryFn boundary_function(const BcSpec& bc) {
  if (bc.kind == "zero")
    return [](SideMarker, const Vec2&) { return std::optional<Vec2>(Vec2{0.0, 0.0}); };
  if (bc.kind == "compression") {
    const double a = bc.alpha;
    return [a](SideMarker, const Vec2& p) { return std::optional<Vec2>(p * (-a)); };
  }
  if (bc.kind == "shear")
    return [](SideMarker, const Vec2& p) { return std::optional<Vec2>(Vec2{p.y, 0.0}); };
  throw ArgumentError("unknown bc case: " + bc.kind);
}

PipelineRun run_pipeline(const ExperimentConfig& cfg) {
  PipelineRun run;
  run.inclusions = make_inclusions(cfg);
  run.mesh = build_mesh(cfg, run.inclusions);
  FeSpace space = build_space(run.mesh);
  const SymSparseMatrix A = assemble_stiffness(space, cfg.material.mu, cfg.material.lambda);
  run.space = apply_dirichlet(space, boundary_function(cfg.bc));

  CouplingBlock coupling;
  if (!run.inclusions.empty()) coupling = assemble_coupling(run.space, run.inclusions);
  const Field f(run.space.n_dofs(), 0.0);
  const SaddleSystem sys = build_saddle_system(run.space, A, coupling, f);
  run.solution = solve_saddle(sys, cfg.solver.tol, cfg.solver.max_iter);
  return run;
}

// ---------------------------------------------------------------------------
// Drivers

ConvergenceStudy run_convergence(const ExperimentConfig& cfg, int levels, bool local) {
  if (levels < 2) throw ArgumentError("run_convergence: need at least 2 levels");
  if (cfg.domain.kind != DomainSpec::Kind::Disc || cfg.inclusions.placement != "single")
    throw ArgumentError("run_convergence: expects a disc domain with a single inclusion");

  const AnalyticAxisym exact(cfg.domain.radius, cfg.inclusions.radius, cfg.inclusions.gbar);
  auto exact_u = [&](const Vec2& p) { return exact.displacement(p); };
  auto exact_g = [&](const Vec2& p) { return exact.gradient(p); };

  ConvergenceStudy study;
  for (int level = 0; level < levels; ++level) {
    ExperimentConfig level_cfg = cfg;
    level_cfg.mesh.global_levels = level;
    level_cfg.mesh.local_levels = local ? level : 0;
    const PipelineRun run = run_pipeline(level_cfg);
    const auto norms = error_norms(run.space, run.solution.u, exact_u, exact_g);
    study.records.push_back({level, run.space.n_dofs(), run.mesh->max_edge_length(), norms.l2,
                             norms.h1_semi});
  }
  study.rates = eoc(study.records);
  return study;
}

std::vector<ModeStudyRow> run_mode_study(const ExperimentConfig& cfg,
                                         const std::vector<double>& radii,
                                         const std::vector<int>& mode_counts) {
  std::vector<ModeStudyRow> rows;
  for (double ri : radii) {
    for (int n_modes : mode_counts) {
      ExperimentConfig sub = cfg;
      sub.inclusions.radius = ri;
      sub.inclusions.modes = n_modes;
      for (auto& inc : sub.inclusions.explicit_list) {
        inc.radius = ri;
        inc.n_modes = n_modes;
      }
      const PipelineRun run = run_pipeline(sub);
      for (size_t j = 0; j < run.solution.multipliers.size(); ++j) {
        const auto rep = mode_report(static_cast<int>(j), run.solution.multipliers[j]);
        rows.push_back({rep.inclusion, ri, n_modes, rep.lambda_norm, rep.rel_m1x, rep.rel_m2y,
                        rep.truncation_error});
      }
    }
  }
  return rows;
}

namespace {

std::array<Vec2, 4> side_forces(const PipelineRun& run, const MaterialSpec& mat) {
  return {boundary_stress_integral(run.space, run.solution.u, mat.mu, mat.lambda,
                                   SideMarker::Left),
          boundary_stress_integral(run.space, run.solution.u, mat.mu, mat.lambda,
                                   SideMarker::Right),
          boundary_stress_integral(run.space, run.solution.u, mat.mu, mat.lambda,
                                   SideMarker::Bottom),
          boundary_stress_integral(run.space, run.solution.u, mat.mu, mat.lambda,
                                   SideMarker::Top)};
}

}  // namespace

EffectiveRow run_effective(const ExperimentConfig& cfg) {
  if (cfg.domain.kind != DomainSpec::Kind::Rect)
    throw ArgumentError("run_effective: expects a rectangular domain");

  EffectiveRow row;
  row.placement = cfg.inclusions.placement;
  row.seed = cfg.inclusions.seed;

  ExperimentConfig comp = cfg;
  comp.bc.kind = "compression";
  const PipelineRun comp_run = run_pipeline(comp);
  row.vf = fluid_volume_ratio(comp_run.inclusions, cfg.domain.area());
  row.compression_forces = side_forces(comp_run, cfg.material);
  const double alpha = cfg.bc.alpha;
  const double delta_area = cfg.domain.area() * (1.0 - (1.0 - alpha) * (1.0 - alpha));
  row.kappa_eff = effective_bulk(row.compression_forces, delta_area);

  ExperimentConfig shear = cfg;
  shear.bc.kind = "shear";
  const PipelineRun shear_run = run_pipeline(shear);
  const auto forces = side_forces(shear_run, cfg.material);
  row.mu_eff = effective_shear(forces[3].x, cfg.domain.xmax - cfg.domain.xmin);
  return row;
}

SweepSummary run_seed_sweep(const ExperimentConfig& cfg, const std::vector<uint64_t>& seeds) {
  SweepSummary summary;
  summary.rows.resize(seeds.size());

  const int n_threads = std::min<int>(rlm_thread_cap(), static_cast<int>(seeds.size()));
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= seeds.size()) break;
      ExperimentConfig sub = cfg;
      sub.inclusions.seed = seeds[i];
      summary.rows[i] = run_effective(sub);
    }
  };
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  const size_t n = summary.rows.size();
  double ks = 0.0, ms = 0.0;
  for (const auto& r : summary.rows) {
    ks += r.kappa_eff;
    ms += r.mu_eff;
  }
  summary.kappa_mean = ks / n;
  summary.mu_mean = ms / n;
  double kv = 0.0, mv = 0.0;
  for (const auto& r : summary.rows) {
    kv += (r.kappa_eff - summary.kappa_mean) * (r.kappa_eff - summary.kappa_mean);
    mv += (r.mu_eff - summary.mu_mean) * (r.mu_eff - summary.mu_mean);
  }
  if (n > 1) {
    summary.kappa_std = std::sqrt(kv / (n - 1));
    summary.mu_std = std::sqrt(mv / (n - 1));
  }
  return summary;
}

std::vector<CompressionPoint> run_compression_sweep(const ExperimentConfig& cfg,
                                                    const std::vector<double>& alphas) {
  if (cfg.domain.kind != DomainSpec::Kind::Rect)
    throw ArgumentError("run_compression_sweep: expects a rectangular domain");

  // One mesh and one coupling block for the whole sweep.
  const std::vector<Inclusion> inclusions = make_inclusions(cfg);
  const auto mesh = build_mesh(cfg, inclusions);
  const FeSpace space0 = build_space(mesh);
  const SymSparseMatrix A = assemble_stiffness(space0, cfg.material.mu, cfg.material.lambda);
  CouplingBlock coupling;
  if (!inclusions.empty()) coupling = assemble_coupling(space0, inclusions);

  const double perimeter =
      2.0 * ((cfg.domain.xmax - cfg.domain.xmin) + (cfg.domain.ymax - cfg.domain.ymin));

  std::vector<CompressionPoint> points;
  for (double alpha : alphas) {
    BcSpec bc;
    bc.kind = "compression";
    bc.alpha = alpha;
    PipelineRun run;
    run.mesh = mesh;
    run.inclusions = inclusions;
    run.space = apply_dirichlet(space0, boundary_function(bc));
    const Field f(run.space.n_dofs(), 0.0);
    const SaddleSystem sys = build_saddle_system(run.space, A, coupling, f);
    run.solution = solve_saddle(sys, cfg.solver.tol, cfg.solver.max_iter);

    const auto forces = side_forces(run, cfg.material);
    const double total = std::abs(forces[0].x) + std::abs(forces[1].x) + std::abs(forces[2].y) +
                         std::abs(forces[3].y);
    points.push_back({alpha, 1.0 - (1.0 - alpha) * (1.0 - alpha), total / perimeter});
  }
  return points;
}

// ---------------------------------------------------------------------------
// CSV emission

void write_convergence_csv(const ExperimentConfig& cfg, const ConvergenceStudy& study,
                           std::ostream& out) {
  out << reproducibility_header(cfg) << "\n";
  out << "level,ndof,h,eL2,eH1,rateL2,rateH1\n";
  for (size_t k = 0; k < study.records.size(); ++k) {
    const auto& r = study.records[k];
    out << r.level << "," << r.ndof << "," << fmt17(r.h) << "," << fmt17(r.error_l2) << ","
        << fmt17(r.error_h1);
    if (k == 0)
      out << ",nan,nan";
    else
      out << "," << fmt17(study.rates.l2[k - 1]) << "," << fmt17(study.rates.h1[k - 1]);
    out << "\n";
  }
}

void write_mode_csv(const ExperimentConfig& cfg, const std::vector<ModeStudyRow>& rows,
                    std::ostream& out) {
  out << reproducibility_header(cfg) << "\n";
  out << "inclusion,ri,modes,lambda_norm,rel_m1x,rel_m2y,trunc_error\n";
  for (const auto& r : rows)
    out << r.inclusion << "," << fmt17(r.ri) << "," << r.modes << "," << fmt17(r.lambda_norm)
        << "," << fmt17(r.rel_m1x) << "," << fmt17(r.rel_m2y) << ","
        << fmt17(r.truncation_error) << "\n";
}

void write_effective_csv(const ExperimentConfig& cfg, const std::vector<EffectiveRow>& rows,
                         std::ostream& out) {
  out << reproducibility_header(cfg) << "\n";
  out << "vf,placement,seed,kappa_eff,mu_eff,F0x,F0y,F1x,F1y,F2x,F2y,F3x,F3y\n";
  for (const auto& r : rows) {
    out << fmt17(r.vf) << "," << r.placement << "," << r.seed << "," << fmt17(r.kappa_eff) << ","
        << fmt17(r.mu_eff);
    for (const auto& f : r.compression_forces) out << "," << fmt17(f.x) << "," << fmt17(f.y);
    out << "\n";
  }
}

void write_sweep_summary_csv(const ExperimentConfig& cfg, const SweepSummary& summary,
                             std::ostream& out) {
  out << reproducibility_header(cfg) << "\n";
  out << "n_seeds,kappa_mean,kappa_std,mu_mean,mu_std\n";
  out << summary.rows.size() << "," << fmt17(summary.kappa_mean) << ","
      << fmt17(summary.kappa_std) << "," << fmt17(summary.mu_mean) << ","
      << fmt17(summary.mu_std) << "\n";
}

void write_compression_csv(const ExperimentConfig& cfg, const std::vector<CompressionPoint>& pts,
                           std::ostream& out) {
  out << reproducibility_header(cfg) << "\n";
  out << "alpha,area_reduction,avg_pressure\n";
  for (const auto& p : pts)
    out << fmt17(p.alpha) << "," << fmt17(p.area_reduction) << "," << fmt17(p.avg_pressure)
        << "\n";
}

void write_report_csv(const ExperimentConfig& cfg, const SolveReport& report, std::ostream& out) {
  out << reproducibility_header(cfg) << "\n";
  out << "outer_iters,schur_res,primal_res,factor_nnz\n";
  out << report.csv_row() << "\n";
}

}  // namespace rlm
