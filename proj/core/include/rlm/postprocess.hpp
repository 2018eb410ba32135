#pragma once

#include <array>
#include <vector>

#include "rlm/fe.hpp"
#include "rlm/inclusion.hpp"

namespace rlm {

// Radial solution of the single centered inclusion in a disc of radius R with
// a zero outer boundary: u_r(r) = c2 r + c1 / r outside the inclusion and the
// linear field (ubar / r_i) (x, y) inside it (zero fictitious force).
struct AnalyticAxisym {
  double R = 1.0;
  double r_i = 0.2;
  double ubar = 0.1;
  double c1 = 0.0;
  double c2 = 0.0;

  AnalyticAxisym(double R_, double ri_, double ubar_);

  Vec2 displacement(const Vec2& p) const;
  Mat2 gradient(const Vec2& p) const;

  // Radial exterior stress component sigma_rr(r) for material (mu, lambda),
  // using the stress form mu grad(u) + lambda div(u) I.
  double sigma_rr_exterior(double r, double mu, double lambda) const;
  double sigma_rr_interior(double mu, double lambda) const;
  // Radial traction jump (exterior minus interior) at the inclusion boundary.
  double traction_jump(double mu, double lambda) const;
};

struct ConvergenceRecord {
  int level = 0;
  int ndof = 0;
  double h = 0.0;
  double error_l2 = 0.0;
  double error_h1 = 0.0;
};

struct EocRates {
  std::vector<double> l2;  // one per consecutive level pair; NaN marks an
  std::vector<double> h1;  // undefined rate (zero coarse error)
};

EocRates eoc(const std::vector<ConvergenceRecord>& records);

// Side force integral \int_side sigma(u_h) n, edge-wise from the constant
// per-triangle stress. Exact for affine displacement fields.
Vec2 boundary_stress_integral(const FeSpace& space, const Field& u, double mu, double lambda,
                              SideMarker side);

struct EffectiveModuli {
  double fluid_volume_ratio = 0.0;
  std::array<Vec2, 4> side_forces;  // left, right, bottom, top
  double kappa_eff = 0.0;
  double mu_eff = 0.0;
};

// kappa_eff = (sum over sides of |normal force integral|) / |delta area|.
double effective_bulk(const std::array<Vec2, 4>& side_forces_lrbt, double delta_area);
// mu_eff = |Fx through the top side| / edge length.
double effective_shear(double top_force_x, double edge_length);

struct ModeReport {
  int inclusion = 0;
  double lambda_norm = 0.0;
  std::vector<double> rel_sq;  // per-entry |Lambda_k|^2 / ||Lambda||^2
  double rel_m1x = 0.0;        // share of mode 1 x
  double rel_m2y = 0.0;        // share of mode 2 y
  double truncation_error = 0.0;
  bool defined = true;  // false when ||Lambda|| = 0
};

ModeReport mode_report(int inclusion_index, const ReducedMultiplier& lambda);

}  // namespace rlm
