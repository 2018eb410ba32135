#include "rlm/postprocess.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "rlm/errors.hpp"

namespace rlm {

AnalyticAxisym::AnalyticAxisym(double R_, double ri_, double ubar_)
    : R(R_), r_i(ri_), ubar(ubar_) {
  if (!(R > r_i) || !(r_i > 0.0)) throw ArgumentError("AnalyticAxisym: need R > r_i > 0");
  const double denom = R * R - r_i * r_i;
  c2 = -r_i * ubar / denom;
  c1 = r_i * ubar * R * R / denom;
}

Vec2 AnalyticAxisym::displacement(const Vec2& p) const {
  const double r = p.norm();
  if (r < r_i) return p * (ubar / r_i);
  const double phi = c2 + c1 / (r * r);  // u_r / r
  return p * phi;
}

Mat2 AnalyticAxisym::gradient(const Vec2& p) const {
  const double r = p.norm();
  if (r < r_i) {
    const double s = ubar / r_i;
    return {s, 0.0, 0.0, s};
  }
  // u = phi(r) (x, y) with phi = c2 + c1 / r^2, phi' = -2 c1 / r^3.
  const double phi = c2 + c1 / (r * r);
  const double dphi_over_r = -2.0 * c1 / (r * r * r * r);
  return {phi + dphi_over_r * p.x * p.x, dphi_over_r * p.x * p.y,
          dphi_over_r * p.x * p.y, phi + dphi_over_r * p.y * p.y};
}

double AnalyticAxisym::sigma_rr_exterior(double r, double mu, double lambda) const {
  // d u_r / d r = c2 - c1 / r^2 and div u = 2 c2.
  return mu * (c2 - c1 / (r * r)) + 2.0 * lambda * c2;
}

double AnalyticAxisym::sigma_rr_interior(double mu, double lambda) const {
  const double s = ubar / r_i;  // grad u = s I, div u = 2 s
  return mu * s + 2.0 * lambda * s;
}

double AnalyticAxisym::traction_jump(double mu, double lambda) const {
  return sigma_rr_exterior(r_i, mu, lambda) - sigma_rr_interior(mu, lambda);
}

EocRates eoc(const std::vector<ConvergenceRecord>& records) {
  if (records.size() < 2) throw ArgumentError("eoc: need at least 2 records");
  for (size_t k = 1; k < records.size(); ++k)
    if (!(records[k].h < records[k - 1].h))
      throw ArgumentError("eoc: mesh sizes must strictly decrease");

  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto rate = [&](double e_coarse, double e_fine, double h_coarse, double h_fine) {
    if (e_coarse == 0.0) return nan;
    if (e_fine == 0.0) return nan;
    return std::log(e_coarse / e_fine) / std::log(h_coarse / h_fine);
  };

  EocRates rates;
  for (size_t k = 0; k + 1 < records.size(); ++k) {
    rates.l2.push_back(rate(records[k].error_l2, records[k + 1].error_l2, records[k].h,
                            records[k + 1].h));
    rates.h1.push_back(rate(records[k].error_h1, records[k + 1].error_h1, records[k].h,
                            records[k + 1].h));
  }
  return rates;
}

Vec2 boundary_stress_integral(const FeSpace& space, const Field& u, double mu, double lambda,
                              SideMarker side) {
  const Mesh& mesh = *space.mesh;
  bool seen = false;

  // Each boundary edge belongs to exactly one triangle (conformity).
  std::map<std::pair<int, int>, int> owner;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int e = 0; e < 3; ++e) {
      const int a = tri[e], b = tri[(e + 1) % 3];
      owner[{std::min(a, b), std::max(a, b)}] = t;
    }
  }

  Vec2 force{0.0, 0.0};
  for (const auto& be : mesh.boundary_edges) {
    if (be.marker != side) continue;
    seen = true;
    const int t = owner.at({std::min(be.a, be.b), std::max(be.a, be.b)});
    const Mat2 grad = triangle_gradient(space, u, t);
    const double div = grad.trace();
    const Mat2 sigma{mu * grad.a00 + lambda * div, mu * grad.a01,
                     mu * grad.a10, mu * grad.a11 + lambda * div};
    const Vec2 edge = mesh.vertices[be.b] - mesh.vertices[be.a];
    // CCW boundary: outward normal times edge length.
    const Vec2 n_ds{edge.y, -edge.x};
    force += sigma.apply(n_ds);
  }
  if (!seen) throw ArgumentError("boundary_stress_integral: marker not present in mesh");
  return force;
}

double effective_bulk(const std::array<Vec2, 4>& side_forces_lrbt, double delta_area) {
  if (!(delta_area > 0.0)) throw ArgumentError("effective_bulk: delta area must be positive");
  const double total = std::abs(side_forces_lrbt[0].x) + std::abs(side_forces_lrbt[1].x) +
                       std::abs(side_forces_lrbt[2].y) + std::abs(side_forces_lrbt[3].y);
  return total / delta_area;
}

double effective_shear(double top_force_x, double edge_length) {
  if (!(edge_length > 0.0)) throw ArgumentError("effective_shear: edge length must be positive");
  return std::abs(top_force_x) / edge_length;
}

ModeReport mode_report(int inclusion_index, const ReducedMultiplier& lambda) {
  if (lambda.size() < 4 || lambda.size() % 2 != 0)
    throw ArgumentError("mode_report: need at least two modes");
  ModeReport rep;
  rep.inclusion = inclusion_index;
  double norm2 = 0.0;
  for (double v : lambda) norm2 += v * v;
  rep.lambda_norm = std::sqrt(norm2);
  if (norm2 == 0.0) {
    rep.defined = false;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    rep.rel_sq.assign(lambda.size(), nan);
    rep.rel_m1x = rep.rel_m2y = rep.truncation_error = nan;
    return rep;
  }
  rep.rel_sq.reserve(lambda.size());
  for (double v : lambda) rep.rel_sq.push_back(v * v / norm2);
  rep.rel_m1x = rep.rel_sq[0];  // mode 1, x component
  rep.rel_m2y = rep.rel_sq[3];  // mode 2, y component
  rep.truncation_error = 1.0 - (rep.rel_m1x + rep.rel_m2y);
  rep.truncation_error = std::fmin(1.0, std::fmax(0.0, rep.truncation_error));
  return rep;
}

}  // namespace rlm
