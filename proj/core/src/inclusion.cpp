#include "rlm/inclusion.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "rlm/errors.hpp"

namespace rlm {

void validate_inclusions(const std::vector<Inclusion>& inclusions, const Vec2& domain_lo,
                         const Vec2& domain_hi) {
  for (size_t i = 0; i < inclusions.size(); ++i) {
    const auto& inc = inclusions[i];
    if (!(inc.radius > 0.0))
      throw GeometryError(static_cast<int>(i), "inclusion radius must be positive");
    if (inc.n_modes < 2 || inc.n_modes % 2 != 0)
      throw GeometryError(static_cast<int>(i), "mode count must be even and >= 2");
    const double r = inc.radius * (1.0 + 1e-9);
    if (inc.center.x - r <= domain_lo.x || inc.center.x + r >= domain_hi.x ||
        inc.center.y - r <= domain_lo.y || inc.center.y + r >= domain_hi.y)
      throw GeometryError(static_cast<int>(i), "inclusion is not strictly inside the domain");
    for (size_t j = 0; j < i; ++j) {
      const double dist = (inc.center - inclusions[j].center).norm();
      if (dist <= inc.radius + inclusions[j].radius)
        throw GeometryError(static_cast<int>(i), "inclusions overlap");
    }
  }
}

double fourier_mode(int i, double theta) {
  if (i < 0) throw ArgumentError("fourier_mode: index must be >= 0");
  if (i == 0) return 1.0;
  const int k = (i + 1) / 2;  // frequency
  const double s = std::sqrt(2.0);
  return (i % 2 == 1) ? s * std::cos(k * theta) : s * std::sin(k * theta);
}

int default_circle_points(int n_modes) { return std::max(16, 8 * n_modes); }

int coupling_circle_points(const FeSpace& space, const Inclusion& inclusion) {
  // Probe the mesh size along the circle, then place ~4 points per local
  // element, rounded up to a multiple of 4 so symmetric geometries keep
  // their symmetry.
  const Mesh& mesh = *space.mesh;
  double h_min = std::numeric_limits<double>::max();
  const int probes = 64;
  for (int q = 0; q < probes; ++q) {
    const double theta = 2.0 * M_PI * q / probes;
    const Vec2 x = inclusion.center +
                   Vec2{inclusion.radius * std::cos(theta), inclusion.radius * std::sin(theta)};
    PointLocation loc;
    try {
      loc = space.locator->locate(x);
    } catch (const LocationError&) {
      continue;  // reported properly during assembly
    }
    const auto& tri = mesh.triangles[loc.triangle];
    for (int e = 0; e < 3; ++e)
      h_min = std::min(h_min,
                       (mesh.vertices[tri[(e + 1) % 3]] - mesh.vertices[tri[(e + 2) % 3]]).norm());
  }
  int m = default_circle_points(inclusion.n_modes);
  if (h_min < std::numeric_limits<double>::max()) {
    const double dense = 4.0 * 2.0 * M_PI * inclusion.radius / h_min;
    m = std::max(m, static_cast<int>(std::ceil(dense)));
  }
  return ((m + 3) / 4) * 4;
}

std::vector<CirclePoint> circle_quadrature(const Inclusion& inclusion, int n_points) {
  if (n_points < 2 * inclusion.n_modes + 2)
    throw ArgumentError("circle_quadrature: need at least 2N+2 points");
  std::vector<CirclePoint> pts(n_points);
  const double w = 2.0 * M_PI * inclusion.radius / n_points;
  for (int q = 0; q < n_points; ++q) {
    const double theta = 2.0 * M_PI * q / n_points;
    pts[q].angle = theta;
    pts[q].position = inclusion.center +
                      Vec2{inclusion.radius * std::cos(theta), inclusion.radius * std::sin(theta)};
    pts[q].weight = w;
  }
  return pts;
}

double CouplingBlock::apply_row(int r, const Field& u) const {
  double sum = 0.0;
  for (const auto& e : rows[r]) sum += e.value * u[e.dof];
  return sum;
}

void CouplingBlock::add_transpose_apply(const std::vector<double>& lambda, Field& y) const {
  for (int r = 0; r < n_rows(); ++r)
    for (const auto& e : rows[r]) y[e.dof] += e.value * lambda[r];
}

CouplingBlock assemble_coupling(const FeSpace& space, const std::vector<Inclusion>& inclusions) {
  CouplingBlock block;
  const Mesh& mesh = *space.mesh;

  for (size_t j = 0; j < inclusions.size(); ++j) {
    for (size_t k = 0; k < j; ++k) {
      const double dist = (inclusions[j].center - inclusions[k].center).norm();
      if (dist <= inclusions[j].radius + inclusions[k].radius)
        throw GeometryError(static_cast<int>(j), "inclusions overlap");
    }
    const auto& inc = inclusions[j];
    const int n_modes = inc.n_modes;
    const int row0 = block.n_rows();
    for (int r = 0; r < 2 * n_modes; ++r) {
      block.rows.emplace_back();
      block.inclusion_of_row.push_back(static_cast<int>(j));
    }

    const auto quad = circle_quadrature(inc, coupling_circle_points(space, inc));
    const double perimeter = 2.0 * M_PI * inc.radius;
    // Accumulate per dof first; quadrature points far outnumber the touched
    // vertices.
    std::vector<std::map<int, double>> acc(2 * n_modes);
    for (const auto& qp : quad) {
      PointLocation loc;
      try {
        loc = space.locator->locate(qp.position);
      } catch (const LocationError&) {
        std::ostringstream msg;
        msg << "inclusion " << j << ": quadrature point (" << qp.position.x << ", "
            << qp.position.y << ") is outside the mesh";
        throw GeometryError(static_cast<int>(j), msg.str());
      }
      const auto& tri = mesh.triangles[loc.triangle];
      const double scale = qp.weight / perimeter;  // = 1/M
      for (int i = 1; i <= n_modes; ++i) {
        const double phi = fourier_mode(i, qp.angle);
        for (int v = 0; v < 3; ++v) {
          const double contrib = scale * phi * loc.barycentric[v];
          if (contrib == 0.0) continue;
          for (int c = 0; c < 2; ++c)
            acc[(i - 1) * 2 + c][FeSpace::dof(tri[v], c)] += contrib;
        }
      }
    }
    for (int r = 0; r < 2 * n_modes; ++r) {
      auto& row = block.rows[row0 + r];
      row.reserve(acc[r].size());
      for (const auto& [dof, value] : acc[r]) row.push_back({dof, value});
    }
  }
  block.rhs = assemble_reduced_rhs(inclusions);
  return block;
}

std::vector<double> assemble_reduced_rhs(const std::vector<Inclusion>& inclusions) {
  std::vector<double> rhs;
  for (const auto& inc : inclusions) {
    const auto quad = circle_quadrature(inc, default_circle_points(inc.n_modes));
    const double perimeter = 2.0 * M_PI * inc.radius;
    std::vector<double> g(2 * inc.n_modes, 0.0);
    for (const auto& qp : quad) {
      const Vec2 normal{std::cos(qp.angle), std::sin(qp.angle)};
      const Vec2 gval = normal * inc.gbar;
      const double scale = qp.weight / perimeter;
      for (int i = 1; i <= inc.n_modes; ++i) {
        const double phi = fourier_mode(i, qp.angle);
        g[(i - 1) * 2 + 0] += scale * phi * gval.x;
        g[(i - 1) * 2 + 1] += scale * phi * gval.y;
      }
    }
    rhs.insert(rhs.end(), g.begin(), g.end());
  }
  return rhs;
}

Vec2 reconstruct_traction(const Inclusion& inclusion, const ReducedMultiplier& lambda,
                          double theta) {
  if (static_cast<int>(lambda.size()) != 2 * inclusion.n_modes)
    throw ArgumentError("reconstruct_traction: multiplier length mismatch");
  Vec2 t{0.0, 0.0};
  for (int i = 1; i <= inclusion.n_modes; ++i) {
    const double phi = fourier_mode(i, theta);
    t.x += phi * lambda[(i - 1) * 2 + 0];
    t.y += phi * lambda[(i - 1) * 2 + 1];
  }
  return t / (2.0 * M_PI * inclusion.radius);
}

namespace {
std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

void write_inclusions_csv(const std::vector<Inclusion>& inclusions, std::ostream& out) {
  out << "cx,cy,radius,gbar\n";
  for (const auto& inc : inclusions)
    out << fmt17(inc.center.x) << "," << fmt17(inc.center.y) << "," << fmt17(inc.radius) << ","
        << fmt17(inc.gbar) << "\n";
}

std::vector<Inclusion> read_inclusions_csv(std::istream& in, int n_modes) {
  std::vector<Inclusion> out;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (line.rfind("cx", 0) == 0) continue;  // header row
    }
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ls, cell, ',')) vals.push_back(std::stod(cell));
    if (vals.size() != 4) throw ArgumentError("inclusion csv: expected 4 columns");
    out.push_back({{vals[0], vals[1]}, vals[2], vals[3], n_modes});
  }
  for (const auto& inc : out)
    if (!(inc.radius > 0.0)) throw ArgumentError("inclusion csv: non-positive radius");
  return out;
}

}  // namespace rlm
