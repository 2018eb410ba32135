#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rlm/fe.hpp"

namespace rlm {

// Circular fluid inclusion with a prescribed normal boundary expansion gbar
// and a reduced multiplier block of n_modes Fourier modes.
struct Inclusion {
  Vec2 center;
  double radius = 0.0;
  double gbar = 0.0;
  int n_modes = 2;
};

// Throws ArgumentError / GeometryError unless every inclusion has positive
// radius, an even mode count >= 2, lies strictly inside the given bounding
// box (plus relative margin), and the discs are pairwise disjoint.
void validate_inclusions(const std::vector<Inclusion>& inclusions, const Vec2& domain_lo,
                         const Vec2& domain_hi);

// Orthonormal trigonometric basis on the circle, mean-square 1:
// phi_0 = 1, phi_1 = sqrt(2) cos t, phi_2 = sqrt(2) sin t,
// phi_3 = sqrt(2) cos 2t, phi_4 = sqrt(2) sin 2t, ...
double fourier_mode(int i, double theta);

struct CirclePoint {
  Vec2 position;
  double angle = 0.0;
  double weight = 0.0;
};

// Equally spaced trapezoid rule on the inclusion boundary; exact for the
// trigonometric integrands involved. Requires M >= 2 n_modes + 2.
std::vector<CirclePoint> circle_quadrature(const Inclusion& inclusion, int n_points);

int default_circle_points(int n_modes);

// Quadrature size used by assemble_coupling: at least max(16, 8N), raised so
// the circle carries several points per boundary element. A fixed M would
// turn B^T lambda into a handful of point loads and the solution between the
// sample points would not converge under refinement.
int coupling_circle_points(const FeSpace& space, const Inclusion& inclusion);

// Multiplier coefficients for one inclusion, ordered mode-major:
// [mode1.x, mode1.y, mode2.x, mode2.y, ...]; length 2 n_modes.
using ReducedMultiplier = std::vector<double>;

// Reduced coupling rows and right-hand side: 2 n_modes rows per inclusion
// over the displacement dofs. Row (j, i, c) applies the averaged integral
// (1/|Gamma_j|) \oint phi_i (u)_c dGamma; the constant mode is excluded.
struct CouplingBlock {
  struct Entry {
    int dof;
    double value;
  };
  std::vector<std::vector<Entry>> rows;
  std::vector<double> rhs;  // G, same ordering as rows
  std::vector<int> inclusion_of_row;

  int n_rows() const { return static_cast<int>(rows.size()); }
  double apply_row(int r, const Field& u) const;
  // y += B^T lambda restricted to the rows' support.
  void add_transpose_apply(const std::vector<double>& lambda, Field& y) const;
};

CouplingBlock assemble_coupling(const FeSpace& space, const std::vector<Inclusion>& inclusions);

// G entries alone (same quadrature as the matrix part): with the mean-square
// normalization the only nonzeros are gbar/sqrt(2) in mode 1 x and mode 2 y.
std::vector<double> assemble_reduced_rhs(const std::vector<Inclusion>& inclusions);

// Traction jump across the inclusion boundary recovered from the multiplier:
// [sigma] n (theta) = (1 / (2 pi r)) sum_i phi_i(theta) Lambda_i. The scale
// is fixed by the averaged-integral duality used in assemble_coupling.
Vec2 reconstruct_traction(const Inclusion& inclusion, const ReducedMultiplier& lambda,
                          double theta);

// CSV serialization: header cx,cy,radius,gbar, one row per inclusion.
void write_inclusions_csv(const std::vector<Inclusion>& inclusions, std::ostream& out);
std::vector<Inclusion> read_inclusions_csv(std::istream& in, int n_modes);

}  // namespace rlm
