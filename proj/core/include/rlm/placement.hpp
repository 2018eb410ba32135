#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "rlm/inclusion.hpp"

namespace rlm {

// Deterministic uniform generator: mt19937_64 stream mapped to doubles with
// a fixed 53-bit construction, so results depend only on the seed (not on
// the standard library's distribution implementation).
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::mt19937_64 engine_;
};

struct RectDomain {
  double xmin = -1.0, xmax = 1.0, ymin = -1.0, ymax = 1.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double area() const { return width() * height(); }
};

struct PlacementResult {
  std::vector<Inclusion> inclusions;
  double fluid_volume_ratio = 0.0;
  int attempts_used = 0;
  uint64_t seed = 0;
};

// Uniform kx x ky grid of centers, centered in the domain.
PlacementResult place_structured(const RectDomain& domain, int kx, int ky, double radius,
                                 double gbar, int n_modes);
// Convenience for a perfect-square count.
PlacementResult place_structured(const RectDomain& domain, int m, double radius, double gbar,
                                 int n_modes);

// One inclusion per grid box, uniformly random inside the box shrunk by the
// radius plus margin.
PlacementResult place_semistructured(const RectDomain& domain, int kx, int ky, double radius,
                                     double gbar, int n_modes, uint64_t seed);

// Rejection sampling of m pairwise-disjoint discs.
PlacementResult place_random(const RectDomain& domain, int m, double radius, double gbar,
                             int n_modes, uint64_t seed, int max_attempts = 100000);

// Two-density sample: 12 fixed inclusions in the outer frame plus a k x k
// structured grid in the inner square; k in {3,5,7,9,11}. Geometry is laid
// out on [-1,1]^2 and mapped affinely onto the domain.
PlacementResult place_two_density(const RectDomain& domain, int core_grid, double gbar,
                                  int n_modes, double radius = 0.05);

double fluid_volume_ratio(const std::vector<Inclusion>& inclusions, double domain_area);

}  // namespace rlm
