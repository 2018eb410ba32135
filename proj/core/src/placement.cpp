#include "rlm/placement.hpp"

#include <cmath>

#include "rlm/errors.hpp"

namespace rlm {

namespace {

// Margin rule: 0.01 r from the walls and between discs.
bool fits(const RectDomain& d, const Vec2& c, double r) {
  const double margin = r * 1.01;
  return c.x - margin > d.xmin && c.x + margin < d.xmax && c.y - margin > d.ymin &&
         c.y + margin < d.ymax;
}

bool disjoint(const std::vector<Inclusion>& placed, const Vec2& c, double r) {
  for (const auto& inc : placed)
    if ((inc.center - c).norm() < inc.radius + r + 0.01 * r) return false;
  return true;
}

PlacementResult finish(std::vector<Inclusion> inclusions, const RectDomain& domain, int attempts,
                       uint64_t seed) {
  PlacementResult result;
  result.fluid_volume_ratio = fluid_volume_ratio(inclusions, domain.area());
  result.inclusions = std::move(inclusions);
  result.attempts_used = attempts;
  result.seed = seed;
  return result;
}

}  // namespace

double fluid_volume_ratio(const std::vector<Inclusion>& inclusions, double domain_area) {
  double a = 0.0;
  for (const auto& inc : inclusions) a += M_PI * inc.radius * inc.radius;
  return a / domain_area;
}

PlacementResult place_structured(const RectDomain& domain, int kx, int ky, double radius,
                                 double gbar, int n_modes) {
  if (kx < 1 || ky < 1) throw ArgumentError("place_structured: grid must be at least 1x1");
  const double sx = domain.width() / kx;
  const double sy = domain.height() / ky;
  if (std::min(sx, sy) <= 2.0 * radius * 1.01)
    throw PlacementError(0, "place_structured: grid spacing does not fit the discs");

  std::vector<Inclusion> inclusions;
  for (int j = 0; j < ky; ++j)
    for (int i = 0; i < kx; ++i)
      inclusions.push_back({{domain.xmin + (i + 0.5) * sx, domain.ymin + (j + 0.5) * sy},
                            radius,
                            gbar,
                            n_modes});
  for (const auto& inc : inclusions)
    if (!fits(domain, inc.center, inc.radius))
      throw PlacementError(0, "place_structured: disc does not fit the domain");
  return finish(std::move(inclusions), domain, 0, 0);
}

PlacementResult place_structured(const RectDomain& domain, int m, double radius, double gbar,
                                 int n_modes) {
  const int k = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m))));
  if (k * k != m) throw ArgumentError("place_structured: count must be a perfect square");
  return place_structured(domain, k, k, radius, gbar, n_modes);
}

PlacementResult place_semistructured(const RectDomain& domain, int kx, int ky, double radius,
                                     double gbar, int n_modes, uint64_t seed) {
  if (kx < 1 || ky < 1) throw ArgumentError("place_semistructured: grid must be at least 1x1");
  const double sx = domain.width() / kx;
  const double sy = domain.height() / ky;
  const double margin = radius * 1.01;
  if (sx <= 2.0 * margin || sy <= 2.0 * margin)
    throw PlacementError(0, "place_semistructured: free region of a box is empty");

  Rng rng(seed);
  std::vector<Inclusion> inclusions;
  for (int j = 0; j < ky; ++j)
    for (int i = 0; i < kx; ++i) {
      const double x0 = domain.xmin + i * sx;
      const double y0 = domain.ymin + j * sy;
      // The box shrunk by radius + margin keeps discs inside their own box,
      // hence pairwise disjoint.
      const Vec2 c{rng.uniform(x0 + margin, x0 + sx - margin),
                   rng.uniform(y0 + margin, y0 + sy - margin)};
      inclusions.push_back({c, radius, gbar, n_modes});
    }
  return finish(std::move(inclusions), domain, kx * ky, seed);
}

PlacementResult place_random(const RectDomain& domain, int m, double radius, double gbar,
                             int n_modes, uint64_t seed, int max_attempts) {
  Rng rng(seed);
  const double margin = radius * 1.01;
  if (domain.width() <= 2.0 * margin || domain.height() <= 2.0 * margin)
    throw PlacementError(0, "place_random: disc does not fit the domain");

  std::vector<Inclusion> inclusions;
  int attempts = 0;
  while (static_cast<int>(inclusions.size()) < m) {
    if (attempts >= max_attempts)
      throw PlacementError(static_cast<int>(inclusions.size()),
                           "place_random: attempts exhausted");
    ++attempts;
    const Vec2 c{rng.uniform(domain.xmin + margin, domain.xmax - margin),
                 rng.uniform(domain.ymin + margin, domain.ymax - margin)};
    if (!disjoint(inclusions, c, radius)) continue;
    inclusions.push_back({c, radius, gbar, n_modes});
  }
  return finish(std::move(inclusions), domain, attempts, seed);
}

PlacementResult place_two_density(const RectDomain& domain, int core_grid, double gbar,
                                  int n_modes, double radius) {
  if (core_grid != 3 && core_grid != 5 && core_grid != 7 && core_grid != 9 && core_grid != 11)
    throw ArgumentError("place_two_density: core grid must be one of 3,5,7,9,11");

  // Reference layout on [-1,1]^2: outer frame = the 4x4 grid {+-0.25, +-0.75}^2
  // minus its inner 2x2, inner grid = k x k over [-0.6, 0.6]^2.
  std::vector<Vec2> centers;
  for (double y : {-0.75, -0.25, 0.25, 0.75})
    for (double x : {-0.75, -0.25, 0.25, 0.75})
      if (std::abs(x) > 0.5 || std::abs(y) > 0.5) centers.push_back({x, y});
  const int k = core_grid;
  const double side = 1.2;
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < k; ++i)
      centers.push_back({-side / 2 + (i + 0.5) * side / k, -side / 2 + (j + 0.5) * side / k});

  std::vector<Inclusion> inclusions;
  for (const auto& c : centers) {
    const Vec2 mapped{domain.xmin + (c.x + 1.0) * 0.5 * domain.width(),
                      domain.ymin + (c.y + 1.0) * 0.5 * domain.height()};
    inclusions.push_back({mapped, radius, gbar, n_modes});
  }
  for (size_t i = 0; i < inclusions.size(); ++i) {
    if (!fits(domain, inclusions[i].center, radius))
      throw PlacementError(static_cast<int>(i), "place_two_density: disc outside the domain");
    for (size_t j = 0; j < i; ++j)
      if ((inclusions[i].center - inclusions[j].center).norm() < 2.0 * radius)
        throw PlacementError(static_cast<int>(i), "place_two_density: discs overlap");
  }
  return finish(std::move(inclusions), domain, 0, 0);
}

}  // namespace rlm
