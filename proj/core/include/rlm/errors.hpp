#pragma once

#include <stdexcept>
#include <string>

#include "rlm/geometry.hpp"

namespace rlm {

struct ArgumentError : std::invalid_argument {
  explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

// Point-location failure; carries the query point.
struct LocationError : std::runtime_error {
  Vec2 point;
  explicit LocationError(const Vec2& p, const std::string& what)
      : std::runtime_error(what), point(p) {}
};

// Inclusion geometry problem (outside mesh, overlapping, ...).
struct GeometryError : std::runtime_error {
  int inclusion_index;
  GeometryError(int idx, const std::string& what)
      : std::runtime_error(what), inclusion_index(idx) {}
};

// Primal matrix is not positive definite (typically missing Dirichlet data).
struct DefinitenessError : std::runtime_error {
  explicit DefinitenessError(const std::string& what) : std::runtime_error(what) {}
};

struct ConvergenceError : std::runtime_error {
  int iterations;
  double residual;
  ConvergenceError(int iters, double res, const std::string& what)
      : std::runtime_error(what), iterations(iters), residual(res) {}
};

// Schur CG breakdown; usually overlapping or degenerate inclusions.
struct RankError : std::runtime_error {
  explicit RankError(const std::string& what) : std::runtime_error(what) {}
};

struct PlacementError : std::runtime_error {
  int achieved;
  PlacementError(int achieved_, const std::string& what)
      : std::runtime_error(what), achieved(achieved_) {}
};

}  // namespace rlm
