#pragma once

// Discrete shape operator of a mesh in S^3 by local height-function fitting
// in normal coordinates.

#include "s3flow/mesh.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace s3flow {

/// Per-vertex curvature quantities. kappa1 >= kappa2 are measured against the
/// mesh normal: a geodesic sphere of radius r with outward normals has
/// kappa1 = kappa2 = cot r.
struct CurvatureData {
  std::vector<Eigen::Matrix2d> shape;  // in the frame (e1, e2)
  std::vector<Vec4> e1, e2;            // orthonormal tangent frame of the surface
  std::vector<Vec4> dir1, dir2;        // principal directions in R^4
  std::vector<Vec4> normal;            // normal corrected by the fitted slope
  std::vector<double> kappa1, kappa2;
  std::vector<double> H, normA2, G;
  std::vector<char> flagged;           // fit was degenerate; values inherited
  std::size_t flagged_count = 0;
  std::vector<std::string> diagnostics;

  std::size_t size() const { return kappa1.size(); }
};

struct CurvatureOptions {
  int rings = 2;
  std::size_t min_neighbors = 5;
  double max_condition = 1e8;
  /// Include an isotropic quartic term (a^2 + b^2)^2 when the stencil has
  /// at least this many points. It absorbs the leading radial bias of the
  /// quadratic fit on round patches.
  std::size_t quartic_min_points = 9;
};

CurvatureData estimate_curvature(const SurfaceMesh& mesh, const CurvatureOptions& options = {});

}  // namespace s3flow
