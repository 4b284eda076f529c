#pragma once

// Left- and right-translation Gauss maps of surfaces in S^3 and a
// covariance-based measure of how far a Gauss image is from a curve.

#include "s3flow/mesh.hpp"
#include "s3flow/s2curves.hpp"

#include <span>
#include <vector>

namespace s3flow {

struct GaussImage {
  std::vector<S2Point> left;   // Im(x̄ nu)
  std::vector<S2Point> right;  // Im(nu x̄)
};

/// Uses the mesh vertex normals. Throws MeshError naming the vertex if a
/// product has real part above 1e-6.
GaussImage gauss_maps(const SurfaceMesh& mesh);

/// Same with caller-supplied unit normals (e.g. the curvature-corrected ones).
GaussImage gauss_maps(const SurfaceMesh& mesh, const std::vector<Vec4>& normals);

/// lambda3 / max(lambda2, 1e-15) for the sorted eigenvalues of the covariance
/// about the centroid, clipped to [0, 1]. 0 for curves and points. Throws
/// std::invalid_argument for fewer than 10 points.
double degeneracy_measure(std::span<const S2Point> points);

/// Symmetric Hausdorff distance between a point cloud and a closed polygon:
/// points to the polygon, and polygon samples to the nearest point.
double hausdorff_to_curve(std::span<const S2Point> points, const S2Curve& curve);

}  // namespace s3flow
