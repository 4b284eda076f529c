#pragma once

// Triangle meshes immersed in S^3 and the canonical test surfaces.

#include "s3flow/s2curves.hpp"
#include "s3flow/s3core.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace s3flow {

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Triangle = std::array<int, 3>;

/// Closed, consistently oriented triangle mesh with vertices on S^3.
///
/// Connectivity is fixed at construction. Vertex normals are area-weighted
/// averages of the face normals, where the face (a, b, c) has normal
/// proportional to the 4D cross product a x b x c; reversing the winding of
/// every face flips every normal.
class SurfaceMesh {
 public:
  /// Validates the closed-manifold conditions and builds adjacency. Throws
  /// MeshError with a diagnostic when the triangle list is not a closed
  /// orientable 2-manifold.
  SurfaceMesh(std::vector<S3Point> vertices, std::vector<Triangle> triangles);

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t triangle_count() const { return triangles_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  int euler_characteristic() const;

  const std::vector<S3Point>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<TangentVector>& normals() const { return normals_; }
  const std::vector<std::array<int, 2>>& edges() const { return edges_; }
  const std::vector<int>& one_ring(std::size_t v) const { return one_ring_[v]; }
  const std::vector<int>& two_ring(std::size_t v) const { return two_ring_[v]; }

  /// Replaces vertex positions (same count) and recomputes normals.
  void set_vertices(std::vector<S3Point> vertices);

  /// Reverses the winding of every triangle.
  void flip_orientation();

 private:
  void build_adjacency();
  void compute_normals();

  std::vector<S3Point> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<TangentVector> normals_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::vector<int>> one_ring_;
  std::vector<std::vector<int>> two_ring_;
  std::vector<std::vector<int>> vertex_faces_;
};

/// Returns a diagnostic if the triangles do not form a closed orientable
/// manifold on `vertex_count` vertices.
std::optional<std::string> manifold_diagnostic(std::size_t vertex_count,
                                               const std::vector<Triangle>& triangles);

/// Normal of the hyperplane spanned by a, b, c with det[a, b, c, n] >= 0.
Vec4 cross4(const Vec4& a, const Vec4& b, const Vec4& c);

/// Area of the spherical triangle (a, b, c) on the great 2-sphere through
/// the three points.
double spherical_triangle_area(const Vec4& a, const Vec4& b, const Vec4& c);

double mesh_area(const SurfaceMesh& mesh);

struct MeshQualityReport {
  double min_edge = 0.0;  // geodesic arc length
  double max_edge = 0.0;
  double min_angle_deg = 0.0;
  std::size_t vertex_count = 0;
  std::size_t edge_count = 0;
  std::size_t triangle_count = 0;
  int euler_characteristic = 0;
};

MeshQualityReport mesh_quality(const SurfaceMesh& mesh);

// Generators ----------------------------------------------------------------

/// Icosahedral subdivision of `level` (10 * 4^level + 2 vertices) placed on
/// the geodesic sphere of radius r about `center`, normals pointing away from
/// the center.
SurfaceMesh make_geodesic_sphere(double r, int level, const S3Point& center = S3Point());

/// Geodesic sphere with radius r + delta(u), where delta is a smooth random
/// cubic polynomial in the unit direction u scaled so that max |delta| equals
/// `amplitude`. Deterministic in `seed`.
SurfaceMesh make_perturbed_sphere(double r, int level, double amplitude, std::uint64_t seed,
                                  const S3Point& center = S3Point());

/// Grid mesh of {(cos u, sin u, cos v, sin v) / sqrt 2}.
SurfaceMesh make_clifford_torus(int nu, int nv);

/// Torus {(a e^{iu}, b e^{iv})} with a = cos(angle), b = sin(angle).
SurfaceMesh make_product_torus(double angle, int nu, int nv);

struct HopfTorus {
  SurfaceMesh mesh;
  double holonomy = 0.0;  // fiber phase picked up by the horizontal lift
  int n_curve = 0;        // vertex (k, m) has index k * n_fiber + m
  int n_fiber = 0;
};

/// Preimage of `curve` under hopf_project, one fiber circle per curve
/// sample. The lift is horizontal along the curve with the holonomy spread
/// evenly so that the seam closes.
HopfTorus make_hopf_torus_with_info(const S2Curve& curve, int n_fiber);
SurfaceMesh make_hopf_torus(const S2Curve& curve, int n_fiber);

}  // namespace s3flow
