#include "s3flow/gaussmaps.hpp"

#include "s3flow/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

namespace s3flow {

GaussImage gauss_maps(const SurfaceMesh& mesh) {
  std::vector<Vec4> normals;
  normals.reserve(mesh.vertex_count());
  for (const TangentVector& n : mesh.normals()) normals.push_back(n.dir);
  return gauss_maps(mesh, normals);
}

GaussImage gauss_maps(const SurfaceMesh& mesh, const std::vector<Vec4>& normals) {
  const std::size_t n = mesh.vertex_count();
  if (normals.size() != n) throw std::invalid_argument("gauss_maps: one normal per vertex required");
  GaussImage img;
  img.left.resize(n);
  img.right.resize(n);
  std::vector<double> worst(n, 0.0);
  parallel_for(n, [&](std::size_t v) {
    const Vec4 xbar = quat_conj(mesh.vertices()[v].coords());
    const Vec4 l = quat_mul(xbar, normals[v]);
    const Vec4 r = quat_mul(normals[v], xbar);
    worst[v] = std::max(std::abs(l[0]), std::abs(r[0]));
    if (worst[v] <= 1e-6) {
      img.left[v] = S2Point::normalized(imag(l));
      img.right[v] = S2Point::normalized(imag(r));
    }
  });
  for (std::size_t v = 0; v < n; ++v) {
    if (worst[v] > 1e-6) {
      throw MeshError("gauss_maps: vertex " + std::to_string(v) + " has a normal with component " +
                      std::to_string(worst[v]) + " along the position");
    }
  }
  return img;
}

double degeneracy_measure(std::span<const S2Point> points) {
  if (points.size() < 10) throw std::invalid_argument("degeneracy_measure: at least 10 points required");
  Vec3 mean = Vec3::Zero();
  for (const S2Point& p : points) mean += p.coords();
  mean /= static_cast<double>(points.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const S2Point& p : points) {
    const Vec3 d = p.coords() - mean;
    cov.noalias() += d * d.transpose();
  }
  cov /= static_cast<double>(points.size());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov, Eigen::EigenvaluesOnly);
  const Vec3 lam = eig.eigenvalues();  // ascending
  const double ratio = std::max(lam[0], 0.0) / std::max(lam[1], 1e-15);
  return std::clamp(ratio, 0.0, 1.0);
}

double hausdorff_to_curve(std::span<const S2Point> points, const S2Curve& curve) {
  std::vector<double> a(points.size());
  parallel_for(points.size(), [&](std::size_t i) { a[i] = distance_to_curve(points[i], curve); });
  std::vector<double> b(curve.size());
  parallel_for(curve.size(), [&](std::size_t i) {
    double best = kPi;
    for (const S2Point& p : points) best = std::min(best, distance(curve[i], p));
    b[i] = best;
  });
  double h = 0.0;
  for (double x : a) h = std::max(h, x);
  for (double x : b) h = std::max(h, x);
  return h;
}

}  // namespace s3flow
