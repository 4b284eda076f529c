#pragma once

// Quaternion algebra and Riemannian primitives of the unit 3-sphere.
//
// Quaternions are stored as Eigen 4-vectors in (w, x, y, z) order with the
// Hamilton product (i*j = k). Imaginary quaternions are identified with R^3
// through (x, y, z).

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace s3flow {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;

inline constexpr double kPi = std::numbers::pi;

/// A unit quaternion, i.e. a point of S^3 in R^4.
class S3Point {
 public:
  S3Point() : coords_(1.0, 0.0, 0.0, 0.0) {}

  /// Normalizes `v`; throws if `v` is (numerically) zero.
  static S3Point normalized(const Vec4& v);

  /// Wraps `v` without renormalizing. Throws if |v| deviates from 1 by more
  /// than `tol`.
  static S3Point checked(const Vec4& v, double tol = 1e-10);

  const Vec4& coords() const { return coords_; }
  double w() const { return coords_[0]; }
  double x() const { return coords_[1]; }
  double y() const { return coords_[2]; }
  double z() const { return coords_[3]; }

 private:
  explicit S3Point(const Vec4& v) : coords_(v) {}
  Vec4 coords_;
};

/// A vector in the tangent space T_base S^3 (dir is orthogonal to base).
struct TangentVector {
  S3Point base;
  Vec4 dir = Vec4::Zero();
};

/// A point of the unit 2-sphere in Im(H) = R^3.
class S2Point {
 public:
  S2Point() : coords_(0.0, 0.0, 1.0) {}
  static S2Point normalized(const Vec3& v);
  const Vec3& coords() const { return coords_; }

 private:
  explicit S2Point(const Vec3& v) : coords_(v) {}
  Vec3 coords_;
};

// Quaternion algebra --------------------------------------------------------

Vec4 quat_mul(const Vec4& a, const Vec4& b);
inline Vec4 quat_mul(const S3Point& a, const S3Point& b) {
  return quat_mul(a.coords(), b.coords());
}
inline Vec4 quat_conj(const Vec4& q) { return Vec4(q[0], -q[1], -q[2], -q[3]); }

/// Embeds an imaginary quaternion.
inline Vec4 pure(const Vec3& v) { return Vec4(0.0, v[0], v[1], v[2]); }
inline Vec3 imag(const Vec4& q) { return Vec3(q[1], q[2], q[3]); }

/// e^{u*angle} for a unit imaginary axis u.
Vec4 quat_exp(const Vec3& unit_axis, double angle);

// Riemannian primitives -----------------------------------------------------

/// Great-circle distance in radians.
double distance(const S3Point& a, const S3Point& b);
double distance(const S2Point& a, const S2Point& b);

/// cos(s) x + sin(s) v, renormalized. `v.dir` must be unit (tolerance 1e-8)
/// and based at `x`.
S3Point geodesic_step(const S3Point& x, const TangentVector& v, double s);

/// Direction of the geodesic through (x, v) after arclength s.
TangentVector transport_along(const S3Point& x, const TangentVector& v,
                              double s);

/// Removes the normal component: w - <w, x> x.
TangentVector tangent_project(const S3Point& x, const Vec4& w);

/// Riemannian logarithm log_x(p) in T_x S^3. Throws for antipodal p.
Vec4 log_map(const Vec4& x, const Vec4& p);

// Hopf fibration ------------------------------------------------------------

/// Im(q̄ i q). Fibers are the circles {(cos t + i sin t) q}.
S2Point hopf_project(const S3Point& q);

/// A point q with hopf_project(q) == p.
S3Point hopf_lift(const S2Point& p);

/// Unit quaternion r with r a r̄ = b for unit imaginary a, b.
Vec4 rotation_between(const Vec3& a, const Vec3& b);

}  // namespace s3flow
