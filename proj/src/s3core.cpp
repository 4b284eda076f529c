#include "s3flow/s3core.hpp"

#include <algorithm>
#include <string>

namespace s3flow {

S3Point S3Point::normalized(const Vec4& v) {
  const double n = v.norm();
  if (!(n > 1e-300) || !std::isfinite(n)) {
    throw std::invalid_argument("S3Point: cannot normalize a zero or non-finite vector");
  }
  return S3Point(v / n);
}

S3Point S3Point::checked(const Vec4& v, double tol) {
  if (!(std::abs(v.norm() - 1.0) <= tol)) {
    throw std::invalid_argument("S3Point: vector is not unit (|v| = " +
                                std::to_string(v.norm()) + ")");
  }
  return S3Point(v);
}

S2Point S2Point::normalized(const Vec3& v) {
  const double n = v.norm();
  if (!(n > 1e-300) || !std::isfinite(n)) {
    throw std::invalid_argument("S2Point: cannot normalize a zero or non-finite vector");
  }
  return S2Point(v / n);
}

Vec4 quat_mul(const Vec4& a, const Vec4& b) {
  return Vec4(a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
              a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
              a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
              a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]);
}

Vec4 quat_exp(const Vec3& unit_axis, double angle) {
  const double s = std::sin(angle);
  return Vec4(std::cos(angle), s * unit_axis[0], s * unit_axis[1], s * unit_axis[2]);
}

double distance(const S3Point& a, const S3Point& b) {
  // atan2 form stays accurate for nearly coincident and nearly antipodal points.
  const double c = a.coords().dot(b.coords());
  const double s = (b.coords() - c * a.coords()).norm();
  return std::atan2(s, c);
}

double distance(const S2Point& a, const S2Point& b) {
  return std::atan2(a.coords().cross(b.coords()).norm(), a.coords().dot(b.coords()));
}

S3Point geodesic_step(const S3Point& x, const TangentVector& v, double s) {
  if (std::abs(v.dir.norm() - 1.0) > 1e-8) {
    throw std::invalid_argument("geodesic_step: direction must be a unit vector");
  }
  if (std::abs(v.dir.dot(x.coords())) > 1e-8) {
    throw std::invalid_argument("geodesic_step: direction is not tangent at x");
  }
  return S3Point::normalized(std::cos(s) * x.coords() + std::sin(s) * v.dir);
}

TangentVector transport_along(const S3Point& x, const TangentVector& v, double s) {
  const S3Point y = geodesic_step(x, v, s);
  return TangentVector{y, -std::sin(s) * x.coords() + std::cos(s) * v.dir};
}

TangentVector tangent_project(const S3Point& x, const Vec4& w) {
  return TangentVector{x, w - w.dot(x.coords()) * x.coords()};
}

Vec4 log_map(const Vec4& x, const Vec4& p) {
  const double c = std::clamp(x.dot(p), -1.0, 1.0);
  const Vec4 perp = p - c * x;
  const double s = perp.norm();
  if (c < -1.0 + 1e-14) {
    throw std::domain_error("log_map: antipodal points");
  }
  const double theta = std::atan2(s, c);
  // theta / sin(theta) -> 1 as theta -> 0
  const double scale = s > 1e-12 ? theta / s : 1.0 + theta * theta / 6.0;
  return scale * perp;
}

S2Point hopf_project(const S3Point& q) {
  const Vec4& c = q.coords();
  const Vec4 iq = quat_mul(Vec4(0.0, 1.0, 0.0, 0.0), c);
  return S2Point::normalized(imag(quat_mul(quat_conj(c), iq)));
}

Vec4 rotation_between(const Vec3& a, const Vec3& b) {
  const double d = a.dot(b);
  if (d < -1.0 + 1e-12) {
    // Half turn about any axis orthogonal to a.
    Vec3 axis = a.cross(Vec3::UnitX());
    if (axis.norm() < 1e-6) axis = a.cross(Vec3::UnitY());
    axis.normalize();
    return Vec4(0.0, axis[0], axis[1], axis[2]);
  }
  const Vec3 c = a.cross(b);
  return Vec4(1.0 + d, c[0], c[1], c[2]).normalized();
}

S3Point hopf_lift(const S2Point& p) {
  // r i r̄ = p, and q = r̄ gives q̄ i q = r i r̄.
  const Vec4 r = rotation_between(Vec3::UnitX(), p.coords());
  return S3Point::normalized(quat_conj(r));
}

}  // namespace s3flow
