#include "s3flow/s2curves.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

namespace s3flow {
namespace {

// log map on S^2
Vec3 log_s2(const Vec3& p, const Vec3& q) {
  const double c = std::clamp(p.dot(q), -1.0, 1.0);
  const Vec3 perp = q - c * p;
  const double s = perp.norm();
  const double theta = std::atan2(s, c);
  return s > 1e-15 ? Vec3(perp * (theta / s)) : Vec3::Zero();
}

Vec3 slerp(const Vec3& a, const Vec3& b, double t) {
  const double omega = std::atan2(a.cross(b).norm(), a.dot(b));
  if (omega < 1e-12) return ((1.0 - t) * a + t * b).normalized();
  const double so = std::sin(omega);
  return (std::sin((1.0 - t) * omega) / so * a + std::sin(t * omega) / so * b).normalized();
}

double segment_length(const S2Curve& c, std::size_t i) {
  return distance(c[i], c[(i + 1) % c.size()]);
}

std::vector<S2Point> resample_points(const std::vector<S2Point>& pts, std::size_t n) {
  const std::size_t m = pts.size();
  std::vector<double> cum(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) cum[i + 1] = cum[i] + distance(pts[i], pts[(i + 1) % m]);
  std::vector<S2Point> out;
  out.reserve(n);
  std::size_t seg = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double s = cum[m] * static_cast<double>(j) / static_cast<double>(n);
    while (seg + 1 < m && cum[seg + 1] <= s) ++seg;
    const double len = cum[seg + 1] - cum[seg];
    const double t = len > 0.0 ? (s - cum[seg]) / len : 0.0;
    out.push_back(S2Point::normalized(
        slerp(pts[seg].coords(), pts[(seg + 1) % m].coords(), std::clamp(t, 0.0, 1.0))));
  }
  return out;
}

}  // namespace

S2Curve::S2Curve(std::vector<S2Point> samples) : samples_(std::move(samples)) {
  if (samples_.size() < kMinSamples) {
    throw CurveError("S2Curve: need at least " + std::to_string(kMinSamples) +
                     " samples, got " + std::to_string(samples_.size()));
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (std::abs(samples_[i].coords().norm() - 1.0) > 1e-12) {
      throw CurveError("S2Curve: sample " + std::to_string(i) + " is not unit");
    }
    const double gap = distance(samples_[i], samples_[(i + 1) % samples_.size()]);
    if (gap < kMinGap) {
      throw CurveError("S2Curve: segment " + std::to_string(i) + " collapsed (length " +
                       std::to_string(gap) + ")");
    }
    if (gap > kMaxGap) {
      throw CurveError("S2Curve: segment " + std::to_string(i) + " too long (" +
                       std::to_string(gap) + " rad > 0.5)");
    }
  }
}

S2Curve make_latitude_circle(double colatitude, std::size_t n, const Vec3& pole) {
  if (!(colatitude > 0.0 && colatitude < kPi)) {
    throw std::invalid_argument("make_latitude_circle: colatitude must lie in (0, pi)");
  }
  if (n < S2Curve::kMinSamples) {
    throw std::invalid_argument("make_latitude_circle: need at least 8 samples");
  }
  const Vec3 z = pole.normalized();
  Vec3 x = z.cross(Vec3::UnitX());
  if (x.norm() < 1e-6) x = z.cross(Vec3::UnitY());
  x.normalize();
  // (x, y, z) right-handed, so increasing angle turns left around the pole.
  const Vec3 y = z.cross(x);
  std::vector<S2Point> pts;
  pts.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
    pts.push_back(S2Point::normalized(std::cos(colatitude) * z +
                                      std::sin(colatitude) * (std::cos(a) * x + std::sin(a) * y)));
  }
  return S2Curve(std::move(pts));
}

S2Curve make_great_circle(const Vec3& axis, std::size_t n) {
  return make_latitude_circle(kPi / 2.0, n, axis);
}

CurveCurvature geodesic_curvature(const S2Curve& curve) {
  const std::size_t n = curve.size();
  CurveCurvature out;
  out.kappa.resize(n);
  out.ds.resize(n);
  out.turning.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Vec3& prev = curve[(k + n - 1) % n].coords();
    const Vec3& p = curve[k].coords();
    const Vec3& next = curve[(k + 1) % n].coords();
    const Vec3 t_in = -log_s2(p, prev);
    const Vec3 t_out = log_s2(p, next);
    const double l_in = t_in.norm();
    const double l_out = t_out.norm();
    if (l_in < S2Curve::kMinGap || l_out < S2Curve::kMinGap) {
      throw CurveError("geodesic_curvature: degenerate segment at sample " + std::to_string(k));
    }
    const double psi = std::atan2(p.dot(t_in.cross(t_out)), t_in.dot(t_out));
    out.turning[k] = psi;
    out.ds[k] = 0.5 * (l_in + l_out);
    out.kappa[k] = psi / out.ds[k];
  }
  return out;
}

double curve_length(const S2Curve& curve) {
  double len = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) len += segment_length(curve, i);
  return len;
}

double total_turning(const S2Curve& curve) {
  const auto k = geodesic_curvature(curve);
  double sum = 0.0;
  for (double t : k.turning) sum += t;
  return sum;
}

S2Curve resample_arclength(const S2Curve& curve, std::size_t n) {
  return S2Curve(resample_points(curve.samples(), n));
}

double distance_to_curve(const S2Point& p, const S2Curve& curve) {
  const Vec3& x = p.coords();
  double best = kPi;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const Vec3& a = curve[i].coords();
    const Vec3& b = curve[(i + 1) % curve.size()].coords();
    best = std::min(best, distance(p, curve[i]));
    // Foot of the perpendicular on the great circle through a and b, if it
    // falls inside the arc.
    const Vec3 nrm = a.cross(b);
    if (nrm.norm() < 1e-15) continue;
    const Vec3 u = nrm.normalized();
    const Vec3 proj = x - x.dot(u) * u;
    if (proj.norm() < 1e-15) continue;
    const Vec3 f = proj.normalized();
    if (a.cross(f).dot(u) >= 0.0 && f.cross(b).dot(u) >= 0.0) {
      best = std::min(best, std::asin(std::clamp(std::abs(x.dot(u)), 0.0, 1.0)));
    }
  }
  return best;
}

S2Curve csf_step(const S2Curve& curve, double dt, bool resample) {
  if (!(dt > 0.0)) throw std::invalid_argument("csf_step: dt must be positive");
  const std::size_t n = curve.size();
  const CurveCurvature k = geodesic_curvature(curve);
  std::vector<S2Point> moved;
  moved.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& p = curve[i].coords();
    const Vec3 t_in = -log_s2(p, curve[(i + n - 1) % n].coords()).normalized();
    const Vec3 t_out = log_s2(p, curve[(i + 1) % n].coords()).normalized();
    Vec3 tangent = t_in + t_out;
    if (tangent.norm() < 1e-12) throw CurveError("csf_step: cusp at sample " + std::to_string(i));
    tangent.normalize();
    const Vec3 normal = p.cross(tangent);
    const double s = k.kappa[i] * dt;
    moved.push_back(S2Point::normalized(std::cos(s) * p + std::sin(s) * normal));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (distance(moved[i], moved[(i + 1) % n]) < S2Curve::kMinGap) {
      throw CurveError("csf_step: segment " + std::to_string(i) + " collapsed");
    }
  }
  if (!resample) return S2Curve(std::move(moved));
  return S2Curve(resample_points(moved, n));
}

CsfTrajectory run_csf(const S2Curve& curve, const CsfConfig& config) {
  if (!(config.t_end >= 0.0)) throw std::invalid_argument("run_csf: t_end must be >= 0");
  if (config.fixed_dt <= 0.0 && !(config.cfl > 0.0 && config.cfl <= 1.0)) {
    throw std::invalid_argument("run_csf: cfl must lie in (0, 1]");
  }
  CsfTrajectory traj(curve);
  double t = 0.0;
  std::size_t step = 0;
  auto record = [&](const S2Curve& c) {
    const CurveCurvature k = geodesic_curvature(c);
    CsfSample row;
    row.t = t;
    row.length = curve_length(c);
    for (std::size_t i = 0; i < c.size(); ++i) {
      row.total_turning += k.turning[i];
      row.max_abs_kappa = std::max(row.max_abs_kappa, std::abs(k.kappa[i]));
    }
    traj.rows.push_back(row);
    if (config.cadence > 0 && step % config.cadence == 0) {
      traj.curve_times.push_back(t);
      traj.curves.push_back(c);
    }
    return row;
  };
  S2Curve current = curve;
  CsfSample row = record(current);
  const double eps_t = 1e-12 * std::max(1.0, config.t_end);
  while (t < config.t_end - eps_t) {
    if (row.length < config.length_tol) {
      traj.reason = CsfStop::Extinct;
      break;
    }
    double dt = config.fixed_dt;
    if (dt <= 0.0) {
      double min_ds = kPi;
      for (std::size_t i = 0; i < current.size(); ++i) {
        min_ds = std::min(min_ds, segment_length(current, i));
      }
      dt = config.cfl * min_ds * min_ds;
    }
    dt = std::min(dt, config.t_end - t);
    try {
      current = csf_step(current, dt, config.resample);
    } catch (const CurveError&) {
      traj.reason = CsfStop::Extinct;
      break;
    }
    t += dt;
    ++step;
    row = record(current);
  }
  if (traj.reason == CsfStop::TimeExhausted && row.length < config.length_tol) {
    traj.reason = CsfStop::Extinct;
  }
  if (config.cadence > 0 && (traj.curve_times.empty() || traj.curve_times.back() != t)) {
    traj.curve_times.push_back(t);
    traj.curves.push_back(current);
  }
  traj.final_curve = current;
  return traj;
}

double max_abs_cyclic_run(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  // Prefix sums over the sequence repeated twice; a cyclic run is P[j] - P[i]
  // with 0 < j - i <= n.
  std::vector<double> prefix(2 * n + 1, 0.0);
  for (std::size_t k = 0; k < 2 * n; ++k) prefix[k + 1] = prefix[k] + values[k % n];
  std::deque<std::size_t> mins;
  std::deque<std::size_t> maxs;
  double best = 0.0;
  for (std::size_t j = 1; j <= 2 * n; ++j) {
    const std::size_t i = j - 1;
    while (!mins.empty() && prefix[mins.back()] >= prefix[i]) mins.pop_back();
    mins.push_back(i);
    while (!maxs.empty() && prefix[maxs.back()] <= prefix[i]) maxs.pop_back();
    maxs.push_back(i);
    const std::size_t lo = j > n ? j - n : 0;
    while (mins.front() < lo) mins.pop_front();
    while (maxs.front() < lo) maxs.pop_front();
    best = std::max(best, prefix[j] - prefix[mins.front()]);
    best = std::max(best, prefix[maxs.front()] - prefix[j]);
  }
  return best;
}

WeinerReport weiner_check(const S2Curve& gamma1, const S2Curve& gamma2) {
  const CurveCurvature k1 = geodesic_curvature(gamma1);
  const CurveCurvature k2 = geodesic_curvature(gamma2);
  WeinerReport r;
  for (double v : k1.turning) r.total_curvature_1 += v;
  for (double v : k2.turning) r.total_curvature_2 += v;
  r.sup_1 = max_abs_cyclic_run(k1.turning);
  r.sup_2 = max_abs_cyclic_run(k2.turning);
  r.sup_pair = r.sup_1 + r.sup_2;
  r.verdict = std::abs(r.total_curvature_1) <= WeinerReport::kTotalTolerance &&
              std::abs(r.total_curvature_2) <= WeinerReport::kTotalTolerance &&
              r.sup_pair < kPi;
  return r;
}

}  // namespace s3flow
