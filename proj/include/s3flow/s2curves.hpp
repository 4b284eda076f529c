#pragma once

// Closed polygonal curves on S^2, their geodesic curvature, the
// curve-shortening flow, and the subinterval curvature bounds used to
// characterize Gauss images of flat tori.

#include "s3flow/s3core.hpp"

#include <span>
#include <utility>
#include <stdexcept>
#include <vector>

namespace s3flow {

class CurveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cyclic list of points on S^2 joined by minimizing geodesic arcs.
class S2Curve {
 public:
  static constexpr std::size_t kMinSamples = 8;
  static constexpr double kMinGap = 1e-8;
  static constexpr double kMaxGap = 0.5;

  /// Validates sample count, unit norms and gaps; throws CurveError.
  explicit S2Curve(std::vector<S2Point> samples);

  const std::vector<S2Point>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  const S2Point& operator[](std::size_t i) const { return samples_[i]; }

 private:
  std::vector<S2Point> samples_;
};

S2Curve make_latitude_circle(double colatitude, std::size_t n,
                             const Vec3& pole = Vec3::UnitZ());
S2Curve make_great_circle(const Vec3& axis, std::size_t n);

struct CurveCurvature {
  std::vector<double> kappa;    // signed geodesic curvature, positive = left turn
  std::vector<double> ds;       // mean of the two adjacent segment lengths
  std::vector<double> turning;  // exterior angle, equal to kappa * ds
};

/// Discrete geodesic curvature from turning angles. The sign is positive
/// when the curve turns towards p x T (left, seen from outside the sphere).
CurveCurvature geodesic_curvature(const S2Curve& curve);

double curve_length(const S2Curve& curve);
double total_turning(const S2Curve& curve);

/// n points spaced uniformly in arclength along the polygon, starting at
/// sample 0.
S2Curve resample_arclength(const S2Curve& curve, std::size_t n);

/// Distance from p to the polygon (minimum over geodesic segments).
double distance_to_curve(const S2Point& p, const S2Curve& curve);

// Curve-shortening flow -----------------------------------------------------

/// One explicit step: every sample moves along its curvature normal by a
/// geodesic step of length kappa * dt.
S2Curve csf_step(const S2Curve& curve, double dt, bool resample = true);

struct CsfConfig {
  double cfl = 0.25;         // dt = cfl * min(ds)^2 when fixed_dt <= 0
  double fixed_dt = 0.0;
  double t_end = 1.0;
  double length_tol = 1e-3;  // stop once the curve is shorter than this
  bool resample = true;
  std::size_t cadence = 0;   // store every n-th curve; 0 keeps only the ends
};

enum class CsfStop { TimeExhausted, Extinct };

struct CsfSample {
  double t = 0.0;
  double length = 0.0;
  double total_turning = 0.0;
  double max_abs_kappa = 0.0;
};

struct CsfTrajectory {
  explicit CsfTrajectory(S2Curve initial) : final_curve(std::move(initial)) {}

  std::vector<CsfSample> rows;      // one per step, including t = 0
  std::vector<double> curve_times;  // times of the stored curves
  std::vector<S2Curve> curves;
  S2Curve final_curve;
  CsfStop reason = CsfStop::TimeExhausted;
};

CsfTrajectory run_csf(const S2Curve& curve, const CsfConfig& config);

// Subinterval curvature bounds ----------------------------------------------

/// max |sum of a cyclic contiguous run| over all runs of length 0..n.
double max_abs_cyclic_run(std::span<const double> values);

struct WeinerReport {
  double total_curvature_1 = 0.0;
  double total_curvature_2 = 0.0;
  double sup_1 = 0.0;
  double sup_2 = 0.0;
  double sup_pair = 0.0;
  bool verdict = false;
  static constexpr double kTotalTolerance = 0.05;
};

WeinerReport weiner_check(const S2Curve& gamma1, const S2Curve& gamma2);

}  // namespace s3flow
