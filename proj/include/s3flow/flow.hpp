#pragma once

// Explicit time integration of dx/dt = -F(kappa1, kappa2) nu for meshed
// surfaces in S^3, with step-size control, stopping rules and the pinching
// monitor.

#include "s3flow/curvature.hpp"
#include "s3flow/mesh.hpp"
#include "s3flow/speeds.hpp"

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace s3flow {

class MeshDegenerateError : public MeshError {
 public:
  using MeshError::MeshError;
};

struct FlowConfig {
  std::string speed = "arctan";
  std::vector<double> speed_params;
  double fixed_dt = 0.0;  // > 0 disables the CFL rule
  double cfl = 0.25;      // safety factor sigma in (0, 1]
  double dt_max = 1e-2;
  double t_end = 1.0;
  double speed_tol = 1e-6;  // Converged once max |F| drops below this
  double width_tol = 5e-2;  // Extinct once the diameter proxy drops below this
  double g_floor = 0.1;     // ConditionBreached once min G < -g_floor
  std::size_t max_steps = 1000000;
  std::size_t row_cadence = 1;       // trajectory row every n steps
  std::size_t snapshot_cadence = 0;  // stored states every n steps; 0 keeps the ends
  double smoothing = 0.0;            // tangential Laplacian strength per step, 0 = off
  CurvatureOptions curvature;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct FlowState {
  FlowState(SurfaceMesh m, CurvatureData c, double time = 0.0, std::size_t step_index = 0)
      : t(time), mesh(std::move(m)), curvature(std::move(c)), step(step_index) {}

  /// State at t = 0 with freshly estimated curvature.
  static FlowState initial(SurfaceMesh mesh, const CurvatureOptions& options = {});

  double t = 0.0;
  SurfaceMesh mesh;
  CurvatureData curvature;
  std::size_t step = 0;
};

inline constexpr double kEpsilonUnbounded = std::numeric_limits<double>::infinity();

struct PinchingReport {
  double min_G = 0.0;
  double max_A2 = 0.0;
  double max_speed = 0.0;  // max |F| over vertices
  double area = 0.0;
  double epsilon_star = kEpsilonUnbounded;  // +inf for umbilic surfaces
  double simons_fraction = 0.0;
  double okumura_fraction = 0.0;
  double huisken2d_fraction = 0.0;
};

enum class StopReason { Converged, Extinct, ConditionBreached, TimeExhausted, MeshDegenerate };

const char* to_string(StopReason reason);

/// Membership in {|k1 - k2| <= (1 + k1 k2)/eps, k1 k2 <= 1} U
/// {|k1 - k2| <= 2/eps, k1 k2 >= 1}.
bool omega_epsilon_member(double k1, double k2, double eps);

/// Largest eps with (k1, k2) in the region above; +inf at umbilic points
/// and 0 where 1 + k1 k2 <= 0 off the umbilic line.
double epsilon_of(double k1, double k2);

PinchingReport pinching_report(const CurvatureData& curvature, const SurfaceMesh& mesh,
                               const SpeedFunction& speed);

/// sigma * h_min^2 / max(lambda_max, 1e-8), capped at dt_max, where lambda is
/// |dF/dk1| + |dF/dk2|.
double cfl_dt(const SurfaceMesh& mesh, const CurvatureData& curvature, const SpeedFunction& speed,
              double sigma, double dt_max = 1e-2);

/// One explicit step: every vertex moves along the great circle through its
/// normal by -F dt, then curvature is re-estimated. Throws
/// MeshDegenerateError if a triangle angle drops below 1 degree or an edge
/// below 1e-6.
FlowState flow_step(const FlowState& state, const SpeedFunction& speed, double dt,
                    double smoothing = 0.0, const CurvatureOptions& options = {});

/// Max geodesic distance among 64 evenly strided vertices.
double diameter_proxy(const SurfaceMesh& mesh);

struct TrajectoryRow {
  double t = 0.0;
  std::size_t step = 0;
  PinchingReport report;
};

struct FlowResult {
  std::vector<TrajectoryRow> rows;
  std::vector<FlowState> snapshots;
  FlowState final_state;
  StopReason reason = StopReason::TimeExhausted;
  std::string message;
};

/// Called once per step (including t = 0) with the current state and report.
using FlowObserver = std::function<void(const FlowState&, const PinchingReport&)>;

/// Deterministic loop of cfl_dt, flow_step and pinching_report until a stop
/// rule fires. Checks run in the order ConditionBreached, Converged,
/// Extinct, TimeExhausted.
FlowResult run_flow(const SurfaceMesh& initial, const FlowConfig& config,
                    const FlowObserver& observer = {});

struct SphereOdeTrajectory {
  std::vector<double> t, r;
  bool extinct = false;
  double extinction_time = 0.0;

  /// Linear interpolation; clamps to the last sample.
  double radius_at(double time) const;
};

/// RK4 for dr/dt = -F(cot r, cot r). Step 1e-5, shortened near the
/// singularity so that no stage overshoots r = 0; extinction at r < 1e-3.
SphereOdeTrajectory sphere_ode_oracle(const SpeedFunction& speed, double r0, double t_end,
                                      double step = 1e-5);

}  // namespace s3flow
