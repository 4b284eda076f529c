#include "s3flow/flow.hpp"

#include "s3flow/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace s3flow {

void FlowConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("flow config: ") + what);
  };
  require(cfl > 0.0 && cfl <= 1.0, "cfl must lie in (0, 1]");
  require(fixed_dt >= 0.0, "fixed_dt must be >= 0");
  require(dt_max > 0.0, "dt_max must be > 0");
  require(t_end > 0.0, "t_end must be > 0");
  require(speed_tol > 0.0, "speed_tol must be > 0");
  require(width_tol > 0.0, "width_tol must be > 0");
  require(g_floor > 0.0, "g_floor must be > 0");
  require(row_cadence > 0, "row_cadence must be > 0");
  require(smoothing >= 0.0 && smoothing < 0.5, "smoothing must lie in [0, 0.5)");
}

FlowState FlowState::initial(SurfaceMesh mesh, const CurvatureOptions& options) {
  CurvatureData c = estimate_curvature(mesh, options);
  return FlowState(std::move(mesh), std::move(c));
}

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::Converged: return "Converged";
    case StopReason::Extinct: return "Extinct";
    case StopReason::ConditionBreached: return "ConditionBreached";
    case StopReason::TimeExhausted: return "TimeExhausted";
    case StopReason::MeshDegenerate: return "MeshDegenerate";
  }
  return "Unknown";
}

bool omega_epsilon_member(double k1, double k2, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("omega_epsilon_member: eps must be > 0");
  const double d = std::abs(k1 - k2);
  const double p = k1 * k2;
  return (p <= 1.0 && d <= (1.0 + p) / eps) || (p >= 1.0 && d <= 2.0 / eps);
}

double epsilon_of(double k1, double k2) {
  const double d = std::abs(k1 - k2);
  const double p = k1 * k2;
  if (d == 0.0) return (p >= 1.0 || 1.0 + p >= 0.0) ? kEpsilonUnbounded : 0.0;
  double eps = 0.0;
  if (p <= 1.0) eps = std::max(eps, (1.0 + p) / d);
  if (p >= 1.0) eps = std::max(eps, 2.0 / d);
  return eps;
}

PinchingReport pinching_report(const CurvatureData& curvature, const SurfaceMesh& mesh,
                               const SpeedFunction& speed) {
  PinchingReport r;
  const std::size_t n = curvature.size();
  r.area = mesh_area(mesh);
  if (n == 0) return r;
  r.min_G = curvature.G[0];
  std::size_t simons = 0, okumura = 0, huisken = 0;
  for (std::size_t v = 0; v < n; ++v) {
    const double k1 = curvature.kappa1[v];
    const double k2 = curvature.kappa2[v];
    r.min_G = std::min(r.min_G, curvature.G[v]);
    r.max_A2 = std::max(r.max_A2, curvature.normA2[v]);
    r.max_speed = std::max(r.max_speed, std::abs(speed(k1, k2)));
    r.epsilon_star = std::min(r.epsilon_star, epsilon_of(k1, k2));
    const ConditionFlags f = speed_huisken_monitor(k1, k2);
    simons += f.simons;
    okumura += f.okumura;
    huisken += f.huisken2d;
  }
  const double inv = 1.0 / static_cast<double>(n);
  r.simons_fraction = simons * inv;
  r.okumura_fraction = okumura * inv;
  r.huisken2d_fraction = huisken * inv;
  return r;
}

double cfl_dt(const SurfaceMesh& mesh, const CurvatureData& curvature, const SpeedFunction& speed,
              double sigma, double dt_max) {
  if (!(sigma > 0.0 && sigma <= 1.0)) throw std::invalid_argument("cfl_dt: sigma must lie in (0, 1]");
  const auto& x = mesh.vertices();
  double h_min = kPi;
  for (const auto& e : mesh.edges()) h_min = std::min(h_min, distance(x[e[0]], x[e[1]]));
  double lambda = 0.0;
  for (std::size_t v = 0; v < curvature.size(); ++v) {
    const SpeedPartials p = speed.partials(curvature.kappa1[v], curvature.kappa2[v]);
    lambda = std::max(lambda, std::abs(p.d1) + std::abs(p.d2));
  }
  return std::min(dt_max, sigma * h_min * h_min / std::max(lambda, 1e-8));
}

FlowState flow_step(const FlowState& state, const SpeedFunction& speed, double dt,
                    double smoothing, const CurvatureOptions& options) {
  if (!(dt > 0.0)) throw std::invalid_argument("flow_step: dt must be > 0");
  const SurfaceMesh& mesh = state.mesh;
  const CurvatureData& c = state.curvature;
  const auto& x = mesh.vertices();
  std::vector<S3Point> moved(x.size());

  parallel_for(x.size(), [&](std::size_t v) {
    const Vec4& p = x[v].coords();
    const Vec4& nu = c.normal[v];
    Vec4 d = -speed(c.kappa1[v], c.kappa2[v]) * dt * nu;
    if (smoothing > 0.0) {
      // Tangential part of the umbrella vector only: moves vertices within
      // the surface, leaving the normal motion to the speed.
      Vec4 m = Vec4::Zero();
      const auto& ring = mesh.one_ring(v);
      for (int w : ring) m += log_map(p, x[w].coords());
      m /= static_cast<double>(ring.size());
      m -= m.dot(nu) * nu;
      d += smoothing * m;
    }
    d -= d.dot(p) * p;
    const double len = d.norm();
    moved[v] = len > 0.0 ? geodesic_step(x[v], TangentVector{x[v], d / len}, len) : x[v];
  });

  SurfaceMesh next = mesh;
  next.set_vertices(std::move(moved));
  const MeshQualityReport q = mesh_quality(next);
  if (q.min_angle_deg < 1.0 || q.min_edge < 1e-6) {
    throw MeshDegenerateError("flow_step at t = " + std::to_string(state.t + dt) +
                              ": min angle " + std::to_string(q.min_angle_deg) +
                              " deg, min edge " + std::to_string(q.min_edge));
  }
  CurvatureData nc = estimate_curvature(next, options);
  return FlowState(std::move(next), std::move(nc), state.t + dt, state.step + 1);
}

double diameter_proxy(const SurfaceMesh& mesh) {
  const std::size_t n = mesh.vertex_count();
  const std::size_t k = std::min<std::size_t>(64, n);
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i * n / k;
  double best = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      best = std::max(best, distance(mesh.vertices()[idx[i]], mesh.vertices()[idx[j]]));
    }
  }
  return best;
}

FlowResult run_flow(const SurfaceMesh& initial, const FlowConfig& config,
                    const FlowObserver& observer) {
  config.validate();
  const SpeedFunction speed = SpeedFunction::from_name(config.speed, config.speed_params);
  FlowResult result{{}, {}, FlowState::initial(initial, config.curvature), StopReason::TimeExhausted, {}};
  FlowState& state = result.final_state;
  result.snapshots.push_back(state);

  for (;;) {
    const PinchingReport report = pinching_report(state.curvature, state.mesh, speed);
    if (observer) observer(state, report);

    StopReason reason = StopReason::TimeExhausted;
    bool stop = true;
    if (report.min_G < -config.g_floor) {
      reason = StopReason::ConditionBreached;
      result.message = "min G = " + std::to_string(report.min_G) + " below -g_floor";
    } else if (report.max_speed < config.speed_tol) {
      reason = StopReason::Converged;
    } else if (diameter_proxy(state.mesh) < config.width_tol) {
      reason = StopReason::Extinct;
    } else if (state.t >= config.t_end * (1.0 - 1e-12) || state.step >= config.max_steps) {
      reason = StopReason::TimeExhausted;
    } else {
      stop = false;
    }

    if (stop || state.step % config.row_cadence == 0) {
      result.rows.push_back({state.t, state.step, report});
    }
    if (stop) {
      result.reason = reason;
      break;
    }
    if (config.snapshot_cadence > 0 && state.step > 0 && state.step % config.snapshot_cadence == 0) {
      result.snapshots.push_back(state);
    }

    double dt = config.fixed_dt > 0.0
                    ? config.fixed_dt
                    : cfl_dt(state.mesh, state.curvature, speed, config.cfl, config.dt_max);
    dt = std::min(dt, config.t_end - state.t);
    try {
      state = flow_step(state, speed, dt, config.smoothing, config.curvature);
    } catch (const MeshDegenerateError& e) {
      result.reason = StopReason::MeshDegenerate;
      result.message = e.what();
      break;
    }
  }
  if (result.snapshots.size() == 1 || result.snapshots.back().step != state.step) {
    result.snapshots.push_back(state);
  }
  return result;
}

double SphereOdeTrajectory::radius_at(double time) const {
  if (t.empty()) return 0.0;
  if (time <= t.front()) return r.front();
  if (time >= t.back()) return r.back();
  const auto it = std::upper_bound(t.begin(), t.end(), time);
  const std::size_t i = static_cast<std::size_t>(it - t.begin());
  const double a = (time - t[i - 1]) / (t[i] - t[i - 1]);
  return (1.0 - a) * r[i - 1] + a * r[i];
}

SphereOdeTrajectory sphere_ode_oracle(const SpeedFunction& speed, double r0, double t_end,
                                      double step) {
  if (!(r0 > 0.0 && r0 < kPi)) throw std::invalid_argument("sphere_ode_oracle: r0 must lie in (0, pi)");
  auto rhs = [&](double r) {
    const double k = std::cos(r) / std::sin(r);
    return -speed(k, k);
  };
  SphereOdeTrajectory out;
  double t = 0.0, r = r0;
  out.t.push_back(t);
  out.r.push_back(r);
  constexpr double kExtinct = 1e-3;
  while (t < t_end) {
    double h = std::min(step, t_end - t);
    const double rate = std::abs(rhs(r));
    if (rate * h > 0.05 * r) h = 0.05 * r / rate;
    const double k1 = rhs(r);
    const double k2 = rhs(r + 0.5 * h * k1);
    const double k3 = rhs(r + 0.5 * h * k2);
    const double k4 = rhs(r + h * k3);
    r += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
    out.t.push_back(t);
    out.r.push_back(r);
    if (r < kExtinct) {
      out.extinct = true;
      out.extinction_time = t;
      break;
    }
  }
  return out;
}

}  // namespace s3flow
