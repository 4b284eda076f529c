#include "s3flow/scenario.hpp"

#include "s3flow/config.hpp"
#include "s3flow/gaussmaps.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace s3flow {
namespace {

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ScenarioKind parse_kind(const SectionReader& r) {
  const std::string k = r.get_string("kind", "surface");
  if (k == "surface") return ScenarioKind::Surface;
  if (k == "curve") return ScenarioKind::Curve;
  if (k == "gaussmap_csf") return ScenarioKind::GaussmapCsf;
  if (k == "weiner_check") return ScenarioKind::WeinerCheck;
  r.fail("kind", "expected surface, curve, gaussmap_csf or weiner_check, got '" + k + "'");
}

std::string resolve(const std::filesystem::path& base, const std::string& file) {
  const std::filesystem::path p(file);
  return p.is_absolute() ? p.string() : (base / p).string();
}

CurveSpec read_curve(const SectionReader& r, const std::filesystem::path& base) {
  CurveSpec c;
  c.type = r.get_string("curve", c.type);
  if (c.type == "file") {
    if (!r.has("curve_file")) r.fail("curve", "curve = file requires curve_file");
    c.file = resolve(base, r.get_string("curve_file", ""));
    return c;
  }
  if (c.type != "latitude" && c.type != "great_circle") {
    r.fail("curve", "expected latitude, great_circle or file, got '" + c.type + "'");
  }
  const long long n = r.get_int("samples", static_cast<long long>(c.samples));
  if (n < static_cast<long long>(S2Curve::kMinSamples)) r.fail("samples", "at least 8 samples required");
  c.samples = static_cast<std::size_t>(n);
  if (c.type == "latitude") {
    c.colatitude = r.get_double("colatitude", c.colatitude);
    if (!(c.colatitude > 0.0 && c.colatitude < kPi)) r.fail("colatitude", "must lie in (0, pi)");
    c.wobble_amplitude = r.get_double("wobble_amplitude", 0.0);
    c.wobble_frequency = static_cast<int>(r.get_int("wobble_frequency", c.wobble_frequency));
    if (std::abs(c.wobble_amplitude) >= std::min(c.colatitude, kPi - c.colatitude)) {
      r.fail("wobble_amplitude", "would reach a pole");
    }
  }
  return c;
}

SurfaceSpec read_surface(const SectionReader& r, const std::filesystem::path& base) {
  SurfaceSpec s;
  s.generator = r.get_string("surface", s.generator);
  if (s.generator == "sphere") {
    s.radius = r.get_double("radius", s.radius);
    if (!(s.radius > 0.0 && s.radius < kPi)) r.fail("radius", "must lie in (0, pi)");
    s.level = static_cast<int>(r.get_int("level", s.level));
    if (s.level < 0 || s.level > 7) r.fail("level", "must lie in [0, 7]");
    s.amplitude = r.get_double("amplitude", 0.0);
    if (s.amplitude < 0.0) r.fail("amplitude", "must be >= 0");
    if (r.has("seed")) {
      const long long seed = r.get_int("seed", 0);
      if (seed < 0) r.fail("seed", "must be >= 0");
      s.seed = static_cast<std::uint64_t>(seed);
    }
    if (s.amplitude > 0.0 && !s.seed) r.fail("amplitude", "a seed is required when amplitude > 0");
  } else if (s.generator == "clifford_torus" || s.generator == "product_torus") {
    if (s.generator == "product_torus") {
      s.angle = r.get_double("angle", s.angle);
      if (!(s.angle > 0.0 && s.angle < kPi / 2.0)) r.fail("angle", "must lie in (0, pi/2)");
    }
    s.nu = static_cast<int>(r.get_int("nu", s.nu));
    s.nv = static_cast<int>(r.get_int("nv", s.nv));
    if (s.nu < 8 || s.nv < 8) r.fail(s.nu < 8 ? "nu" : "nv", "must be >= 8");
  } else if (s.generator == "hopf_torus") {
    s.n_fiber = static_cast<int>(r.get_int("n_fiber", s.n_fiber));
    if (s.n_fiber < 8) r.fail("n_fiber", "must be >= 8");
  } else if (s.generator == "mesh_file") {
    if (!r.has("mesh_file")) r.fail("surface", "surface = mesh_file requires mesh_file");
    s.mesh_file = resolve(base, r.get_string("mesh_file", ""));
  } else {
    r.fail("surface", "expected sphere, clifford_torus, product_torus, hopf_torus or mesh_file, got '" +
                          s.generator + "'");
  }
  return s;
}

void read_flow(const SectionReader& r, FlowConfig& f) {
  f.speed = r.get_string("speed", f.speed);
  f.speed_params = r.get_doubles("speed_params");
  try {
    (void)SpeedFunction::from_name(f.speed, f.speed_params);
  } catch (const std::invalid_argument& e) {
    r.fail(r.has("speed_params") ? "speed_params" : "speed", e.what());
  }
  f.fixed_dt = r.get_double("dt", f.fixed_dt);
  f.cfl = r.get_double("cfl", f.cfl);
  f.dt_max = r.get_double("dt_max", f.dt_max);
  f.t_end = r.get_double("t_end", f.t_end);
  f.speed_tol = r.get_double("speed_tol", f.speed_tol);
  f.width_tol = r.get_double("width_tol", f.width_tol);
  f.g_floor = r.get_double("g_floor", f.g_floor);
  f.max_steps = static_cast<std::size_t>(r.get_int("max_steps", static_cast<long long>(f.max_steps)));
  f.smoothing = r.get_double("smoothing", f.smoothing);
  f.curvature.rings = static_cast<int>(r.get_int("rings", f.curvature.rings));
  if (f.curvature.rings != 1 && f.curvature.rings != 2) r.fail("rings", "must be 1 or 2");
  try {
    f.validate();
  } catch (const std::invalid_argument& e) {
    r.fail("flow", e.what());
  }
}

void read_csf(const SectionReader& r, CsfConfig& c) {
  c.t_end = r.get_double("t_end", c.t_end);
  c.cfl = r.get_double("cfl", c.cfl);
  c.fixed_dt = r.get_double("dt", c.fixed_dt);
  c.length_tol = r.get_double("length_tol", c.length_tol);
  c.resample = r.get_bool("resample", c.resample);
  if (!(c.t_end > 0.0)) r.fail("t_end", "must be > 0");
  if (!(c.cfl > 0.0 && c.cfl <= 1.0)) r.fail("cfl", "must lie in (0, 1]");
}

ExportSpec read_exports(const SectionReader& r) {
  ExportSpec e;
  if (r.has("formats")) {
    e.formats.clear();
    for (const std::string& f : r.get_strings("formats")) {
      try {
        e.formats.push_back(parse_mesh_format(f));
      } catch (const IoError& err) {
        r.fail("formats", err.what());
      }
    }
  }
  const long long cadence = r.get_int("cadence", 0);
  if (cadence < 0) r.fail("cadence", "must be >= 0");
  e.cadence = static_cast<std::size_t>(cadence);
  e.output_dir = r.get_string("output_dir", "");
  e.gauss_images = r.get_bool("gauss_images", false);
  return e;
}

Scenario read_scenario(const ConfigSection& section, const std::string& path) {
  const SectionReader r(section, path);
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  Scenario s;
  s.name = section.name;
  s.line = section.line;
  s.description = r.get_string("description", "");
  s.kind = parse_kind(r);
  switch (s.kind) {
    case ScenarioKind::Surface:
      s.surface = read_surface(r, base);
      if (s.surface.generator == "hopf_torus") s.curve = read_curve(r, base);
      read_flow(r, s.flow);
      break;
    case ScenarioKind::Curve:
      s.curve = read_curve(r, base);
      read_csf(r, s.csf);
      break;
    case ScenarioKind::GaussmapCsf:
      s.surface.generator = "hopf_torus";
      s.surface.n_fiber = static_cast<int>(r.get_int("n_fiber", s.surface.n_fiber));
      s.curve = read_curve(r, base);
      read_flow(r, s.flow);
      s.csf_time_scale = r.get_double("csf_time_scale", 1.0);
      if (!(s.csf_time_scale > 0.0)) r.fail("csf_time_scale", "must be > 0");
      break;
    case ScenarioKind::WeinerCheck:
      s.surface.generator = "hopf_torus";
      s.surface.n_fiber = static_cast<int>(r.get_int("n_fiber", s.surface.n_fiber));
      s.curve = read_curve(r, base);
      break;
  }
  s.exports = read_exports(r);
  r.reject_unused();
  return s;
}

class Summary {
 public:
  template <typename T>
  void add(const std::string& key, const T& value) {
    if constexpr (std::is_floating_point_v<T>) {
      lines_ += key + " = " + fmt(value) + "\n";
    } else if constexpr (std::is_arithmetic_v<T>) {
      lines_ += key + " = " + std::to_string(value) + "\n";
    } else {
      lines_ += key + " = " + std::string(value) + "\n";
    }
  }
  void write(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << lines_;
  }

 private:
  std::string lines_;
};

void add_report(Summary& s, const PinchingReport& r) {
  s.add("min_G", r.min_G);
  s.add("max_A2", r.max_A2);
  s.add("max_speed", r.max_speed);
  s.add("area", r.area);
  s.add("epsilon_star", r.epsilon_star);
}

std::string snapshot_name(std::size_t step, MeshFormat f) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snapshot_%07zu.%s", step, to_string(f));
  return buf;
}

int exit_code_for(StopReason reason) {
  return (reason == StopReason::ConditionBreached || reason == StopReason::MeshDegenerate) ? 3 : 0;
}

std::vector<S2Point> left_image_curve(const HopfTorus& torus, const GaussImage& img) {
  std::vector<S2Point> pts;
  for (int k = 0; k < torus.n_curve; ++k) pts.push_back(img.left[static_cast<std::size_t>(k) * torus.n_fiber]);
  return pts;
}

std::vector<S2Point> right_image_curve(const HopfTorus& torus, const GaussImage& img) {
  return {img.right.begin(), img.right.begin() + torus.n_fiber};
}

}  // namespace

const char* to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Surface: return "surface";
    case ScenarioKind::Curve: return "curve";
    case ScenarioKind::GaussmapCsf: return "gaussmap_csf";
    case ScenarioKind::WeinerCheck: return "weiner_check";
  }
  return "unknown";
}

std::vector<Scenario> load_scenarios(const std::filesystem::path& config_path) {
  const ConfigFile file = parse_config_file(config_path);
  std::vector<Scenario> out;
  for (const ConfigSection& section : file.sections) {
    if (section.kind != "scenario") {
      throw ConfigError(file.path + ":" + std::to_string(section.line) + ": unknown section kind '" +
                        section.kind + "' (expected [scenario name])");
    }
    out.push_back(read_scenario(section, file.path));
  }
  return out;
}

S2Curve build_curve(const CurveSpec& spec) {
  if (spec.type == "file") return read_curve_csv(spec.file);
  if (spec.type == "great_circle") return make_great_circle(Vec3::UnitZ(), spec.samples);
  if (spec.wobble_amplitude == 0.0) return make_latitude_circle(spec.colatitude, spec.samples);
  std::vector<S2Point> pts;
  pts.reserve(spec.samples);
  for (std::size_t k = 0; k < spec.samples; ++k) {
    const double phi = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(spec.samples);
    const double th = spec.colatitude + spec.wobble_amplitude * std::sin(spec.wobble_frequency * phi);
    pts.push_back(S2Point::normalized(Vec3(std::sin(th) * std::cos(phi), std::sin(th) * std::sin(phi), std::cos(th))));
  }
  return S2Curve(std::move(pts));
}

SurfaceMesh build_surface(const SurfaceSpec& spec, const CurveSpec& curve) {
  if (spec.generator == "sphere") {
    if (spec.amplitude > 0.0) {
      if (!spec.seed) throw std::invalid_argument("perturbed sphere requires a seed");
      return make_perturbed_sphere(spec.radius, spec.level, spec.amplitude, *spec.seed);
    }
    return make_geodesic_sphere(spec.radius, spec.level);
  }
  if (spec.generator == "clifford_torus") return make_clifford_torus(spec.nu, spec.nv);
  if (spec.generator == "product_torus") return make_product_torus(spec.angle, spec.nu, spec.nv);
  if (spec.generator == "hopf_torus") return make_hopf_torus(build_curve(curve), spec.n_fiber);
  if (spec.generator == "mesh_file") return import_raw4(spec.mesh_file);
  throw std::invalid_argument("unknown surface generator '" + spec.generator + "'");
}

std::filesystem::path default_output_root() {
  const char* env = std::getenv("S3FLOW_OUTPUT_ROOT");
  return env && *env ? std::filesystem::path(env) : std::filesystem::path("runs");
}

RunOutcome run_scenario(const Scenario& sc, const RunOptions& options) {
  std::filesystem::path root = options.output_root;
  if (root.empty()) root = sc.exports.output_dir.empty() ? default_output_root() : std::filesystem::path(sc.exports.output_dir);
  RunOutcome outcome;
  outcome.directory = root / sc.name;
  std::filesystem::create_directories(outcome.directory);
  const std::filesystem::path& dir = outcome.directory;
  const std::size_t cadence = options.cadence.value_or(sc.exports.cadence);
  auto log = [&](const std::string& msg) {
    if (options.log) *options.log << "[" << sc.name << "] " << msg << "\n";
  };

  Summary summary;
  summary.add("scenario", sc.name);
  summary.add("kind", to_string(sc.kind));

  if (sc.kind == ScenarioKind::Curve) {
    CsfConfig cfg = sc.csf;
    cfg.cadence = cadence;
    const S2Curve curve = build_curve(sc.curve);
    log("curve-shortening flow on " + std::to_string(curve.size()) + " samples");
    const CsfTrajectory traj = run_csf(curve, cfg);
    std::ofstream out(dir / "curve_trajectory.csv");
    out << "t,length,total_turning,max_abs_kappa\n";
    for (const CsfSample& row : traj.rows) {
      out << fmt(row.t) << "," << fmt(row.length) << "," << fmt(row.total_turning) << ","
          << fmt(row.max_abs_kappa) << "\n";
    }
    for (std::size_t i = 0; i < traj.curves.size(); ++i) {
      char name[64];
      std::snprintf(name, sizeof name, "curve_%04zu.csv", i);
      write_curve_csv(traj.curves[i], dir / name);
    }
    write_curve_csv(traj.final_curve, dir / "curve_final.csv");
    outcome.stop_reason = traj.reason == CsfStop::Extinct ? "Extinct" : "TimeExhausted";
    summary.add("stop_reason", outcome.stop_reason);
    summary.add("t_final", traj.rows.empty() ? 0.0 : traj.rows.back().t);
    summary.add("steps", traj.rows.empty() ? std::size_t{0} : traj.rows.size() - 1);
    summary.add("final_length", curve_length(traj.final_curve));
    summary.add("final_total_turning", total_turning(traj.final_curve));
    summary.write(dir / "summary.txt");
    log("stop: " + outcome.stop_reason);
    return outcome;
  }

  if (sc.kind == ScenarioKind::WeinerCheck) {
    const HopfTorus torus = make_hopf_torus_with_info(build_curve(sc.curve), sc.surface.n_fiber);
    const GaussImage img = gauss_maps(torus.mesh);
    const S2Curve left(left_image_curve(torus, img));
    const S2Curve right(right_image_curve(torus, img));
    const WeinerReport w = weiner_check(left, right);
    write_curve_csv(left, dir / "gauss_left_curve.csv");
    write_curve_csv(right, dir / "gauss_right_curve.csv");
    summary.add("total_curvature_left", w.total_curvature_1);
    summary.add("total_curvature_right", w.total_curvature_2);
    summary.add("sup_left", w.sup_1);
    summary.add("sup_right", w.sup_2);
    summary.add("sup_pair", w.sup_pair);
    summary.add("verdict", w.verdict ? "pass" : "fail");
    summary.add("degeneracy_left", degeneracy_measure(img.left));
    summary.add("degeneracy_right", degeneracy_measure(img.right));
    outcome.stop_reason = w.verdict ? "pass" : "fail";
    summary.write(dir / "summary.txt");
    log(std::string("weiner verdict: ") + outcome.stop_reason);
    return outcome;
  }

  std::optional<HopfTorus> torus;
  SurfaceMesh mesh = [&] {
    if (sc.kind == ScenarioKind::GaussmapCsf) {
      torus = make_hopf_torus_with_info(build_curve(sc.curve), sc.surface.n_fiber);
      return torus->mesh;
    }
    return build_surface(sc.surface, sc.curve);
  }();
  log("flow '" + sc.flow.speed + "' on " + std::to_string(mesh.vertex_count()) + " vertices, t_end " +
      fmt(sc.flow.t_end));

  FlowConfig cfg = sc.flow;
  cfg.snapshot_cadence = cadence;
  const FlowResult res = run_flow(mesh, cfg);
  write_trajectory_csv(res.rows, res.reason, dir / "trajectory.csv");
  for (const FlowState& snap : res.snapshots) {
    for (MeshFormat f : sc.exports.formats) {
      export_mesh(snap.mesh, f, dir / snapshot_name(snap.step, f), &snap.curvature);
    }
  }
  const FlowState& first = res.snapshots.front();
  const FlowState& last = res.final_state;
  if (sc.exports.gauss_images || sc.kind == ScenarioKind::GaussmapCsf) {
    const GaussImage g0 = gauss_maps(first.mesh);
    const GaussImage g1 = gauss_maps(last.mesh);
    write_points_csv(g0.left, dir / "gauss_left_initial.csv");
    write_points_csv(g0.right, dir / "gauss_right_initial.csv");
    write_points_csv(g1.left, dir / "gauss_left_final.csv");
    write_points_csv(g1.right, dir / "gauss_right_final.csv");
    summary.add("degeneracy_left_final", degeneracy_measure(g1.left));
    summary.add("degeneracy_right_final", degeneracy_measure(g1.right));
    if (sc.kind == ScenarioKind::GaussmapCsf) {
      const S2Curve image0(left_image_curve(*torus, g0));
      CsfConfig csf;
      csf.t_end = sc.csf_time_scale * last.t;
      const CsfTrajectory traj = run_csf(image0, csf);
      write_curve_csv(traj.final_curve, dir / "csf_final.csv");
      summary.add("csf_time", csf.t_end);
      summary.add("hausdorff_left_vs_csf", hausdorff_to_curve(g1.left, traj.final_curve));
      summary.add("hausdorff_left_initial_vs_csf", hausdorff_to_curve(g0.left, traj.final_curve));
    }
  }

  outcome.stop_reason = to_string(res.reason);
  outcome.exit_code = exit_code_for(res.reason);
  summary.add("stop_reason", outcome.stop_reason);
  if (!res.message.empty()) summary.add("message", res.message);
  summary.add("t_final", last.t);
  summary.add("steps", last.step);
  add_report(summary, res.rows.back().report);
  summary.write(dir / "summary.txt");
  log("stop: " + outcome.stop_reason + " at t = " + fmt(last.t) + " after " + std::to_string(last.step) + " steps");
  return outcome;
}

RunOutcome run_scenario(const std::filesystem::path& config_path, const std::string& name,
                        const RunOptions& options) {
  const std::vector<Scenario> all = load_scenarios(config_path);
  for (const Scenario& s : all) {
    if (s.name == name) return run_scenario(s, options);
  }
  throw ConfigError(config_path.string() + ": no scenario named '" + name + "'");
}

}  // namespace s3flow
