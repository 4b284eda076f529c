#pragma once

// Named experiments read from a config file, and the runner that executes
// them and writes their artifacts.

#include "s3flow/flow.hpp"
#include "s3flow/io.hpp"
#include "s3flow/s2curves.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace s3flow {

enum class ScenarioKind {
  Surface,       // run_flow on a generated or loaded mesh
  Curve,         // run_csf on a curve
  GaussmapCsf,   // flow a Hopf torus and compare its left Gauss image with CSF
  WeinerCheck,   // subinterval curvature bounds of a Hopf torus' Gauss images
};

struct CurveSpec {
  std::string type = "latitude";  // latitude | great_circle | file
  double colatitude = 1.0;
  std::size_t samples = 128;
  /// colatitude(phi) = colatitude + wobble_amplitude sin(wobble_frequency phi)
  double wobble_amplitude = 0.0;
  int wobble_frequency = 3;
  std::string file;
};

struct SurfaceSpec {
  /// sphere | clifford_torus | product_torus | hopf_torus | mesh_file
  std::string generator = "sphere";
  double radius = 1.0;
  int level = 3;
  double angle = kPi / 4.0;
  int nu = 64, nv = 64;
  int n_fiber = 64;
  std::string mesh_file;
  double amplitude = 0.0;
  std::optional<std::uint64_t> seed;
};

struct ExportSpec {
  std::vector<MeshFormat> formats{MeshFormat::Raw4};
  std::size_t cadence = 0;  // mesh snapshots every n steps; 0 keeps the ends
  std::string output_dir;   // empty: the runner's default root
  bool gauss_images = false;
};

struct Scenario {
  std::string name;
  std::string description;
  ScenarioKind kind = ScenarioKind::Surface;
  SurfaceSpec surface;
  CurveSpec curve;
  FlowConfig flow;
  CsfConfig csf;
  double csf_time_scale = 1.0;  // CSF time per unit flow time in GaussmapCsf
  ExportSpec exports;
  int line = 0;
};

const char* to_string(ScenarioKind kind);

/// Parses and validates every [scenario name] section. Throws ConfigError
/// with file/line diagnostics.
std::vector<Scenario> load_scenarios(const std::filesystem::path& config_path);

S2Curve build_curve(const CurveSpec& spec);
SurfaceMesh build_surface(const SurfaceSpec& spec, const CurveSpec& curve);

struct RunOptions {
  std::filesystem::path output_root;  // overrides the scenario and environment
  std::optional<std::size_t> cadence;
  std::ostream* log = nullptr;
};

struct RunOutcome {
  int exit_code = 0;
  std::filesystem::path directory;
  std::string stop_reason;
};

/// Default output root: $S3FLOW_OUTPUT_ROOT if set, else ./runs.
std::filesystem::path default_output_root();

/// Runs one scenario and writes trajectory.csv, snapshots and summary.txt
/// into <root>/<name>. Exit code 0 for Converged, Extinct and
/// TimeExhausted, 3 for ConditionBreached and MeshDegenerate.
RunOutcome run_scenario(const Scenario& scenario, const RunOptions& options = {});
RunOutcome run_scenario(const std::filesystem::path& config_path, const std::string& name,
                        const RunOptions& options = {});

}  // namespace s3flow
