// Command-line front end: run and list config scenarios, convert raw4
// snapshots to viewer formats.

#include "s3flow/config.hpp"
#include "s3flow/io.hpp"
#include "s3flow/parallel.hpp"
#include "s3flow/scenario.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Curvature flows of surfaces in the 3-sphere"};
  app.require_subcommand(1);

  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)");

  std::string config, scenario, output_dir;
  std::size_t cadence = 0;
  auto* run = app.add_subcommand("run", "Run one scenario from a config file");
  run->add_option("config", config, "Config file")->required();
  run->add_option("scenario", scenario, "Scenario name")->required();
  auto* out_opt = run->add_option("--output-dir", output_dir, "Output root (default $S3FLOW_OUTPUT_ROOT or ./runs)");
  auto* cad_opt = run->add_option("--cadence", cadence, "Mesh snapshot cadence in steps");

  auto* list = app.add_subcommand("list", "List the scenarios of a config file");
  list->add_option("config", config, "Config file")->required();

  std::string snapshot, format, target;
  auto* exp = app.add_subcommand("export", "Convert a raw4 snapshot");
  exp->add_option("snapshot", snapshot, "raw4 mesh file")->required();
  exp->add_option("--format", format, "raw4, obj3 or vtk")->required();
  exp->add_option("path", target, "Output file")->required();

  CLI11_PARSE(app, argc, argv);
  s3flow::set_thread_count(threads);

  try {
    if (*run) {
      s3flow::RunOptions opts;
      if (*out_opt) opts.output_root = output_dir;
      if (*cad_opt) opts.cadence = cadence;
      opts.log = &std::cerr;
      const s3flow::RunOutcome r = s3flow::run_scenario(config, scenario, opts);
      std::cout << scenario << ": " << r.stop_reason << " (" << r.directory.string() << ")\n";
      return r.exit_code;
    }
    if (*list) {
      for (const s3flow::Scenario& s : s3flow::load_scenarios(config)) {
        std::cout << s.name << "\t" << s.description << "\n";
      }
      return 0;
    }
    if (*exp) {
      const s3flow::SurfaceMesh mesh = s3flow::import_raw4(snapshot);
      s3flow::export_mesh(mesh, s3flow::parse_mesh_format(format), target);
      return 0;
    }
  } catch (const s3flow::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
