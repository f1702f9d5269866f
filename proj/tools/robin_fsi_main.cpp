#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "robinfsi/config.hpp"
#include "robinfsi/errors.hpp"
#include "robinfsi/experiments.hpp"
#include "robinfsi/io.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::string out_dir;
  double alpha = -1.0;
  double dt = -1.0;
  int levels = -1;
  int jobs = -1;
  bool vtk = false;
};

int run_subcommand(robinfsi::Experiment experiment, const CliOptions& opt) {
  using namespace robinfsi;
  RunConfig config;
  if (!opt.config_path.empty()) {
    config = parse_config(opt.config_path);
  } else {
    // sensible preset defaults per subcommand
    switch (experiment) {
      case Experiment::Benchmark:
      case Experiment::MonolithicBenchmark:
        apply_preset(config, "benchmark");
        break;
      default:
        break;
    }
  }
  config.experiment = experiment;
  if (experiment == Experiment::MonolithicBenchmark && opt.config_path.empty() &&
      opt.dt < 0.0)
    config.scheme.dt = 1e-4;  // reference solver default step
  if (!opt.out_dir.empty()) config.output.dir = opt.out_dir;
  if (opt.alpha > 0.0) config.scheme.alpha = opt.alpha;
  if (opt.dt > 0.0) config.scheme.dt = opt.dt;
  if (opt.levels > 0) config.study.levels = opt.levels;
  if (opt.jobs > 0) config.study.jobs = opt.jobs;
  if (opt.vtk) config.output.vtk = true;
  validate_config(config);
  return run(config);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partitioned Robin-coupled fluid-structure interaction toolkit"};
  app.require_subcommand(1);

  CliOptions opt;
  const std::pair<const char*, robinfsi::Experiment> subs[] = {
      {"mms-fixed", robinfsi::Experiment::MmsFixed},
      {"mms-moving", robinfsi::Experiment::MmsMoving},
      {"convergence", robinfsi::Experiment::Convergence},
      {"coupling-errors", robinfsi::Experiment::CouplingErrors},
      {"benchmark", robinfsi::Experiment::Benchmark},
      {"monolithic-benchmark", robinfsi::Experiment::MonolithicBenchmark},
      {"energy-check", robinfsi::Experiment::EnergyCheck},
  };

  robinfsi::Experiment chosen = robinfsi::Experiment::Convergence;
  for (const auto& [name, exp] : subs) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", opt.config_path, "configuration file");
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_option("--alpha", opt.alpha, "Robin combination parameter");
    sub->add_option("--dt", opt.dt, "time step (s)");
    sub->add_option("--levels", opt.levels, "refinement levels");
    sub->add_option("--jobs", opt.jobs, "parallel study cells");
    sub->add_flag("--vtk", opt.vtk, "emit VTK meshes/fields");
    sub->callback([&chosen, exp]() { chosen = exp; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    return run_subcommand(chosen, opt);
  } catch (const robinfsi::Error& e) {
    nlohmann::json err{{"error", robinfsi::error_code_name(e.code())},
                       {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    if (!opt.out_dir.empty()) {
      robinfsi::ensure_directory(opt.out_dir);
      std::ofstream(opt.out_dir + "/error.json") << err.dump(2) << "\n";
    }
    return 2;
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", "UNEXPECTED"}, {"message", e.what()}}.dump()
              << "\n";
    return 3;
  }
}
