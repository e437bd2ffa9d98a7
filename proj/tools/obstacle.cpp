#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "odg/adapt.hpp"
#include "odg/report.hpp"

namespace {

std::string level_name(const char* prefix, int level, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_L%03d.%s", prefix, level, ext);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive SIPG solver for the elliptic obstacle problem"};
  app.require_subcommand(1);

  CLI::App* run = app.add_subcommand("run", "run one adaptive refinement history");
  odg::AdaptConfig config;
  std::string out_dir = ".";
  bool svg = false;
  double load = 0.0;
  run->add_option("--example", config.example_id, "benchmark id (1, 2 or 3)")
      ->required()
      ->check(CLI::IsMember({1, 2, 3}));
  run->add_option("--load", load, "load for example 3: 0 or -15")->check(CLI::IsMember({0.0, -15.0}));
  run->add_option("--levels", config.max_levels, "maximum number of adaptive levels");
  run->add_option("--max-dofs", config.max_dofs, "stop once this many DOFs are reached");
  run->add_option("--theta", config.theta, "maximum-marking parameter");
  run->add_option("--gamma", config.gamma, "interior penalty parameter");
  run->add_option("--out", out_dir, "output directory");
  run->add_flag("--svg", svg, "write a mesh/contact-set rendering per level");

  CLI11_PARSE(app, argc, argv);

  config.load_variant = load;
  std::filesystem::create_directories(out_dir);

  int last_level = -1;
  odg::LevelCallback callback = [&](const odg::LevelState& state) {
    last_level = state.record.level;
    if (svg)
      odg::emit_svg(state.mesh, state.estimator.classes,
                    out_dir + "/" + level_name("mesh", state.record.level, "svg"));
  };

  odg::AdaptResult result;
  try {
    // rerun the final level through the callback to dump the solution
    odg::DgFunction final_u, final_sigma;
    odg::Mesh final_mesh;
    odg::LevelCallback capture = [&](const odg::LevelState& state) {
      callback(state);
      final_mesh = state.mesh;
      final_u = state.u;
      final_sigma = state.sigma;
    };
    result = odg::adaptive_loop(config, capture);
    odg::emit_csv(result.records, out_dir + "/history.csv");
    if (!result.records.empty())
      odg::write_solution_json(final_mesh, final_u, final_sigma,
                               out_dir + "/" + level_name("solution", last_level, "json"));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  if (!result.solver_ok) {
    std::cerr << "solver failure: " << result.message << "\n";
    return 2;
  }

  for (const odg::RunRecord& r : result.records)
    std::printf("level %2d  dofs %7d  h_min %.3e  eta %.6e  err %.6e  pdas %d\n", r.level, r.dofs,
                r.hmin, r.eta_total, r.linf_error, r.pdas_iterations);
  return 0;
}
