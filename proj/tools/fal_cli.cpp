#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "fal/problems.hpp"
#include "run_config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Constrained minimax solvers with certified residuals"};
  app.require_subcommand(1);

  std::string config;
  std::vector<std::string> batch;
  std::string out_dir;
  bool emit_plot = false;
  bool report_bounds = false;

  auto* solve = app.add_subcommand("solve", "Run a configured solve");
  auto* cfg_opt = solve->add_option("--config", config, "Path to a JSON config");
  auto* batch_opt =
      solve->add_option("--batch", batch, "Several configs, run concurrently into <out>/<stem>/");
  cfg_opt->excludes(batch_opt);
  solve->add_option("--out", out_dir, "Output directory (default: $FAL_OUT_DIR or ./fal_out)");
  solve->add_flag("--emit-plot-data", emit_plot, "Also write plot_data.csv");
  solve->add_flag("--report-bounds", report_bounds, "Include the bound report in report.json");

  std::string bounds_config;
  auto* bounds = app.add_subcommand("bounds", "Print the complexity bounds for a config");
  bounds->add_option("--config", bounds_config, "Path to a JSON config")->required();

  auto* problems = app.add_subcommand("problems", "Built-in instances");
  problems->require_subcommand(1);
  auto* list = problems->add_subcommand("list", "List built-in instances");

  CLI11_PARSE(app, argc, argv);

  using namespace fal::run;
  if (solve->parsed()) {
    SolveOptions opts;
    if (!out_dir.empty()) opts.out_dir = out_dir;
    opts.emit_plot_data = emit_plot;
    opts.report_bounds = report_bounds;
    if (!batch.empty()) {
      std::vector<std::filesystem::path> paths(batch.begin(), batch.end());
      return solve_batch(paths, opts, std::cerr);
    }
    if (config.empty()) {
      std::cerr << "error: solve needs --config or --batch\n";
      return 1;
    }
    return solve_file(config, opts, std::cerr);
  }

  if (bounds->parsed()) {
    try {
      const RunConfig cfg = load_config(bounds_config);
      const json rep = bounds_report(cfg);
      std::cout << rep.dump(2) << '\n';
      if (rep.contains("advisory")) std::cerr << "advisory: " << rep["advisory"].get<std::string>() << '\n';
      for (const auto& m : rep["missing"]) std::cerr << "missing constant: " << m.get<std::string>() << '\n';
      return 0;
    } catch (const fal::InvalidParameter& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    }
  }

  if (list->parsed()) {
    for (const auto& info : fal::list_instances()) {
      std::string keys;
      for (const auto& k : info.parameters) keys += (keys.empty() ? "" : ", ") + k;
      std::cout << fmt::format("{:<16} {}\n", info.name, info.description);
      std::cout << fmt::format("{:<16} parameters: {}\n", "", keys.empty() ? "none" : keys);
    }
    return 0;
  }
  return 1;
}
