#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "fal/alm_solver.hpp"
#include "run_config.hpp"

using namespace fal;
using namespace fal::run;
namespace fs = std::filesystem;

namespace {

std::string error_key(const json& j) {
  try {
    execute(parse_config(j));
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<none>";
}

std::vector<std::string> csv_lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(s);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!s.empty() && s.back() == ',') out.push_back("");
  return out;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fal_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

const json kAlmToy = {{"problem", "constrained_toy"}, {"solver", "alm"}, {"epsilon", 1e-2},
                      {"tau", 0.5},                   {"epsilon_0", 1.0}};

}  // namespace

TEST_SUITE("run_config") {

TEST_CASE("config errors name the offending key") {
  CHECK(error_key({{"problem", "ncc_toy"}, {"solver", "ncc"}, {"epsilon", 0.1}, {"epsilon_hat_0", 0.06}}) ==
        "epsilon_hat_0");
  CHECK(error_key({{"problem", "constrained_toy"}, {"solver", "alm"}, {"epsilon", 0.5},
                   {"tau", 0.5}, {"epsilon_0", 0.25}}) == "epsilon_0");
  CHECK(error_key({{"problem", "ncc_toy"}, {"solver", "ncc"}, {"epsilon", 0.1}, {"colour", 1}}) ==
        "colour");
  CHECK(error_key({{"problem", "ncc_toy"}, {"solver", "ncc"}, {"epsilon", "small"}}) == "epsilon");
  CHECK(error_key({{"problem", "ncc_toy"}, {"solver", "gda"}, {"epsilon", 0.1}}) == "solver");
  CHECK(error_key({{"problem", "ncc_toy"}, {"solver", "ncc"}}) == "epsilon");
  CHECK(error_key({{"problem", "nope"}, {"solver", "ncc"}, {"epsilon", 0.1}}) == "problem");
  CHECK(error_key({{"problem", "ncc_toy"}, {"solver", "ncc"}, {"epsilon", 0.1},
                   {"problem.bogus", 1.0}}) == "problem.bogus");
  CHECK(error_key({{"problem", "ncc_toy"}, {"solver", "scc"}, {"epsilon", 0.1}}) == "solver");
  CHECK(error_key({{"problem", "ncc_toy"}, {"solver", "ncc"}, {"epsilon", 0.1},
                   {"start.x", {0.0, 1.0}}}) == "start.x");
  CHECK(error_key({{"problem", "constrained_toy"}, {"solver", "alm"}, {"epsilon", 0.01},
                   {"lambda_y0", {-1.0}}}) == "lambda_y0");
}

TEST_CASE("saddle start gives a single zero-residual row") {
  const json j = {{"problem", "quad_saddle_1d"}, {"solver", "scc"}, {"epsilon", 1e-6},
                  {"start.x", {0.0}},            {"start.y", {0.0}}};
  const RunResult r = execute(parse_config(j), false);
  CHECK(r.exit_code == 0);
  const auto lines = csv_lines(r.trace_csv);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == SolveTrace::csv_header());
  const auto cells = split(lines[1]);
  CHECK(cells[0] == "scc");
  CHECK(std::stod(cells[5]) == 0.0);
  CHECK(r.report["certificate"]["residual"].get<double>() == 0.0);
}

TEST_CASE("trace columns and cumulative counters") {
  const std::string header =
      "phase,outer_iter,inner_iter,eps_k,rho_k,residual_cert,feas_c,feas_d,comp_c,comp_d,"
      "n_grad_f,n_grad_c,n_grad_d,n_prox_p,n_prox_q,wall_ms";
  CHECK(std::string(SolveTrace::csv_header()) == header);

  json j = kAlmToy;
  j["trace_detail"] = "ncc";
  const RunResult r = execute(parse_config(j), false);
  const auto lines = csv_lines(r.trace_csv);
  REQUIRE(lines.size() > 2);
  std::vector<double> prev(5, 0.0);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split(lines[i]);
    REQUIRE(cells.size() == 16);
    CHECK((cells[0] == "ncc" || cells[0] == "alm"));
    for (int c = 0; c < 5; ++c) {
      const double v = std::stod(cells[10 + c]);
      CHECK(v >= prev[c]);
      prev[c] = v;
    }
  }
}

TEST_CASE("alm run: outer count, certification and matching bounds") {
  const RunConfig cfg = parse_config(kAlmToy);
  const RunResult r = execute(cfg, false);
  CHECK(r.exit_code == 0);
  CHECK(r.report["certified"].get<bool>());
  const auto K = alm_iteration_count(1e-2, 1.0, 0.5);
  CHECK(K == 7);
  CHECK(r.report["outer_iterations"].get<std::int64_t>() == K + 1);
  const json b = bounds_report(cfg);
  CHECK(b["alm"]["K"].get<std::int64_t>() + 1 == r.report["outer_iterations"].get<std::int64_t>());
  CHECK(b["complete"].get<bool>());
}

TEST_CASE("report round-trips through JSON text") {
  for (const json& j : {kAlmToy,
                        json{{"problem", "ncc_toy"}, {"solver", "ncc"}, {"epsilon", 1e-2}},
                        json{{"problem", "quad_saddle_box"}, {"solver", "scc"}, {"epsilon", 1e-6},
                             {"start.random", true}, {"seed", 4}}}) {
    CAPTURE(j.dump());
    const RunResult r = execute(parse_config(j), false);
    const json back = json::parse(r.report.dump(2));
    const json again = recompute_kkt(back);
    for (const auto& [key, value] : back["kkt"].items())
      CHECK(std::abs(again[key].get<double>() - value.get<double>()) <= 1e-12);
    CHECK(back["x"] == r.report["x"]);
  }
}

TEST_CASE("identical configs give identical traces") {
  const json j = {{"problem", "ncc_toy"}, {"solver", "ncc"}, {"epsilon", 1e-2},
                  {"trace_detail", "scc"}, {"start.random", true}, {"seed", 9}};
  const RunResult a = execute(parse_config(j), false);
  const RunResult b = execute(parse_config(j), false);
  CHECK(a.trace_csv == b.trace_csv);
  CHECK(a.report.dump() == b.report.dump());
  CHECK(csv_lines(a.trace_csv).size() > 3);
}

TEST_CASE("bound reports") {
  json j = kAlmToy;
  j["epsilon"] = 0.5;
  j["epsilon_0"] = 1.0;
  const json b = bounds_report(parse_config(j));
  CHECK_FALSE(b["alm"]["eps_condition"].get<bool>());
  CHECK(b.contains("advisory"));
  CHECK(b["alm"]["paper_literal"]["M"].get<double>() >= b["alm"]["M"].get<double>());

  // Unconstrained instance under alm: constraint constants are absent.
  const json p = bounds_report(parse_config(
      {{"problem", "quad_saddle_1d"}, {"solver", "alm"}, {"epsilon", 0.1}}));
  CHECK_FALSE(p["complete"].get<bool>());
  CHECK_FALSE(p["missing"].empty());
  CHECK(p["alm"]["K"].get<std::int64_t>() == alm_iteration_count(0.1, 1.0, 0.5));

  const json s = bounds_report(parse_config(
      {{"problem", "quad_saddle_box"}, {"solver", "scc"}, {"epsilon", 1e-6}}));
  CHECK(s["complete"].get<bool>());
  CHECK(s["scc"]["K"].get<double>() > 0.0);
}

TEST_CASE("iteration limit maps to exit code 2 and keeps the last point") {
  const json j = {{"problem", "quad_saddle_box"}, {"solver", "scc"}, {"epsilon", 1e-10},
                  {"start.x", {1.0, -1.0}},       {"start.y", {0.5, 0.5}}, {"max_outer", 1}};
  const RunResult r = execute(parse_config(j), false);
  CHECK(r.exit_code == 2);
  CHECK(r.report["status"] == "iteration_limit");
  CHECK(r.report["x"].size() == 2);
  CHECK_FALSE(r.report["certified"].get<bool>());
}

TEST_CASE("files, exit codes and the output directory") {
  const fs::path dir = scratch_dir("files");
  const fs::path cfg = dir / "alm.json";
  std::ofstream(cfg) << kAlmToy.dump();
  const fs::path bad = dir / "bad.json";
  json badj = kAlmToy;
  badj["epsilon_0"] = 0.001;
  std::ofstream(bad) << badj.dump();
  const fs::path broken = dir / "broken.json";
  std::ofstream(broken) << "{ not json";

  std::ostringstream log;
  SolveOptions opts;
  opts.out_dir = (dir / "out").string();
  opts.emit_plot_data = true;
  opts.report_bounds = true;
  CHECK(solve_file(cfg, opts, log) == 0);
  CHECK(fs::exists(dir / "out" / "trace.csv"));
  CHECK(fs::exists(dir / "out" / "plot_data.csv"));
  std::ifstream rin(dir / "out" / "report.json");
  const json rep = json::parse(rin);
  CHECK(rep.contains("bounds"));

  log.str("");
  CHECK(solve_file(bad, opts, log) == 1);
  CHECK(log.str().find("epsilon_0") != std::string::npos);
  CHECK(solve_file(broken, opts, log) == 1);
  CHECK(solve_file(dir / "missing.json", opts, log) == 1);

  SolveOptions batch = opts;
  batch.out_dir = (dir / "batch").string();
  const fs::path cfg2 = dir / "ncc.json";
  std::ofstream(cfg2) << json{{"problem", "ncc_toy"}, {"solver", "ncc"}, {"epsilon", 1e-2}}.dump();
  CHECK(solve_batch({cfg, cfg2}, batch, log) == 0);
  CHECK(fs::exists(dir / "batch" / "alm" / "report.json"));
  CHECK(fs::exists(dir / "batch" / "ncc" / "report.json"));
  std::ifstream a(dir / "out" / "trace.csv"), b(dir / "batch" / "alm" / "trace.csv");
  std::string la, lb;
  std::getline(a, la);
  std::getline(b, lb);
  CHECK(la == lb);
  fs::remove_all(dir);
}

TEST_CASE("output directory precedence") {
  RunConfig cfg;
  ::unsetenv("FAL_OUT_DIR");
  CHECK(resolve_out_dir(std::nullopt, cfg) == "fal_out");
  ::setenv("FAL_OUT_DIR", "/tmp/from_env", 1);
  CHECK(resolve_out_dir(std::nullopt, cfg) == "/tmp/from_env");
  cfg.out_dir = "from_config";
  CHECK(resolve_out_dir(std::nullopt, cfg) == "from_config");
  CHECK(resolve_out_dir(std::string("from_flag"), cfg) == "from_flag");
  ::unsetenv("FAL_OUT_DIR");
}

}  // TEST_SUITE
