#include "run_config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "fal/alm_solver.hpp"
#include "fal/bounds.hpp"
#include "fal/kkt.hpp"
#include "fal/ncc_solver.hpp"
#include "fal/prox.hpp"
#include "fal/scc_solver.hpp"

namespace fal::run {

namespace fs = std::filesystem;

const char* to_string(Solver s) {
  switch (s) {
    case Solver::scc:
      return "scc";
    case Solver::ncc:
      return "ncc";
    case Solver::alm:
      return "alm";
  }
  return "?";
}

namespace {

const std::vector<std::string> kKeys = {
    "problem",    "solver",      "epsilon",   "epsilon_hat_0", "tau",       "epsilon_0",
    "Lambda",     "start.x",     "start.y",   "start.random",  "seed",      "lambda_x0",
    "lambda_y0",  "x_nf",        "max_outer", "max_inner",     "ncc_max_outer",
    "trace_detail", "out_dir",   "report_bounds"};

double get_number(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(key, fmt::format("'{}' must be a number", key));
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(key, fmt::format("'{}' must be finite", key));
  return d;
}

std::int64_t get_count(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
    throw ConfigError(key, fmt::format("'{}' must be a nonnegative integer", key));
  return v.get<std::int64_t>();
}

Vector get_vector(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_array()) throw ConfigError(key, fmt::format("'{}' must be an array of numbers", key));
  Vector out(static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number())
      throw ConfigError(key, fmt::format("'{}' must be an array of numbers", key));
    out(static_cast<Index>(i)) = v[i].get<double>();
  }
  return out;
}

std::string get_string(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_string()) throw ConfigError(key, fmt::format("'{}' must be a string", key));
  return v.get<std::string>();
}

json to_json(const Vector& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Vector from_json(const json& a) {
  Vector v(static_cast<Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Index>(i)) = a[i].get<double>();
  return v;
}

json counters_json(const OracleCounters& c) {
  return {{"n_grad_f", c.n_grad_f},
          {"n_grad_c", c.n_grad_c},
          {"n_grad_d", c.n_grad_d},
          {"n_prox_p", c.n_prox_p},
          {"n_prox_q", c.n_prox_q}};
}

json kkt_json(const KktResiduals& r) {
  return {{"r_stat_x", r.r_stat_x}, {"r_stat_y", r.r_stat_y}, {"r_feas_c", r.r_feas_c},
          {"r_feas_d", r.r_feas_d}, {"r_comp_c", r.r_comp_c}, {"r_comp_d", r.r_comp_d}};
}

Phase top_phase(Solver s) {
  switch (s) {
    case Solver::scc:
      return Phase::scc;
    case Solver::ncc:
      return Phase::ncc;
    case Solver::alm:
      return Phase::alm;
  }
  return Phase::scc;
}

// Finer phases have lower enum values.
bool finer_than(Phase a, Phase b) { return static_cast<int>(a) < static_cast<int>(b); }

BuiltinInstance build_instance(const RunConfig& cfg) {
  try {
    return registry(cfg.problem, cfg.overrides);
  } catch (const NotFound& e) {
    throw ConfigError("problem", e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidParameter& e) {
    // The registry names the parameter; report it under its dotted key.
    std::string key = "problem";
    for (const auto& [k, v] : cfg.overrides)
      if (std::string(e.what()).find("'" + k + "'") != std::string::npos) key = "problem." + k;
    throw ConfigError(key, e.what());
  }
}

void check_dim(const std::optional<Vector>& v, Index n, const std::string& key) {
  if (v && v->size() != n)
    throw ConfigError(key, fmt::format("'{}' has length {}, expected {}", key, v->size(), n));
}

struct Starts {
  Vector x, y;
};

Starts starting_point(const RunConfig& cfg, const BuiltinInstance& inst) {
  Starts s{inst.x_start, inst.y_start};
  if (cfg.random_start) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (Index i = 0; i < s.x.size(); ++i)
      s.x(i) = inst.lo_x(i) + (inst.hi_x(i) - inst.lo_x(i)) * u(rng);
    for (Index i = 0; i < s.y.size(); ++i)
      s.y(i) = inst.lo_y(i) + (inst.hi_y(i) - inst.lo_y(i)) * u(rng);
  }
  if (cfg.start_x) s.x = *cfg.start_x;
  if (cfg.start_y) s.y = *cfg.start_y;
  return s;
}

AlmBoundInputs alm_inputs(const RunConfig& cfg, const BuiltinInstance& inst) {
  AlmBoundInputs in;
  in.constants = inst.problem.constants;
  in.eps = cfg.eps;
  in.eps0 = cfg.eps0;
  in.tau = cfg.tau;
  in.Lambda = cfg.Lambda;
  in.norm_lambda_y0 = cfg.lambda_y0 ? cfg.lambda_y0->norm() : 0.0;
  return in;
}

}  // namespace

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("", "config must be a JSON object");
  RunConfig cfg;
  cfg.source = j;
  for (const auto& [key, value] : j.items()) {
    if (key.rfind("problem.", 0) == 0) {
      const std::string param = key.substr(8);
      if (param.empty()) throw ConfigError(key, "empty problem parameter name");
      cfg.overrides[param] = get_number(j, key);
      continue;
    }
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end())
      throw ConfigError(key, fmt::format("unknown config key '{}'", key));
  }

  if (!j.contains("problem")) throw ConfigError("problem", "missing required key 'problem'");
  cfg.problem = get_string(j, "problem");
  if (!j.contains("solver")) throw ConfigError("solver", "missing required key 'solver'");
  const std::string solver = get_string(j, "solver");
  if (solver == "scc") cfg.solver = Solver::scc;
  else if (solver == "ncc") cfg.solver = Solver::ncc;
  else if (solver == "alm") cfg.solver = Solver::alm;
  else throw ConfigError("solver", fmt::format("'solver' must be scc, ncc or alm, got '{}'", solver));

  if (!j.contains("epsilon")) throw ConfigError("epsilon", "missing required key 'epsilon'");
  cfg.eps = get_number(j, "epsilon");
  if (!(cfg.eps > 0.0)) throw ConfigError("epsilon", "'epsilon' must be positive");

  if (j.contains("epsilon_hat_0")) cfg.eps_hat0 = get_number(j, "epsilon_hat_0");
  if (j.contains("tau")) cfg.tau = get_number(j, "tau");
  if (j.contains("epsilon_0")) cfg.eps0 = get_number(j, "epsilon_0");
  if (j.contains("Lambda")) cfg.Lambda = get_number(j, "Lambda");
  if (j.contains("start.x")) cfg.start_x = get_vector(j, "start.x");
  if (j.contains("start.y")) cfg.start_y = get_vector(j, "start.y");
  if (j.contains("start.random")) {
    if (!j["start.random"].is_boolean()) throw ConfigError("start.random", "'start.random' must be a boolean");
    cfg.random_start = j["start.random"].get<bool>();
  }
  if (j.contains("seed")) cfg.seed = static_cast<std::uint64_t>(get_count(j, "seed"));
  if (j.contains("lambda_x0")) cfg.lambda_x0 = get_vector(j, "lambda_x0");
  if (j.contains("lambda_y0")) cfg.lambda_y0 = get_vector(j, "lambda_y0");
  if (j.contains("x_nf")) cfg.x_nf = get_vector(j, "x_nf");
  if (j.contains("max_outer")) cfg.max_outer = get_count(j, "max_outer");
  if (j.contains("max_inner")) cfg.max_inner = get_count(j, "max_inner");
  if (j.contains("ncc_max_outer")) cfg.ncc_max_outer = get_count(j, "ncc_max_outer");
  if (j.contains("out_dir")) cfg.out_dir = get_string(j, "out_dir");
  if (j.contains("report_bounds")) {
    if (!j["report_bounds"].is_boolean()) throw ConfigError("report_bounds", "'report_bounds' must be a boolean");
    cfg.report_bounds = j["report_bounds"].get<bool>();
  }

  cfg.trace_detail = top_phase(cfg.solver);
  if (j.contains("trace_detail")) {
    const std::string d = get_string(j, "trace_detail");
    if (d == "scc") cfg.trace_detail = Phase::scc;
    else if (d == "ncc") cfg.trace_detail = Phase::ncc;
    else if (d == "alm") cfg.trace_detail = Phase::alm;
    else throw ConfigError("trace_detail", "'trace_detail' must be scc, ncc or alm");
    if (finer_than(top_phase(cfg.solver), cfg.trace_detail))
      throw ConfigError("trace_detail", "'trace_detail' is coarser than the selected solver");
  }

  // Cross-field rules.
  if (cfg.solver == Solver::ncc) {
    const double e = cfg.eps_hat0.value_or(cfg.eps / 2.0);
    if (!(e > 0.0 && e <= cfg.eps / 2.0))
      throw ConfigError("epsilon_hat_0", fmt::format("'epsilon_hat_0' must lie in (0, epsilon/2], got {}", e));
  } else if (cfg.eps_hat0) {
    throw ConfigError("epsilon_hat_0", "'epsilon_hat_0' applies to the ncc solver only");
  }
  if (cfg.solver == Solver::alm) {
    if (!(cfg.eps < 1.0)) throw ConfigError("epsilon", "'epsilon' must lie in (0, 1) for alm");
    if (!(cfg.tau > 0.0 && cfg.tau < 1.0)) throw ConfigError("tau", "'tau' must lie in (0, 1)");
    if (!(cfg.eps0 > cfg.tau * cfg.eps && cfg.eps0 <= 1.0))
      throw ConfigError("epsilon_0", "'epsilon_0' must lie in (tau * epsilon, 1]");
    if (!(cfg.Lambda > 0.0)) throw ConfigError("Lambda", "'Lambda' must be positive");
  }
  return cfg;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", fmt::format("cannot read config '{}'", path.string()));
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", fmt::format("malformed JSON in '{}': {}", path.string(), e.what()));
  }
  return parse_config(j);
}

json bounds_report(const RunConfig& cfg) {
  const BuiltinInstance inst = build_instance(cfg);
  const ProblemConstants& k = inst.problem.constants;
  json out = {{"problem", cfg.problem}, {"solver", to_string(cfg.solver)}};
  json missing = json::array();
  auto note_missing = [&](const MissingConstant& e) {
    if (std::find(missing.begin(), missing.end(), e.symbol()) == missing.end())
      missing.push_back(e.symbol());
  };

  switch (cfg.solver) {
    case Solver::scc: {
      SccBoundInputs in;
      in.sigma_x = inst.sigma_x;
      in.sigma_y = inst.sigma_y;
      in.L = inst.L;
      in.eps_bar = cfg.eps;
      in.D_x = k.D_x;
      in.D_y = k.D_y;
      in.H_star = inst.H_star;
      in.H_low = inst.H_low;
      try {
        const SccBounds b = scc_bounds(in);
        out["scc"] = {{"alpha", b.alpha}, {"delta", b.delta}, {"theta0", b.theta0},
                      {"K", b.K},         {"T", b.T},         {"N", b.N}};
      } catch (const MissingConstant& e) {
        note_missing(e);
      }
      break;
    }
    case Solver::ncc: {
      NccBoundInputs in;
      in.L = inst.L;
      in.eps = cfg.eps;
      in.eps_hat0 = cfg.eps_hat0.value_or(cfg.eps / 2.0);
      in.D_x = k.D_x;
      in.D_y = k.D_y;
      in.max_H_start = inst.max_H_start;
      in.H_star = inst.H_star;
      in.H_low = inst.H_low;
      try {
        const NccBounds b = ncc_bounds(in);
        out["ncc"] = {{"alpha", b.alpha}, {"delta", b.delta}, {"T", b.T},
                      {"N", b.N},         {"max_H_output", b.max_H_output}};
      } catch (const MissingConstant& e) {
        note_missing(e);
      }
      break;
    }
    case Solver::alm: {
      const AlmBoundInputs in = alm_inputs(cfg, inst);
      json a;
      a["K"] = alm_iteration_count(cfg.eps, cfg.eps0, cfg.tau);
      try {
        const AlmBounds b = alm_bounds(in);
        a["L"] = b.L;
        a["alpha"] = b.alpha;
        a["delta"] = b.delta;
        a["M"] = b.M;
        a["paper_literal"] = {{"M", b.M_literal}, {"rho", b.rho_literal}};
        a["T"] = b.T;
        a["N"] = b.N;
        a["r"] = b.r;
      } catch (const MissingConstant& e) {
        note_missing(e);
      }
      try {
        const AlmThresholds t = alm_thresholds(in);
        a["thresholds"] = {{"feas_c", t.feas_c}, {"comp_c", t.comp_c},
                           {"feas_d", t.feas_d}, {"comp_d", t.comp_d}};
      } catch (const MissingConstant& e) {
        note_missing(e);
      }
      try {
        const bool ok = check_eps_condition(in);
        a["eps_condition"] = ok;
        if (!ok) out["advisory"] = "tolerance condition fails: output guarantees are not ensured";
      } catch (const MissingConstant& e) {
        note_missing(e);
      }
      out["alm"] = a;
      break;
    }
  }
  out["missing"] = missing;
  out["complete"] = missing.empty();
  return out;
}

RunResult execute(const RunConfig& cfg, bool include_timing) {
  const BuiltinInstance inst = build_instance(cfg);
  const ConstrainedMinimaxProblem& raw = inst.problem;
  const Starts start = starting_point(cfg, inst);
  check_dim(start.x, raw.n, "start.x");
  check_dim(start.y, raw.m, "start.y");
  check_dim(cfg.lambda_x0, raw.n_c, "lambda_x0");
  check_dim(cfg.lambda_y0, raw.n_d, "lambda_y0");
  check_dim(cfg.x_nf, raw.n, "x_nf");

  SafeguardLimits limits{cfg.max_outer, cfg.max_inner};
  SolveTrace trace;
  trace.set_finest_phase(cfg.trace_detail);

  RunResult res;
  json& rep = res.report;
  rep["problem"] = cfg.problem;
  rep["overrides"] = cfg.overrides;
  rep["solver"] = to_string(cfg.solver);
  rep["config"] = cfg.source;
  json checks = json::object();

  Vector x, y;
  Vector kkt_lx = Vector::Zero(raw.n_c), kkt_ly = Vector::Zero(raw.n_d);
  OracleCounters counters;

  try {
    switch (cfg.solver) {
      case Solver::scc: {
        if (!inst.sigma_x || !inst.sigma_y || raw.n_c + raw.n_d > 0)
          throw ConfigError("solver", fmt::format("instance '{}' is not strongly convex-strongly "
                                                  "concave; use ncc or alm",
                                                  cfg.problem));
        const ConstrainedMinimaxProblem p = instrument(raw, counters);
        trace.attach(&counters);
        const SccProblem sp{p.grad_f, p.prox_p, p.prox_q, *inst.sigma_x, *inst.sigma_y, inst.L,
                            p.grad_f_into};
        SccOptions opts;
        opts.limits = limits;
        opts.trace = &trace;
        const SccResult r = solve_scc(sp, cfg.eps, {-sp.sigma_x * start.x, start.y}, opts);
        x = r.x;
        y = r.y;
        rep["outer_iterations"] = r.outer_iterations;
        rep["inner_iterations"] = r.inner_iterations;
        rep["certificate"] = {{"residual", r.residual}, {"residual_x", r.residual_x},
                              {"residual_y", r.residual_y}, {"tolerance", cfg.eps}};
        checks["certificate"] = r.residual <= cfg.eps;
        break;
      }
      case Solver::ncc: {
        if (raw.n_c + raw.n_d > 0)
          throw ConfigError("solver", fmt::format("instance '{}' has constraints; use alm", cfg.problem));
        const ConstrainedMinimaxProblem p = instrument(raw, counters);
        trace.attach(&counters);
        const NccProblem np{p.grad_f, p.prox_p, p.prox_q, inst.L, require(raw.constants.D_y, "D_y"),
                            p.grad_f_into};
        NccConfig nc;
        nc.eps = cfg.eps;
        nc.eps_hat0 = cfg.eps_hat0.value_or(cfg.eps / 2.0);
        nc.scc_limits = limits;
        nc.max_outer = cfg.ncc_max_outer;
        const NccResult r = solve_ncc(np, nc, {start.x, start.y}, &trace);
        x = r.x;
        y = r.y;
        // Re-certify on the original problem with uncounted oracles.
        const auto cert = certify_stationarity(raw.grad_f, raw.prox_p, raw.prox_q, inst.L,
                                               std::nullopt, x, y);
        const double stop = cfg.eps / (4.0 * inst.L);
        rep["outer_iterations"] = r.outer_iterations;
        rep["displacement"] = r.displacement;
        rep["certificate"] = {{"residual", cert.residual}, {"residual_x", cert.residual_x},
                              {"residual_y", cert.residual_y}, {"tolerance", 3.0 * cfg.eps}};
        checks["certificate"] = cert.residual <= 3.0 * cfg.eps;
        checks["displacement"] = r.displacement <= stop;
        break;
      }
      case Solver::alm: {
        AlmConfig ac;
        ac.eps = cfg.eps;
        ac.tau = cfg.tau;
        ac.eps0 = cfg.eps0;
        ac.Lambda = cfg.Lambda;
        ac.lambda_x0 = cfg.lambda_x0.value_or(Vector::Zero(raw.n_c));
        ac.lambda_y0 = cfg.lambda_y0.value_or(Vector::Zero(raw.n_d));
        ac.x0 = start.x;
        ac.y0 = start.y;
        if (cfg.x_nf) {
          ac.x_nf = *cfg.x_nf;
        } else {
          try {
            ac.x_nf = find_near_feasible(raw, std::min(1.0, std::sqrt(cfg.eps)), start.x);
          } catch (const FeasibilityNotFound& e) {
            throw ConfigError("x_nf", fmt::format("no x_nf given and the search failed: {}", e.what()));
          }
        }
        ac.scc_limits = limits;
        ac.ncc_max_outer = cfg.ncc_max_outer;
        try {
          ac.validate(raw);
        } catch (const InvalidParameter& e) {
          const std::string w = e.what();
          std::string key = "";
          for (const char* k : {"lambda_x0", "lambda_y0", "x_nf", "x0", "y0"})
            if (w.find(k) != std::string::npos) { key = k; break; }
          throw ConfigError(key, w);
        }
        const AlmOutput r = solve_alm(raw, ac, &trace);
        counters = r.counters;
        x = r.x;
        y = r.y;
        kkt_lx = r.lambda_x_tilde;
        kkt_ly = r.lambda_y;
        rep["outer_iterations"] = r.outer_iterations;
        rep["K"] = alm_iteration_count(cfg.eps, cfg.eps0, cfg.tau);
        rep["lambda_x"] = to_json(r.lambda_x);
        rep["lambda_y"] = to_json(r.lambda_y);
        rep["lambda_x_tilde"] = to_json(r.lambda_x_tilde);
        checks["outer_iterations"] = r.outer_iterations == rep["K"].get<std::int64_t>() + 1;
        checks["stationarity"] = r.kkt.r_stat_x <= 3.0 * cfg.eps && r.kkt.r_stat_y <= 3.0 * cfg.eps;
        bool safe = true;
        for (const auto& rec : r.records) {
          if (rec.multipliers.lambda_x.norm() > cfg.Lambda * (1.0 + 1e-15)) safe = false;
          if ((rec.multipliers.lambda_y.array() < 0.0).any()) safe = false;
        }
        checks["multiplier_safeguards"] = safe;
        try {
          const AlmThresholds t = alm_thresholds(alm_inputs(cfg, inst));
          checks["feasibility_c"] = r.kkt.r_feas_c <= t.feas_c;
          checks["feasibility_d"] = r.kkt.r_feas_d <= t.feas_d;
          checks["complementarity_c"] = r.kkt.r_comp_c <= t.comp_c;
          checks["complementarity_d"] = r.kkt.r_comp_d <= t.comp_d;
        } catch (const MissingConstant& e) {
          rep["threshold_checks_skipped"] = e.symbol();
        }
        break;
      }
    }
    rep["status"] = "finished";
  } catch (const IterationLimitExceeded& e) {
    rep["status"] = "iteration_limit";
    rep["message"] = e.what();
    x = e.x();
    y = e.y();
    res.exit_code = 2;
  }

  if (x.size() == raw.n && y.size() == raw.m) {
    rep["x"] = to_json(x);
    rep["y"] = to_json(y);
    rep["kkt_lambda_x"] = to_json(kkt_lx);
    rep["kkt_lambda_y"] = to_json(kkt_ly);
    rep["kkt"] = kkt_json(kkt_residuals(raw, x, y, kkt_lx, kkt_ly));
  }
  if (cfg.solver != Solver::alm) counters = trace.snapshot();
  rep["counters"] = counters_json(counters);

  bool certified = res.exit_code == 0;
  for (const auto& [name, ok] : checks.items()) certified = certified && ok.get<bool>();
  rep["checks"] = checks;
  rep["certified"] = certified;
  if (res.exit_code == 0 && !certified) res.exit_code = 3;
  if (cfg.report_bounds) rep["bounds"] = bounds_report(cfg);

  std::ostringstream csv;
  trace.write_csv(csv, include_timing);
  res.trace_csv = csv.str();

  std::ostringstream plot;
  plot << "outer_iter,n_grad,n_prox,residual_cert,feas_c,feas_d\n";
  for (const TraceRow& row : trace.rows()) {
    if (row.phase != top_phase(cfg.solver)) continue;
    const auto& c = row.counters;
    plot << fmt::format("{},{},{},{},{},{}\n", row.outer_iter, c.n_grad_f + c.n_grad_c + c.n_grad_d,
                        c.n_prox_p + c.n_prox_q, row.residual_cert, row.feas_c, row.feas_d);
  }
  res.plot_csv = plot.str();
  return res;
}

json recompute_kkt(const json& report) {
  InstanceParams params = report.at("overrides").get<InstanceParams>();
  const BuiltinInstance inst = registry(report.at("problem").get<std::string>(), params);
  const KktResiduals r =
      kkt_residuals(inst.problem, from_json(report.at("x")), from_json(report.at("y")),
                    from_json(report.at("kkt_lambda_x")), from_json(report.at("kkt_lambda_y")));
  return kkt_json(r);
}

fs::path resolve_out_dir(const std::optional<std::string>& flag, const RunConfig& cfg) {
  if (flag) return *flag;
  if (cfg.out_dir) return *cfg.out_dir;
  if (const char* env = std::getenv("FAL_OUT_DIR"); env && *env) return env;
  return "fal_out";
}

namespace {

int solve_one(const fs::path& config, const SolveOptions& opts, const std::optional<fs::path>& dir,
              std::ostream& log) {
  RunConfig cfg;
  try {
    cfg = load_config(config);
    if (opts.report_bounds) cfg.report_bounds = true;
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << '\n';
    return 1;
  }
  RunResult r;
  try {
    r = execute(cfg);
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << '\n';
    return 1;
  } catch (const InvalidParameter& e) {
    log << "error: " << e.what() << '\n';
    return 1;
  } catch (const InvalidInput& e) {
    log << "error: " << e.what() << '\n';
    return 1;
  }
  const fs::path out = dir ? *dir : resolve_out_dir(opts.out_dir, cfg);
  fs::create_directories(out);
  std::ofstream(out / "trace.csv") << r.trace_csv;
  std::ofstream(out / "report.json") << r.report.dump(2) << '\n';
  if (opts.emit_plot_data) std::ofstream(out / "plot_data.csv") << r.plot_csv;
  log << fmt::format("{}: {} on {} -> {} (exit {})\n", config.string(), to_string(cfg.solver),
                     cfg.problem, r.report["certified"].get<bool>() ? "certified" : "not certified",
                     r.exit_code);
  return r.exit_code;
}

}  // namespace

int solve_file(const fs::path& config, const SolveOptions& opts, std::ostream& log) {
  return solve_one(config, opts, std::nullopt, log);
}

int solve_batch(const std::vector<fs::path>& configs, const SolveOptions& opts, std::ostream& log) {
  std::vector<std::future<std::pair<int, std::string>>> jobs;
  for (const auto& path : configs) {
    jobs.push_back(std::async(std::launch::async, [&opts, path] {
      std::ostringstream msg;
      std::optional<fs::path> dir;
      try {
        const RunConfig cfg = load_config(path);
        dir = resolve_out_dir(opts.out_dir, cfg) / path.stem();
      } catch (const ConfigError&) {
        // solve_one reports it.
      }
      const int code = solve_one(path, opts, dir, msg);
      return std::pair{code, msg.str()};
    }));
  }
  int worst = 0;
  for (auto& j : jobs) {
    auto [code, msg] = j.get();
    log << msg;
    worst = std::max(worst, code);
  }
  return worst;
}

}  // namespace fal::run
