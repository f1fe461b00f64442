#pragma once

#include <chrono>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "fal/core.hpp"

namespace fal {

enum class Phase { scc, ncc, alm };

const char* to_string(Phase phase);

// One row of trace.csv. Counter columns are cumulative over the solve.
struct TraceRow {
  Phase phase = Phase::scc;
  std::int64_t outer_iter = 0;
  std::int64_t inner_iter = 0;
  double eps_k = std::numeric_limits<double>::quiet_NaN();
  double rho_k = std::numeric_limits<double>::quiet_NaN();
  double residual_cert = std::numeric_limits<double>::quiet_NaN();
  double feas_c = 0.0;
  double feas_d = 0.0;
  double comp_c = 0.0;
  double comp_d = 0.0;
  OracleCounters counters;
  double wall_ms = 0.0;
};

// Collects rows from nested solvers. `counters` is the live counter set the
// solve increments; rows snapshot it.
class SolveTrace {
 public:
  SolveTrace();

  // Only phases at or above `finest` are recorded (alm is coarsest).
  void set_finest_phase(Phase finest) { finest_ = finest; }
  bool records(Phase phase) const;

  void attach(const OracleCounters* counters) { counters_ = counters; }
  OracleCounters snapshot() const;

  void add(TraceRow row);

  const std::vector<TraceRow>& rows() const { return rows_; }

  static const char* csv_header();
  // `include_timing` = false writes wall_ms as 0 for byte-level comparisons.
  void write_csv(std::ostream& out, bool include_timing = true) const;

 private:
  std::vector<TraceRow> rows_;
  const OracleCounters* counters_ = nullptr;
  Phase finest_ = Phase::scc;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace fal
