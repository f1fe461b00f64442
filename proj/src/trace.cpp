#include "fal/trace.hpp"

#include <cmath>
#include <fmt/format.h>

namespace fal {

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::scc:
      return "scc";
    case Phase::ncc:
      return "ncc";
    case Phase::alm:
      return "alm";
  }
  return "?";
}

SolveTrace::SolveTrace() : start_(std::chrono::steady_clock::now()) {}

bool SolveTrace::records(Phase phase) const {
  return static_cast<int>(phase) >= static_cast<int>(finest_);
}

OracleCounters SolveTrace::snapshot() const { return counters_ ? *counters_ : OracleCounters{}; }

void SolveTrace::add(TraceRow row) {
  if (!records(row.phase)) return;
  row.counters = snapshot();
  row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
                    .count();
  rows_.push_back(row);
}

const char* SolveTrace::csv_header() {
  return "phase,outer_iter,inner_iter,eps_k,rho_k,residual_cert,feas_c,feas_d,comp_c,comp_d,"
         "n_grad_f,n_grad_c,n_grad_d,n_prox_p,n_prox_q,wall_ms";
}

namespace {
// Shortest round-trip representation; NaN becomes an empty field.
std::string num(double v) {
  if (std::isnan(v)) return {};
  return fmt::format("{}", v);
}
}  // namespace

void SolveTrace::write_csv(std::ostream& out, bool include_timing) const {
  out << csv_header() << '\n';
  for (const TraceRow& r : rows_) {
    out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", to_string(r.phase),
                       r.outer_iter, r.inner_iter, num(r.eps_k), num(r.rho_k),
                       num(r.residual_cert), num(r.feas_c), num(r.feas_d), num(r.comp_c),
                       num(r.comp_d), r.counters.n_grad_f, r.counters.n_grad_c,
                       r.counters.n_grad_d, r.counters.n_prox_p, r.counters.n_prox_q,
                       include_timing ? num(r.wall_ms) : std::string("0"));
  }
}

}  // namespace fal
