#pragma once

#include <chrono>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "eapms/core.hpp"
#include "eapms/io.hpp"
#include "eapms/oracle.hpp"
#include "eapms/solver.hpp"

namespace eapms {

// One CSV row: a (method, gamma, q) cell of an experiment sweep. Metric
// fields are empty when the solve failed; the error column then carries the
// error code and message.
struct ExperimentRow {
  std::string method;
  double gamma = 0.0;
  int q = 0;
  std::uint64_t seed = 0;
  long long tasks = 0;
  std::optional<double> makespan;
  std::optional<double> energy;
  std::optional<double> profit_rate;
  std::optional<double> ms_candidate;
  double wall_ms = 0.0;
  std::string error;
};

inline std::string csv_header() {
  return "method,gamma,q,seed,tasks,makespan,energy,profit_rate,ms_candidate,"
         "wall_ms,error";
}

namespace detail {

inline std::string fmt_double(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

inline std::string csv_metric(const std::optional<double>& v) {
  return v ? fmt_double("%.12g", *v) : std::string();
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// Runs one solve under a wall clock, converting any failure into the error
// column so the sweep keeps going.
template <class Solve>
ExperimentRow timed_row(const Instance& inst, double gamma, int q,
                        std::uint64_t seed, const char* method_on_error,
                        Solve&& solve) {
  ExperimentRow row;
  row.gamma = gamma;
  row.q = q;
  row.seed = seed;
  row.tasks = inst.total_tasks();
  const auto start = std::chrono::steady_clock::now();
  try {
    SolutionReport report = solve();
    row.method = to_string(report.method);
    row.makespan = report.makespan;
    row.energy = report.energy;
    row.profit_rate = report.profit_rate;
    row.ms_candidate = report.ms_candidate;
  } catch (const Error& e) {
    row.method = method_on_error;
    row.error = std::string(to_string(e.code())) + ": " + e.what();
  } catch (const std::exception& e) {
    row.method = method_on_error;
    row.error = std::string("INTERNAL: ") + e.what();
  }
  row.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return row;
}

}  // namespace detail

inline std::string to_csv_row(const ExperimentRow& r) {
  std::string s;
  s += r.method;
  s += ',';
  s += detail::fmt_double("%.6g", r.gamma);
  s += ',';
  s += std::to_string(r.q);
  s += ',';
  s += std::to_string(r.seed);
  s += ',';
  s += std::to_string(r.tasks);
  s += ',';
  s += detail::csv_metric(r.makespan);
  s += ',';
  s += detail::csv_metric(r.energy);
  s += ',';
  s += detail::csv_metric(r.profit_rate);
  s += ',';
  s += detail::csv_metric(r.ms_candidate);
  s += ',';
  s += detail::fmt_double("%.3f", r.wall_ms);
  s += ',';
  s += detail::csv_escape(r.error);
  return s;
}

// Runs the sweep: experiment index q = 1..replications in the outer loop
// (one generated — or fixed — instance per q), gammas in spec order inside,
// and per gamma one row each for the candidate-sweep solver, the baseline,
// and (opt-in) the exact oracle. Rows are emitted in that fixed order, so
// output is deterministic for a given spec.
inline std::vector<ExperimentRow> run_experiment(const ExperimentSpec& spec) {
  validate_experiment_spec(spec);
  std::optional<Instance> fixed;
  if (!spec.instance_path.empty()) fixed = load_instance(spec.instance_path);

  SweepConfig cfg;
  cfg.epsilon = spec.epsilon;

  std::vector<ExperimentRow> rows;
  for (int q = 1; q <= spec.replications; ++q) {
    const Instance base = fixed ? *fixed : gen_random(spec, q);
    for (double gamma : spec.gammas) {
      const Instance inst = reprice(base, gamma);
      rows.push_back(detail::timed_row(inst, gamma, q, spec.seed, "TTB", [&] {
        return ttb_solve(inst, cfg);
      }));
      rows.push_back(detail::timed_row(inst, gamma, q, spec.seed, "TMS", [&] {
        return tms_solve(inst);
      }));
      if (spec.include_oracle) {
        rows.push_back(
            detail::timed_row(inst, gamma, q, spec.seed, "ORACLE", [&] {
              return exact_opt(inst, OracleBudget{spec.oracle_budget});
            }));
      }
    }
  }
  return rows;
}

inline void write_csv(const std::vector<ExperimentRow>& rows, std::ostream& out) {
  out << csv_header() << '\n';
  for (const ExperimentRow& r : rows) out << to_csv_row(r) << '\n';
}

inline std::string to_csv(const std::vector<ExperimentRow>& rows) {
  std::ostringstream ss;
  write_csv(rows, ss);
  return ss.str();
}

inline void save_csv(const std::vector<ExperimentRow>& rows,
                     const std::string& path) {
  detail::write_text_file(path, to_csv(rows), "results file");
}

}  // namespace eapms
