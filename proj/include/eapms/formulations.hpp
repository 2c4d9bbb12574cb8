#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "eapms/core.hpp"
#include "eapms/linprog.hpp"

namespace eapms {

// Energy-minimization relaxation for one makespan candidate: variables are
// fractional task counts x(i, j) over the pairs whose execution time fits the
// candidate, each type must be fully assigned, and the average load of every
// machine type stays within the candidate.
struct EnergyLp {
  LinearProgram lp;
  std::vector<std::pair<int, int>> pair_for_var;  // (task type, machine type)
};

// Returns nullopt when some task type cannot run anywhere within `ms`
// ("candidate infeasible"): the sweep skips such candidates.
inline std::optional<EnergyLp> build_energy_lp(const Instance& inst, double ms) {
  require(ms > 0.0, ErrorCode::Contract, "makespan candidate must be positive");
  const int T = inst.task_types();
  const int M = inst.machine_types();

  EnergyLp out;
  std::vector<std::vector<int>> var_at(T, std::vector<int>(M, -1));
  for (int i = 0; i < T; ++i) {
    bool allowed_somewhere = false;
    for (int j = 0; j < M; ++j) {
      if (inst.etc(i, j) <= ms + kFeasibilityTol) {
        var_at[i][j] = static_cast<int>(out.pair_for_var.size());
        out.pair_for_var.emplace_back(i, j);
        allowed_somewhere = true;
      }
    }
    if (!allowed_somewhere && inst.tasks_per_type[i] > 0) return std::nullopt;
  }

  const int n = static_cast<int>(out.pair_for_var.size());
  out.lp.sense = Sense::Minimize;
  out.lp.objective.assign(n, 0.0);
  for (int k = 0; k < n; ++k) {
    auto [i, j] = out.pair_for_var[k];
    out.lp.objective[k] = inst.energy_per_task(i, j);
  }
  // Every task type fully assigned.
  for (int i = 0; i < T; ++i) {
    LpRow row{std::vector<double>(n, 0.0), Relation::Equal,
              static_cast<double>(inst.tasks_per_type[i])};
    bool has_var = false;
    for (int j = 0; j < M; ++j)
      if (var_at[i][j] >= 0) {
        row.coeffs[var_at[i][j]] = 1.0;
        has_var = true;
      }
    if (has_var) out.lp.rows.push_back(std::move(row));
  }
  // Average load of each machine type within the candidate.
  for (int j = 0; j < M; ++j) {
    LpRow row{std::vector<double>(n, 0.0), Relation::LessEq, ms};
    bool has_var = false;
    for (int i = 0; i < T; ++i)
      if (var_at[i][j] >= 0) {
        row.coeffs[var_at[i][j]] = inst.etc(i, j) / inst.machines_per_type[j];
        has_var = true;
      }
    if (has_var) out.lp.rows.push_back(std::move(row));
  }
  return out;
}

// Spreads LP variable values back into a full task-type x machine-type matrix.
inline Matrix expand_energy_solution(const Instance& inst, const EnergyLp& elp,
                                     const std::vector<double>& values) {
  require(values.size() == elp.pair_for_var.size(), ErrorCode::Contract,
          "value vector does not match the energy LP");
  Matrix x(inst.task_types(), inst.machine_types());
  for (std::size_t k = 0; k < values.size(); ++k) {
    auto [i, j] = elp.pair_for_var[k];
    x(i, j) = values[k];
  }
  return x;
}

// Baseline linearization: maximize price * rate - energy cost, where variables
// are a completion rate r (var 0) and per-pair throughputs z(i, j) with
// z row i summing to tasks_per_type[i] * r and machine-type average load at
// most one unit of time.
struct TmsLp {
  LinearProgram lp;  // var 0 = rate, then z row-major by (task type, machine type)
};

inline TmsLp build_tms_lp(const Instance& inst) {
  const int T = inst.task_types();
  const int M = inst.machine_types();
  const int n = 1 + T * M;
  auto z = [M](int i, int j) { return 1 + i * M + j; };

  TmsLp out;
  out.lp.sense = Sense::Maximize;
  out.lp.objective.assign(n, 0.0);
  out.lp.objective[0] = inst.price;
  for (int i = 0; i < T; ++i)
    for (int j = 0; j < M; ++j)
      out.lp.objective[z(i, j)] = -inst.energy_cost * inst.energy_per_task(i, j);

  for (int i = 0; i < T; ++i) {
    LpRow row{std::vector<double>(n, 0.0), Relation::Equal, 0.0};
    row.coeffs[0] = -static_cast<double>(inst.tasks_per_type[i]);
    for (int j = 0; j < M; ++j) row.coeffs[z(i, j)] = 1.0;
    out.lp.rows.push_back(std::move(row));
  }
  for (int j = 0; j < M; ++j) {
    LpRow row{std::vector<double>(n, 0.0), Relation::LessEq, 1.0};
    for (int i = 0; i < T; ++i)
      row.coeffs[z(i, j)] = inst.etc(i, j) / inst.machines_per_type[j];
    out.lp.rows.push_back(std::move(row));
  }
  return out;
}

// Smallest max average machine-type load over fractional complete assignments.
// Every integral schedule's makespan is at least this value, so it anchors the
// candidate sweep.
inline double fractional_makespan_lower_bound(const Instance& inst) {
  const int T = inst.task_types();
  const int M = inst.machine_types();
  const int n = T * M + 1;  // x row-major, then the bound variable
  const int bound_var = T * M;
  auto xv = [M](int i, int j) { return i * M + j; };

  LinearProgram lp;
  lp.sense = Sense::Minimize;
  lp.objective.assign(n, 0.0);
  lp.objective[bound_var] = 1.0;
  for (int i = 0; i < T; ++i) {
    LpRow row{std::vector<double>(n, 0.0), Relation::Equal,
              static_cast<double>(inst.tasks_per_type[i])};
    for (int j = 0; j < M; ++j) row.coeffs[xv(i, j)] = 1.0;
    lp.rows.push_back(std::move(row));
  }
  for (int j = 0; j < M; ++j) {
    LpRow row{std::vector<double>(n, 0.0), Relation::LessEq, 0.0};
    for (int i = 0; i < T; ++i)
      row.coeffs[xv(i, j)] = inst.etc(i, j) / inst.machines_per_type[j];
    row.coeffs[bound_var] = -1.0;
    lp.rows.push_back(std::move(row));
  }
  LpSolution sol = solve_lp(lp);
  require(sol.status == LpStatus::Optimal, ErrorCode::Internal,
          "makespan bound LP must be solvable for a valid instance");
  return sol.objective_value;
}

}  // namespace eapms
